use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::scaled::ScaledComplex;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MoveSet {
    /// Flip one uniformly chosen site.
    SingleFlip,
    /// Swap a uniformly chosen pair of sites holding different values;
    /// preserves the Hamming weight.
    PairExchange,
    /// Pair exchange with probability `exchange`, single flip otherwise.
    Mixed { exchange: f64 },
}

impl MoveSet {
    pub fn validate(&self) -> Result<()> {
        if let MoveSet::Mixed { exchange } = self {
            if !(0.0..=1.0).contains(exchange) {
                return Err(Error::InvalidArgument(format!(
                    "mixed move ratio {exchange} must lie in [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn preserves_weight(&self) -> bool {
        match *self {
            MoveSet::SingleFlip => false,
            MoveSet::PairExchange => true,
            MoveSet::Mixed { exchange } => exchange >= 1.0,
        }
    }

    /// Proposes a move in place; returns false when no move is possible.
    pub fn propose<R: Rng + ?Sized>(&self, v: &mut Config, rng: &mut R) -> bool {
        let exchange = match *self {
            MoveSet::SingleFlip => false,
            MoveSet::PairExchange => true,
            MoveSet::Mixed { exchange } => rng.gen::<f64>() < exchange,
        };
        let n = v.len();
        if n == 0 {
            return false;
        }
        if !exchange {
            v.flip(rng.gen_range(0..n));
            return true;
        }
        let ones: Vec<usize> = (0..n).filter(|&i| v.get(i) == 1).collect();
        if ones.is_empty() || ones.len() == n {
            return false;
        }
        let zeros: Vec<usize> = (0..n).filter(|&i| v.get(i) == 0).collect();
        let i = ones[rng.gen_range(0..ones.len())];
        let j = zeros[rng.gen_range(0..zeros.len())];
        v.flip(i);
        v.flip(j);
        true
    }

    /// All proposals from `v` with their probabilities.
    pub fn proposals(&self, v: &Config) -> Vec<(Config, f64)> {
        let n = v.len();
        let flips = || -> Vec<(Config, f64)> { (0..n).map(|i| (v.flipped(i), 1.0 / n as f64)).collect() };
        let exchanges = || -> Vec<(Config, f64)> {
            let k = v.weight();
            if k == 0 || k == n {
                return vec![(v.clone(), 1.0)];
            }
            let p = 1.0 / (k * (n - k)) as f64;
            let mut out = Vec::new();
            for i in (0..n).filter(|&i| v.get(i) == 1) {
                for j in (0..n).filter(|&j| v.get(j) == 0) {
                    let mut w = v.clone();
                    w.flip(i);
                    w.flip(j);
                    out.push((w, p));
                }
            }
            out
        };
        match *self {
            MoveSet::SingleFlip => flips(),
            MoveSet::PairExchange => exchanges(),
            MoveSet::Mixed { exchange } => {
                let mut out: Vec<(Config, f64)> = exchanges().into_iter().map(|(w, p)| (w, p * exchange)).collect();
                out.extend(flips().into_iter().map(|(w, p)| (w, p * (1.0 - exchange))));
                out
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Recorded samples per chain.
    pub steps: usize,
    pub burn_in: usize,
    /// Metropolis steps between recorded samples.
    pub thinning: usize,
    pub chains: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            steps: 10_000,
            burn_in: 1_000,
            thinning: 1,
            chains: 4,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    /// Burn-in may be zero; everything else must be positive.
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 || self.thinning == 0 || self.chains == 0 {
            return Err(Error::InvalidArgument(format!(
                "steps, thinning and chains must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Independent generator for one chain.
pub fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub samples: Vec<Config>,
    pub proposed: usize,
    pub accepted: usize,
}

impl Chain {
    pub fn acceptance(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleStream {
    pub chains: Vec<Chain>,
}

impl SampleStream {
    pub fn acceptance(&self) -> f64 {
        let p: usize = self.chains.iter().map(|c| c.proposed).sum();
        let a: usize = self.chains.iter().map(|c| c.accepted).sum();
        if p == 0 {
            0.0
        } else {
            a as f64 / p as f64
        }
    }

    pub fn len(&self) -> usize {
        self.chains.iter().map(|c| c.samples.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Config> {
        self.chains.iter().flat_map(|c| c.samples.iter())
    }
}

/// `|a'/a|^2`; the current amplitude `old` is never zero on a chain.
fn weight_ratio(new: &ScaledComplex, old: &ScaledComplex) -> f64 {
    if new.is_zero() {
        return 0.0;
    }
    (*new / *old).norm_sqr().to_complex().re
}

fn run_chain<S: AmplitudeSource + ?Sized>(
    src: &S,
    moves: MoveSet,
    cfg: &SamplerConfig,
    start: &Config,
    start_amp: ScaledComplex,
    chain: usize,
) -> Chain {
    let mut rng = chain_rng(cfg.seed, chain);
    let mut v = start.clone();
    let mut amp = start_amp;
    let mut out = Chain {
        samples: Vec::with_capacity(cfg.steps),
        proposed: 0,
        accepted: 0,
    };
    let step = |v: &mut Config, amp: &mut ScaledComplex, rng: &mut ChaCha8Rng, stats: &mut Chain| {
        let mut w = v.clone();
        stats.proposed += 1;
        if !moves.propose(&mut w, rng) {
            return;
        }
        let a = src.amplitude(&w);
        let r = weight_ratio(&a, amp);
        if r >= 1.0 || rng.gen::<f64>() < r {
            *v = w;
            *amp = a;
            stats.accepted += 1;
        }
    };
    let mut burn = Chain {
        samples: Vec::new(),
        proposed: 0,
        accepted: 0,
    };
    for _ in 0..cfg.burn_in {
        step(&mut v, &mut amp, &mut rng, &mut burn);
    }
    for _ in 0..cfg.steps {
        for _ in 0..cfg.thinning {
            step(&mut v, &mut amp, &mut rng, &mut out);
        }
        out.samples.push(v.clone());
    }
    out
}

/// Metropolis chains over `|Psi(v)|^2`, run in parallel, each seeded from
/// `(seed, chain index)`. Acceptance statistics exclude burn-in.
pub fn metropolis_sample<S: AmplitudeSource + ?Sized>(
    src: &S,
    moves: MoveSet,
    cfg: &SamplerConfig,
    start: &Config,
) -> Result<SampleStream> {
    cfg.validate()?;
    moves.validate()?;
    if start.len() != src.n_sites() {
        return Err(Error::DimensionMismatch(format!(
            "start of length {} for {} sites",
            start.len(),
            src.n_sites()
        )));
    }
    let a0 = src.amplitude(start);
    if a0.is_zero() {
        return Err(Error::ZeroAmplitude(format!("start configuration {start} has zero amplitude")));
    }
    let chains = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_chain(src, moves, cfg, start, a0, c))
        .collect();
    Ok(SampleStream { chains })
}

/// A configuration with nonzero amplitude: all zeros, all ones, then random
/// draws (at the given weight if one is supplied).
pub fn find_start<S: AmplitudeSource + ?Sized>(src: &S, weight: Option<usize>, seed: u64) -> Result<Config> {
    let n = src.n_sites();
    let mut rng = chain_rng(seed, usize::MAX);
    let mut candidates = Vec::new();
    match weight {
        Some(k) if k > n => {
            return Err(Error::InvalidArgument(format!("weight {k} on {n} sites")));
        }
        Some(k) => candidates.push(Config::from_bits((0..n).map(|i| u8::from(i < k)).collect())?),
        None => {
            candidates.push(Config::zeros(n));
            candidates.push(Config::from_bits(vec![1; n])?);
        }
    }
    for c in candidates {
        if !src.amplitude(&c).is_zero() {
            return Ok(c);
        }
    }
    for _ in 0..10_000 {
        let mut v = Config::zeros(n);
        match weight {
            Some(k) => {
                let mut idx: Vec<usize> = (0..n).collect();
                for t in 0..k {
                    let s = rng.gen_range(t..n);
                    idx.swap(t, s);
                    v.set(idx[t], 1);
                }
            }
            None => {
                for i in 0..n {
                    v.set(i, rng.gen_range(0..2));
                }
            }
        }
        if !src.amplitude(&v).is_zero() {
            return Ok(v);
        }
    }
    Err(Error::ZeroAmplitude("no configuration with nonzero amplitude found".into()))
}

/// Exact Metropolis transition matrix over all `2^N` configurations,
/// `T[a][b] = P(a -> b)`.
pub fn transition_matrix<S: AmplitudeSource + ?Sized>(src: &S, moves: MoveSet) -> Result<Vec<Vec<f64>>> {
    let n = src.n_sites();
    if n > 10 {
        return Err(Error::CapExceeded {
            what: "transition matrix sites",
            requested: n as u128,
            cap: 10,
        });
    }
    let dim = 1usize << n;
    let amps: Vec<ScaledComplex> = (0..dim).map(|k| src.amplitude(&Config::from_index(n, k as u64))).collect();
    let mut t = vec![vec![0.0; dim]; dim];
    for a in 0..dim {
        if amps[a].is_zero() {
            t[a][a] = 1.0;
            continue;
        }
        let v = Config::from_index(n, a as u64);
        let mut stay = 1.0;
        for (w, p) in moves.proposals(&v) {
            let b = w.index() as usize;
            if b == a {
                continue;
            }
            let acc = weight_ratio(&amps[b], &amps[a]).min(1.0);
            t[a][b] += p * acc;
            stay -= p * acc;
        }
        t[a][a] += stay;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{FnAmplitude, Uniform};
    use crate::dense::DenseState;
    use crate::nqs::{couplings_from_params, RbmParams};

    fn cfg(steps: usize, seed: u64) -> SamplerConfig {
        SamplerConfig {
            steps,
            burn_in: 100,
            thinning: 1,
            chains: 4,
            seed,
        }
    }

    #[test]
    fn uniform_always_accepts() {
        let s = metropolis_sample(&Uniform(5), MoveSet::SingleFlip, &cfg(1000, 1), &Config::zeros(5)).unwrap();
        assert_eq!(s.acceptance(), 1.0);
        assert_eq!(s.len(), 4000);
    }

    #[test]
    fn zero_start_rejected() {
        let src = FnAmplitude::new(2, |v: &Config| if v.weight() == 1 { ScaledComplex::ONE } else { ScaledComplex::ZERO });
        assert!(metropolis_sample(&src, MoveSet::SingleFlip, &cfg(10, 0), &Config::zeros(2)).is_err());
        let s = find_start(&src, None, 0).unwrap();
        assert_eq!(s.weight(), 1);
    }

    #[test]
    fn exchange_preserves_weight() {
        let src = FnAmplitude::new(6, |v: &Config| ScaledComplex::from(1.0 + v.index() as f64));
        let start: Config = "110100".parse().unwrap();
        let s = metropolis_sample(&src, MoveSet::PairExchange, &cfg(2000, 3), &start).unwrap();
        assert!(s.iter().all(|v| v.weight() == 3));
    }

    #[test]
    fn reproducible_streams() {
        let mut rng = chain_rng(4, 0);
        let m = couplings_from_params(&RbmParams::random(5, 3, 0.8, &mut rng));
        let a = metropolis_sample(&m, MoveSet::Mixed { exchange: 0.3 }, &cfg(500, 9), &Config::zeros(5)).unwrap();
        let b = metropolis_sample(&m, MoveSet::Mixed { exchange: 0.3 }, &cfg(500, 9), &Config::zeros(5)).unwrap();
        assert_eq!(a, b);
        let c = metropolis_sample(&m, MoveSet::Mixed { exchange: 0.3 }, &cfg(500, 10), &Config::zeros(5)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn detailed_balance() {
        let mut rng = chain_rng(2, 0);
        let m = couplings_from_params(&RbmParams::random(4, 2, 1.0, &mut rng));
        let p = DenseState::from_source(&m, 14).unwrap().probabilities();
        for moves in [MoveSet::SingleFlip, MoveSet::PairExchange, MoveSet::Mixed { exchange: 0.4 }] {
            let t = transition_matrix(&m, moves).unwrap();
            for a in 0..16 {
                assert!((t[a].iter().sum::<f64>() - 1.0).abs() < 1e-12);
                for b in 0..16 {
                    assert!((p[a] * t[a][b] - p[b] * t[b][a]).abs() < 1e-12);
                }
            }
        }
    }
}
