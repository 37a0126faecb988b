use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{metropolis_sample, MoveSet, SampleStream, SamplerConfig};
use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::scaled::ScaledComplex;

/// Largest system summed exactly in [`EstimatorMode::Auto`].
pub const EXACT_SUM_MAX_SITES: usize = 10;

/// Target number of blocks for the blocked standard error.
pub const DEFAULT_BLOCKS: usize = 50;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorMode {
    /// Exact summation up to [`EXACT_SUM_MAX_SITES`], sampling beyond.
    #[default]
    Auto,
    Exact,
    Sampled,
}

impl EstimatorMode {
    pub fn use_exact(&self, n: usize) -> bool {
        match self {
            EstimatorMode::Auto => n <= EXACT_SUM_MAX_SITES,
            EstimatorMode::Exact => true,
            EstimatorMode::Sampled => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: C64,
    pub stderr: f64,
    pub acceptance: f64,
    pub samples: usize,
}

fn check_sizes<S: AmplitudeSource + ?Sized>(src: &S, op: &Hamiltonian) -> Result<()> {
    if src.n_sites() != op.n_sites() {
        return Err(Error::DimensionMismatch(format!(
            "state on {} sites, operator on {}",
            src.n_sites(),
            op.n_sites()
        )));
    }
    Ok(())
}

/// `sum_v' <v|op|v'> Psi(v') / Psi(v)` over the connected configurations,
/// given `Psi(v)`.
pub fn local_estimator_with<S: AmplitudeSource + ?Sized>(src: &S, op: &Hamiltonian, v: &Config, psi_v: ScaledComplex) -> Result<C64> {
    if psi_v.is_zero() {
        return Err(Error::ZeroAmplitude(format!("local estimator at {v} where the amplitude is zero")));
    }
    let mut e = C64::new(0.0, 0.0);
    for (w, el) in op.connections(v) {
        let a = if &w == v { psi_v } else { src.amplitude(&w) };
        if !a.is_zero() {
            e += el * (a / psi_v).to_complex();
        }
    }
    Ok(e)
}

pub fn local_estimator<S: AmplitudeSource + ?Sized>(src: &S, op: &Hamiltonian, v: &Config) -> Result<C64> {
    check_sizes(src, op)?;
    local_estimator_with(src, op, v, src.amplitude(v))
}

/// `(|Psi(v)|^2 / sum |Psi|^2, v, Psi(v))` over the support, exact.
pub fn exact_distribution<S: AmplitudeSource + ?Sized>(src: &S) -> Result<Vec<(f64, Config, ScaledComplex)>> {
    let n = src.n_sites();
    if n > 20 {
        return Err(Error::CapExceeded {
            what: "exact-summation sites",
            requested: n as u128,
            cap: 20,
        });
    }
    let all: Vec<(Config, ScaledComplex)> = (0..1u64 << n)
        .into_par_iter()
        .map(|k| {
            let v = Config::from_index(n, k);
            let a = src.amplitude(&v);
            (v, a)
        })
        .filter(|(_, a)| !a.is_zero())
        .collect();
    if all.is_empty() {
        return Err(Error::ZeroAmplitude("state vanishes on every configuration".into()));
    }
    let top = all.iter().map(|(_, a)| a.norm_sqr().exponent()).max().unwrap_or(0);
    let w: Vec<f64> = all.iter().map(|(_, a)| a.norm_sqr().scale_pow10(-top).to_complex().re).collect();
    let z: f64 = w.iter().sum();
    Ok(all.into_iter().zip(w).map(|((v, a), w)| (w / z, v, a)).collect())
}

/// Exact `<Psi|op|Psi> / <Psi|Psi>` from local estimators.
pub fn exact_expectation<S: AmplitudeSource + ?Sized>(src: &S, op: &Hamiltonian) -> Result<C64> {
    check_sizes(src, op)?;
    let dist = exact_distribution(src)?;
    let parts: Result<Vec<C64>> = dist
        .par_iter()
        .map(|(p, v, a)| Ok(local_estimator_with(src, op, v, *a)? * *p))
        .collect();
    Ok(parts?.into_iter().sum())
}

/// Mean and blocked standard error. Each chain is cut into equal blocks
/// (about [`DEFAULT_BLOCKS`] in total); the error is the spread of block means.
pub fn blocked_stats(chains: &[Vec<C64>]) -> (C64, f64) {
    let total: usize = chains.iter().map(|c| c.len()).sum();
    if total == 0 {
        return (C64::new(f64::NAN, 0.0), f64::NAN);
    }
    let mean: C64 = chains.iter().flatten().sum::<C64>() / total as f64;
    let per_chain = DEFAULT_BLOCKS.div_ceil(chains.len().max(1)).max(1);
    let mut blocks = Vec::new();
    for c in chains {
        let nb = per_chain.min(c.len());
        if nb == 0 {
            continue;
        }
        let size = c.len() / nb;
        for b in 0..nb {
            let slice = &c[b * size..(b + 1) * size];
            blocks.push(slice.iter().sum::<C64>() / slice.len() as f64);
        }
    }
    if blocks.len() < 2 {
        return (mean, f64::NAN);
    }
    let bm: C64 = blocks.iter().sum::<C64>() / blocks.len() as f64;
    let var: f64 = blocks.iter().map(|b| (b - bm).norm_sqr()).sum::<f64>() / (blocks.len() - 1) as f64;
    (mean, (var / blocks.len() as f64).sqrt())
}

/// Local estimators along each chain of a sample stream.
pub fn local_values<S: AmplitudeSource + ?Sized>(src: &S, op: &Hamiltonian, stream: &SampleStream) -> Result<Vec<Vec<C64>>> {
    check_sizes(src, op)?;
    stream
        .chains
        .par_iter()
        .map(|c| c.samples.iter().map(|v| local_estimator(src, op, v)).collect::<Result<Vec<_>>>())
        .collect()
}

/// `<op>` with a standard error: exact summation when the mode allows it
/// (error zero), Metropolis sampling from `start` otherwise.
pub fn expectation<S: AmplitudeSource + ?Sized>(
    src: &S,
    op: &Hamiltonian,
    moves: MoveSet,
    cfg: &SamplerConfig,
    start: &Config,
    mode: EstimatorMode,
) -> Result<Estimate> {
    check_sizes(src, op)?;
    if mode.use_exact(src.n_sites()) {
        let dist = exact_distribution(src)?;
        let mean = exact_expectation(src, op)?;
        return Ok(Estimate {
            mean,
            stderr: 0.0,
            acceptance: f64::NAN,
            samples: dist.len(),
        });
    }
    let stream = metropolis_sample(src, moves, cfg, start)?;
    let vals = local_values(src, op, &stream)?;
    let (mean, stderr) = blocked_stats(&vals);
    Ok(Estimate {
        mean,
        stderr,
        acceptance: stream.acceptance(),
        samples: stream.len(),
    })
}
