use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimator::{blocked_stats, exact_distribution, local_estimator, local_estimator_with, EstimatorMode};
use super::sampler::{find_start, metropolis_sample, MoveSet, SamplerConfig};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::nqs::{log_derivatives, RbmParams};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientMode {
    /// `g_k = 2 Re[<E O_k*> - <E><O_k*>]`; only the real parts of the
    /// parameters move.
    #[default]
    Real,
    /// `g_k = 2 (<E O_k*> - <E><O_k*>)`, twice the Wirtinger derivative
    /// `dE / d lambda_k*`; real and imaginary parts both move.
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SgdConfig {
    pub rate: f64,
    pub steps: usize,
    /// Samples per step come from `sampler.steps` per chain; its seed seeds
    /// the whole run.
    pub sampler: SamplerConfig,
    pub estimator: EstimatorMode,
    pub gradient: GradientMode,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            rate: 0.05,
            steps: 1000,
            sampler: SamplerConfig {
                steps: 1000,
                burn_in: 100,
                thinning: 1,
                chains: 4,
                seed: 0,
            },
            estimator: EstimatorMode::Auto,
            gradient: GradientMode::Real,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: usize,
    pub energy: f64,
    pub stderr: f64,
    pub acceptance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SgdOutcome {
    pub params: RbmParams,
    /// Energy of the parameters entering each step, then one final row for
    /// the returned parameters.
    pub trace: Vec<TraceRow>,
    /// First step whose energy or gradient was not finite; the run stops there
    /// and `params` are the last finite ones.
    pub diverged_at: Option<usize>,
}

impl SgdOutcome {
    pub fn final_energy(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |r| r.energy)
    }
}

/// Energy and energy gradient at one parameter point.
#[derive(Clone, Debug)]
pub struct GradientEstimate {
    pub energy: C64,
    pub stderr: f64,
    pub acceptance: f64,
    pub gradient: Vec<C64>,
    pub last_sample: Option<Config>,
}

fn step_seed(seed: u64, step: usize) -> u64 {
    seed.wrapping_add((step as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn covariance_gradient(weighted: &[(f64, C64, Vec<C64>)], mode: GradientMode, n_params: usize) -> (C64, Vec<C64>) {
    let e: C64 = weighted.iter().map(|(p, el, _)| el * p).sum();
    let mut eo = vec![C64::new(0.0, 0.0); n_params];
    let mut o = vec![C64::new(0.0, 0.0); n_params];
    for (p, el, d) in weighted {
        for k in 0..n_params {
            let oc = d[k].conj();
            eo[k] += el * oc * *p;
            o[k] += oc * *p;
        }
    }
    let g = eo
        .iter()
        .zip(&o)
        .map(|(&a, &b)| {
            let g = (a - e * b) * 2.0;
            match mode {
                GradientMode::Real => C64::new(g.re, 0.0),
                GradientMode::Complex => g,
            }
        })
        .collect();
    (e, g)
}

/// Energy and gradient, summed exactly or estimated from Metropolis samples.
pub fn energy_gradient(
    p: &RbmParams,
    h: &Hamiltonian,
    moves: MoveSet,
    sampler: &SamplerConfig,
    estimator: EstimatorMode,
    gradient: GradientMode,
    start: &Config,
) -> Result<GradientEstimate> {
    let np = p.n_params();
    if estimator.use_exact(p.n_visible()) {
        let dist = exact_distribution(p)?;
        let rows: Result<Vec<(f64, C64, Vec<C64>)>> = dist
            .par_iter()
            .map(|(w, v, a)| Ok((*w, local_estimator_with(p, h, v, *a)?, log_derivatives(p, v))))
            .collect();
        let (energy, g) = covariance_gradient(&rows?, gradient, np);
        return Ok(GradientEstimate {
            energy,
            stderr: 0.0,
            acceptance: f64::NAN,
            gradient: g,
            last_sample: None,
        });
    }
    let stream = metropolis_sample(p, moves, sampler, start)?;
    let vals: Result<Vec<Vec<C64>>> = stream
        .chains
        .par_iter()
        .map(|c| c.samples.iter().map(|v| local_estimator(p, h, v)).collect())
        .collect();
    let vals = vals?;
    let (_, stderr) = blocked_stats(&vals);
    let w = 1.0 / stream.len() as f64;
    let rows: Vec<(f64, C64, Vec<C64>)> = stream
        .chains
        .iter()
        .zip(&vals)
        .flat_map(|(c, e)| c.samples.iter().zip(e).map(|(v, &el)| (w, el, log_derivatives(p, v))))
        .collect();
    let (energy, g) = covariance_gradient(&rows, gradient, np);
    Ok(GradientEstimate {
        energy,
        stderr,
        acceptance: stream.acceptance(),
        gradient: g,
        last_sample: stream.chains.first().and_then(|c| c.samples.last().cloned()),
    })
}

/// Plain stochastic gradient descent, `lambda <- lambda - rate g`.
pub fn optimize_sgd(model: &RbmParams, h: &Hamiltonian, moves: MoveSet, cfg: &SgdConfig) -> Result<SgdOutcome> {
    if h.n_sites() != model.n_visible() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian on {} sites, model on {}",
            h.n_sites(),
            model.n_visible()
        )));
    }
    let defect = h.hermiticity_defect();
    if !h.is_hermitian() {
        return Err(Error::NotHermitian(defect));
    }
    if !cfg.rate.is_finite() || cfg.rate < 0.0 {
        return Err(Error::InvalidArgument(format!("learning rate {} must be finite and non-negative", cfg.rate)));
    }
    cfg.sampler.validate()?;
    moves.validate()?;
    let exact = cfg.estimator.use_exact(model.n_visible());
    let mut start = if exact {
        Config::zeros(model.n_visible())
    } else {
        find_start(model, None, cfg.sampler.seed)?
    };
    let mut params = model.clone();
    let mut trace = Vec::with_capacity(cfg.steps + 1);
    let rate = C64::new(-cfg.rate, 0.0);
    for step in 0..=cfg.steps {
        let sampler = SamplerConfig {
            seed: step_seed(cfg.sampler.seed, step),
            ..cfg.sampler
        };
        let est = energy_gradient(&params, h, moves, &sampler, cfg.estimator, cfg.gradient, &start);
        let est = match est {
            Ok(e) => e,
            Err(Error::ZeroAmplitude(_)) => {
                return Ok(SgdOutcome {
                    params,
                    trace,
                    diverged_at: Some(step),
                })
            }
            Err(e) => return Err(e),
        };
        let finite = est.energy.re.is_finite() && est.gradient.iter().all(|g| g.re.is_finite() && g.im.is_finite());
        if !finite {
            return Ok(SgdOutcome {
                params,
                trace,
                diverged_at: Some(step),
            });
        }
        trace.push(TraceRow {
            step,
            energy: est.energy.re,
            stderr: est.stderr,
            acceptance: est.acceptance,
        });
        if step == cfg.steps {
            break;
        }
        if let Some(v) = est.last_sample {
            start = v;
        }
        params = params.add_scaled(&est.gradient, rate)?;
    }
    Ok(SgdOutcome {
        params,
        trace,
        diverged_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ground_state_exact;
    use crate::hamiltonian::{tfim, z_field};
    use crate::vmc::estimator::exact_expectation;
    use crate::vmc::sampler::chain_rng;

    fn exact_cfg(rate: f64, steps: usize) -> SgdConfig {
        SgdConfig {
            rate,
            steps,
            estimator: EstimatorMode::Exact,
            ..SgdConfig::default()
        }
    }

    #[test]
    fn zero_rate_keeps_parameters() {
        let mut rng = chain_rng(2, 0);
        let p = RbmParams::random(4, 2, 0.3, &mut rng);
        let h = tfim(4, 1.0, 1.0, true).unwrap();
        let out = optimize_sgd(&p, &h, MoveSet::SingleFlip, &exact_cfg(0.0, 5)).unwrap();
        assert_eq!(out.params, p);
        assert_eq!(out.trace.len(), 6);
    }

    #[test]
    fn one_step_descends() {
        let mut rng = chain_rng(9, 0);
        let h = tfim(5, 1.0, 0.8, true).unwrap();
        let mut down = 0;
        for t in 0..100 {
            let p = if t % 2 == 0 {
                RbmParams::random_real(5, 3, 0.5, &mut rng)
            } else {
                RbmParams::random(5, 3, 0.5, &mut rng)
            };
            let mode = if t % 4 < 2 { GradientMode::Real } else { GradientMode::Complex };
            let cfg = SgdConfig { gradient: mode, ..exact_cfg(1e-3, 1) };
            let out = optimize_sgd(&p, &h, MoveSet::SingleFlip, &cfg).unwrap();
            let before = exact_expectation(&p, &h).unwrap().re;
            let after = exact_expectation(&out.params, &h).unwrap().re;
            down += usize::from(after < before);
        }
        assert!(down >= 95, "{down}/100");
    }

    #[test]
    fn field_polarises() {
        let mut rng = chain_rng(4, 0);
        let p = RbmParams::random_real(6, 2, 0.3, &mut rng);
        let h = z_field(6, 1.0).unwrap();
        let out = optimize_sgd(&p, &h, MoveSet::SingleFlip, &exact_cfg(0.3, 600)).unwrap();
        let e = out.final_energy();
        assert!((e + 6.0).abs() < 0.06, "{e}");
    }

    #[test]
    fn tfim_ground_energy() {
        let h = tfim(6, 1.0, 1.0, true).unwrap();
        let (e0, _) = ground_state_exact(&h).unwrap();
        let mut rng = chain_rng(7, 0);
        let p = RbmParams::random_real(6, 6, 0.3, &mut rng);
        let out = optimize_sgd(&p, &h, MoveSet::SingleFlip, &exact_cfg(0.3, 3000)).unwrap();
        let rel = (out.final_energy() - e0).abs() / e0.abs();
        assert!(rel < 0.01, "{} vs {e0}", out.final_energy());
    }

    #[test]
    fn sampled_runs_are_reproducible() {
        let mut rng = chain_rng(3, 0);
        let p = RbmParams::random_real(6, 3, 0.3, &mut rng);
        let h = tfim(6, 1.0, 1.0, true).unwrap();
        let cfg = SgdConfig {
            rate: 0.05,
            steps: 10,
            sampler: SamplerConfig { steps: 200, burn_in: 20, thinning: 1, chains: 2, seed: 7 },
            estimator: EstimatorMode::Sampled,
            gradient: GradientMode::Real,
        };
        let a = optimize_sgd(&p, &h, MoveSet::SingleFlip, &cfg).unwrap();
        let b = optimize_sgd(&p, &h, MoveSet::SingleFlip, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.trace.iter().all(|r| r.acceptance > 0.0 && r.stderr > 0.0));
    }

    #[test]
    fn divergence_is_reported() {
        let mut rng = chain_rng(5, 0);
        let p = RbmParams::random_real(3, 2, 0.5, &mut rng);
        // three bonds of 1e308 overflow the local energy
        let h = tfim(3, 1e308, 1.0, true).unwrap();
        let out = optimize_sgd(&p, &h, MoveSet::SingleFlip, &exact_cfg(0.1, 5)).unwrap();
        assert!(out.diverged_at.is_some());
        assert!(out.trace.len() < 6);
    }
}
