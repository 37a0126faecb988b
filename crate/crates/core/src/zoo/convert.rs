use num_complex::Complex64 as C64;

use crate::config::Config;
use crate::cps::{Boundary, MpsCorrelator, MpsTensor};
use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::nqs::{Coupling, HiddenCorrelator, NqsModel};
use crate::tensors::CpdTensor;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Default suppression factor for the finite-`s` constructions.
pub const DEFAULT_SUPPRESSION: f64 = 1e-3;

/// Default cap on the composite bond dimension of [`nqs_to_mps`].
pub const DEFAULT_MPS_BOND_CAP: usize = 1024;

fn check_suppression(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("suppression s = {s} must lie in (0, 1)")));
    }
    Ok(())
}

/// One binary unit per target `(v^(j), Psi_j)` with rows `(s, s)` and
/// `eta (1 - v_i, v_i)`, `eta = Psi_j^{1/N} / s^{k-1}`. Each target amplitude
/// comes out as `Psi_j + s^{Nk}` and every other configuration as `s^{Nk}`.
pub fn universal_nqs(targets: &[(Config, C64)], s: f64) -> Result<NqsModel> {
    check_suppression(s)?;
    let n = targets.first().map(|t| t.0.len()).ok_or_else(|| {
        Error::InvalidArgument("at least one target configuration is needed".into())
    })?;
    let k = targets.len();
    for (a, (v, psi)) in targets.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "target {a} has length {} instead of {n}",
                v.len()
            )));
        }
        if *psi == ZERO {
            return Err(Error::ZeroAmplitude(format!("target {a} ({v}) has zero amplitude")));
        }
        if targets[..a].iter().any(|(w, _)| w == v) {
            return Err(Error::InvalidArgument(format!("target {v} listed twice")));
        }
    }
    let units = targets
        .iter()
        .map(|(v, psi)| {
            let eta = psi.powf(1.0 / n as f64) / s.powi(k as i32 - 1);
            let couplings = (0..n)
                .map(|i| {
                    let b = v.get(i) as usize;
                    Coupling::Matrix(CMat::from_fn(2, 2, |h, x| match h {
                        0 => C64::new(s, 0.0),
                        _ if x == b => eta,
                        _ => ZERO,
                    }))
                })
                .collect();
            HiddenCorrelator::new(2, couplings)
        })
        .collect::<Result<Vec<_>>>()?;
    NqsModel::new(n, units)
}

/// Two-layer model of a CPD over binary legs.
///
/// First layer: one binary unit per rank term `j`, with rows `(s, s)` and
/// `c^(j)_i / s^{r-1}` on leg `i` (`lambda_j` folded into leg 0). Second layer:
/// `ceil(log2 r)` binary units; unit `l` forces its value to bit `l` of `j`
/// whenever first-layer unit `j` is on, so at most one term is selected. The
/// deep amplitude is `T + 2^A s^{d r}`. For `r = 1` the suppression row is
/// zero and the single-layer result is exact.
pub fn cpd_to_two_layer(t: &CpdTensor, s: f64) -> Result<NqsModel> {
    check_suppression(s)?;
    if let Some(d) = t.dims().iter().find(|&&d| d != 2) {
        return Err(Error::DimensionMismatch(format!("CPD legs must be binary, found dimension {d}")));
    }
    let r = t.rank();
    let d = t.order();
    let base = if r == 1 { ZERO } else { C64::new(s, 0.0) };
    let denom = s.powi(r as i32 - 1);
    let layer1 = (0..r)
        .map(|j| {
            let couplings = (0..d)
                .map(|i| {
                    let f = &t.factors()[i];
                    let w = if i == 0 { t.weights()[j] } else { ONE };
                    Coupling::Matrix(CMat::from_fn(2, 2, |h, x| {
                        if h == 0 {
                            base
                        } else {
                            w * f[(j, x)] / denom
                        }
                    }))
                })
                .collect();
            HiddenCorrelator::new(2, couplings)
        })
        .collect::<Result<Vec<_>>>()?;
    if r == 1 {
        return NqsModel::new(d, layer1);
    }
    let a = usize::BITS - (r - 1).leading_zeros();
    let layer2 = (0..a as usize)
        .map(|l| {
            let couplings = (0..r)
                .map(|j| {
                    let bit = (j >> l) & 1;
                    Coupling::Matrix(CMat::from_fn(2, 2, |x, h| {
                        if h == 0 || x == bit {
                            ONE
                        } else {
                            ZERO
                        }
                    }))
                })
                .collect();
            HiddenCorrelator::new(2, couplings)
        })
        .collect::<Result<Vec<_>>>()?;
    NqsModel::deep(d, layer1, layer2)
}

/// MPS whose bond index is the joint value of all hidden units, so
/// `chi = prod_i r_i`. Site tensors are diagonal in the bond with entries
/// `prod_i C_ij[h_i, p]`.
pub fn nqs_to_mps(m: &NqsModel, max_bond: usize) -> Result<MpsCorrelator> {
    if m.is_deep() {
        return Err(Error::InvalidArgument("only single-layer models convert to an MPS".into()));
    }
    let n = m.n_sites();
    if n == 0 {
        return Err(Error::InvalidArgument("model has no sites".into()));
    }
    let dims: Vec<usize> = m.layer1().iter().map(|u| u.dim()).collect();
    let chi = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    let chi = match chi {
        Some(c) if c <= max_bond => c,
        _ => {
            return Err(Error::CapExceeded {
                what: "MPS bond dimension",
                requested: dims.iter().map(|&d| d as u128).product(),
                cap: max_bond as u128,
            })
        }
    };
    let digits = |mut h: usize| -> Vec<usize> {
        dims.iter()
            .map(|&d| {
                let x = h % d;
                h /= d;
                x
            })
            .collect()
    };
    let joint: Vec<Vec<usize>> = (0..chi).map(digits).collect();
    let site_value = |j: usize, h: usize, p: usize| -> C64 {
        m.layer1()
            .iter()
            .zip(&joint[h])
            .map(|(u, &hi)| u.couplings()[j].matrix().map_or(ONE, |c| c[(hi, p)]))
            .product()
    };
    let tensors = (0..n)
        .map(|j| {
            if n == 1 {
                MpsTensor::from_fn(1, 1, |_, p, _| (0..chi).map(|h| site_value(0, h, p)).sum())
            } else if j == 0 {
                MpsTensor::from_fn(1, chi, |_, p, r| site_value(j, r, p))
            } else if j == n - 1 {
                MpsTensor::from_fn(chi, 1, |l, p, _| site_value(j, l, p))
            } else {
                MpsTensor::from_fn(chi, chi, |l, p, r| if l == r { site_value(j, l, p) } else { ZERO })
            }
        })
        .collect();
    MpsCorrelator::new((0..n).collect(), tensors, Boundary::Open)
}
