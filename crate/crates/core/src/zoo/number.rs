use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::nqs::{Coupling, HiddenCorrelator, NqsModel};

const ONE: C64 = C64::new(1.0, 0.0);

/// Default free parameter of the sector-cancelling units.
pub const DEFAULT_CANCELLATION_A: f64 = 0.9;

fn uniform_unit(n: usize, m: CMat) -> HiddenCorrelator {
    HiddenCorrelator::new(2, vec![Coupling::Matrix(m); n]).expect("2x2 couplings")
}

/// Units that each couple identically to every site, so their value depends
/// only on the weight `w` of the configuration. Together they vanish on every
/// weight except `n`, where the product is one.
///
/// - a parity unit kills the opposite parity,
/// - a "trivial" unit `[[w, 1], [1, w]]` with `w = e^{i pi / N}` kills the
///   sector among `{0, N}` sharing the parity of `n`,
/// - one unit `[[a, b], [1, 1]]` with `b = e^{i pi / m} / a^{N/m - 1}` kills each
///   remaining same-parity sector `m`.
///
/// Each unit is rescaled so that its value on weight `n` is one.
pub fn build_uniform_number_nqs_with(n_sites: usize, n: usize, a: f64) -> Result<NqsModel> {
    if n == 0 || n >= n_sites {
        return Err(Error::InvalidArgument(format!(
            "weight {n} on {n_sites} sites: need 0 < n < N (use a product state otherwise)"
        )));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidArgument(format!("cancellation parameter a = {a} must lie in (0, 1)")));
    }
    let nn = n_sites as f64;
    let inv_n = 1.0 / nn;
    let omega = C64::from_polar(1.0, PI / nn);
    let mut units = Vec::new();
    let half = 0.5f64.powf(inv_n);
    let parity = if n % 2 == 0 {
        CMat::real(&[&[1.0, -1.0], &[1.0, 1.0]]).scale(C64::new(half, 0.0))
    } else {
        CMat::from_rows(vec![vec![omega, -omega], vec![ONE, ONE]])
            .expect("2x2")
            .scale(C64::new(half, 0.0))
    };
    units.push(uniform_unit(n_sites, parity));
    let same: Vec<usize> = (0..=n_sites).filter(|&m| m % 2 == n % 2 && m != n).collect();
    if same.contains(&0) || same.contains(&n_sites) {
        let s = omega.powu((n_sites - n) as u32) + omega.powu(n as u32);
        let m = CMat::from_rows(vec![vec![omega, ONE], vec![ONE, omega]]).expect("2x2");
        units.push(uniform_unit(n_sites, m.scale(s.powf(-inv_n))));
    }
    for &m in same.iter().filter(|&&m| m != 0 && m != n_sites) {
        let b = C64::from_polar(1.0, PI / m as f64) / a.powf(nn / m as f64 - 1.0);
        let s = ONE + a.powi((n_sites - n) as i32) * b.powu(n as u32);
        let mat = CMat::from_rows(vec![vec![C64::new(a, 0.0), b], vec![ONE, ONE]]).expect("2x2");
        units.push(uniform_unit(n_sites, mat.scale(s.powf(-inv_n))));
    }
    NqsModel::new(n_sites, units)
}

/// Uniform superposition of the weight-`n` configurations on `ceil(N/2)` units.
pub fn build_uniform_number_nqs(n_sites: usize, n: usize) -> Result<NqsModel> {
    build_uniform_number_nqs_with(n_sites, n, DEFAULT_CANCELLATION_A)
}

/// `sum_j alpha_j |0..1_j..0>`: the weight-one model with the first unit's
/// matrices right-multiplied by `diag(1, alpha_j)`.
pub fn build_w_state_nqs(amps: &[C64]) -> Result<NqsModel> {
    let n = amps.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("W state needs N >= 2, got {n}")));
    }
    if amps.iter().all(|a| *a == C64::new(0.0, 0.0)) {
        return Err(Error::ZeroAmplitude("every W-state amplitude is zero".into()));
    }
    let mut m = build_uniform_number_nqs(n, 1)?;
    let first = &mut m.layer1_mut()[0];
    for (j, &a) in amps.iter().enumerate() {
        if let Coupling::Matrix(c) = &mut first.couplings_mut()[j] {
            c.scale_col(1, a);
        }
    }
    Ok(m)
}

/// Laughlin state on lattice points `z_j`: the weight-`n` units times `N - 1`
/// pair units. Unit `i` carries an identity on site `i` and, on each `j > i`,
/// `C[h, v] = (z_i - z_j)^{nu h v} e^{-|z_j|^2 v / j}` (0-based `j`), so the
/// Gaussian of site `j` is split evenly over its `j` pairings with lower
/// sites. Site 0 has no lower partner; its Gaussian sits on unit 0.
pub fn build_laughlin_nqs(coords: &[C64], nu: u32, n: usize) -> Result<NqsModel> {
    let sites = coords.len();
    for i in 0..sites {
        for j in i + 1..sites {
            if coords[i] == coords[j] {
                return Err(Error::InvalidArgument(format!(
                    "sites {i} and {j} share the coordinate {}",
                    coords[i]
                )));
            }
        }
    }
    let mut m = build_uniform_number_nqs(sites, n)?;
    let layer = m.layer1_mut();
    for i in 0..sites - 1 {
        let mut u = HiddenCorrelator::disconnected(2, sites);
        let mut id = CMat::identity(2);
        if i == 0 {
            id.scale_col(1, C64::new((-coords[0].norm_sqr()).exp(), 0.0));
        }
        u.set(i, Coupling::Matrix(id))?;
        for j in i + 1..sites {
            let base = (coords[i] - coords[j]).powu(nu);
            let g = (-coords[j].norm_sqr() / j as f64).exp();
            let c = CMat::from_fn(2, 2, |h, v| match (h, v) {
                (_, 0) => ONE,
                (0, _) => C64::new(g, 0.0),
                _ => base * g,
            });
            u.set(j, Coupling::Matrix(c))?;
        }
        layer.push(u);
    }
    Ok(m)
}
