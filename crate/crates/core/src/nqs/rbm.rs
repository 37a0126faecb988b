use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Coupling, HiddenCorrelator, NqsModel};
use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::scaled::{ProductAcc, ScaledComplex};

/// Largest hidden layer the explicit marginal sum accepts.
pub const MARGINAL_CAP: usize = 20;

/// Visible biases `a`, hidden biases `b` and couplings `W` (`M x N`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbmParams {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub w: Vec<Vec<C64>>,
}

impl RbmParams {
    pub fn new(a: Vec<C64>, b: Vec<C64>, w: Vec<Vec<C64>>) -> Result<Self> {
        if w.len() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "W has {} rows for {} hidden units",
                w.len(),
                b.len()
            )));
        }
        if let Some(r) = w.iter().find(|r| r.len() != a.len()) {
            return Err(Error::DimensionMismatch(format!(
                "W row of length {} for {} visible units",
                r.len(),
                a.len()
            )));
        }
        Ok(Self { a, b, w })
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        let z = C64::new(0.0, 0.0);
        Self {
            a: vec![z; n],
            b: vec![z; m],
            w: vec![vec![z; n]; m],
        }
    }

    /// Entries with real and imaginary parts uniform in `[-scale, scale]`.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, scale: f64, rng: &mut R) -> Self {
        let mut draw = || C64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale));
        let a = (0..n).map(|_| draw()).collect();
        let b = (0..m).map(|_| draw()).collect();
        let w = (0..m).map(|_| (0..n).map(|_| draw()).collect()).collect();
        Self { a, b, w }
    }

    /// Real entries uniform in `[-scale, scale]`.
    pub fn random_real<R: Rng + ?Sized>(n: usize, m: usize, scale: f64, rng: &mut R) -> Self {
        let mut draw = || C64::new(rng.gen_range(-scale..=scale), 0.0);
        let a = (0..n).map(|_| draw()).collect();
        let b = (0..m).map(|_| draw()).collect();
        let w = (0..m).map(|_| (0..n).map(|_| draw()).collect()).collect();
        Self { a, b, w }
    }

    pub fn n_visible(&self) -> usize {
        self.a.len()
    }

    pub fn n_hidden(&self) -> usize {
        self.b.len()
    }

    pub fn n_params(&self) -> usize {
        let (n, m) = (self.n_visible(), self.n_hidden());
        n + m + m * n
    }

    /// `theta_i = b_i + sum_j W_ij v_j`.
    pub fn theta(&self, v: &Config) -> Vec<C64> {
        self.w
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| {
                b + row
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| v.get(*j) == 1)
                    .map(|(_, &w)| w)
                    .sum::<C64>()
            })
            .collect()
    }

    /// Closed form `e^{a.v} prod_i (1 + e^{theta_i})`.
    pub fn amplitude(&self, v: &Config) -> ScaledComplex {
        let av: C64 = self
            .a
            .iter()
            .enumerate()
            .filter(|(j, _)| v.get(*j) == 1)
            .map(|(_, &a)| a)
            .sum();
        let mut acc = ProductAcc::new();
        acc.mul_scaled(ScaledComplex::from_ln(av));
        for t in self.theta(v) {
            acc.mul_scaled(ScaledComplex::from_ln(ln_one_plus_exp(t)));
        }
        acc.finish()
    }

    /// Parameters flattened as `[a, b, W row-major]`.
    pub fn to_vec(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.n_params());
        out.extend_from_slice(&self.a);
        out.extend_from_slice(&self.b);
        for r in &self.w {
            out.extend_from_slice(r);
        }
        out
    }

    pub fn from_vec(n: usize, m: usize, x: &[C64]) -> Result<Self> {
        if x.len() != n + m + m * n {
            return Err(Error::DimensionMismatch(format!(
                "{} parameters for N={n}, M={m}",
                x.len()
            )));
        }
        let a = x[..n].to_vec();
        let b = x[n..n + m].to_vec();
        let w = (0..m)
            .map(|i| x[n + m + i * n..n + m + (i + 1) * n].to_vec())
            .collect();
        Ok(Self { a, b, w })
    }

    /// `self + step * dx` with `dx` in the flattened layout.
    pub fn add_scaled(&self, dx: &[C64], step: C64) -> Result<Self> {
        let x: Vec<C64> = self
            .to_vec()
            .iter()
            .zip(dx)
            .map(|(&p, &d)| p + step * d)
            .collect();
        if dx.len() != self.n_params() {
            return Err(Error::DimensionMismatch(format!(
                "{} updates for {} parameters",
                dx.len(),
                self.n_params()
            )));
        }
        Self::from_vec(self.n_visible(), self.n_hidden(), &x)
    }
}

/// `ln(1 + e^t)`, avoiding overflow of `e^t` for large `Re t`.
fn ln_one_plus_exp(t: C64) -> C64 {
    if t.re > 0.0 {
        t + (C64::new(1.0, 0.0) + (-t).exp()).ln()
    } else {
        (C64::new(1.0, 0.0) + t.exp()).ln()
    }
}

/// `e^t / (1 + e^t)`. Only `e^{-|Re t|}`-sized exponentials are formed, so
/// nothing overflows for any finite `t`.
fn logistic(t: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    if t.re > 0.0 {
        one / (one + (-t).exp())
    } else {
        let e = t.exp();
        e / (one + e)
    }
}

impl AmplitudeSource for RbmParams {
    fn n_sites(&self) -> usize {
        self.n_visible()
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        RbmParams::amplitude(self, v)
    }
}

/// One binary hidden unit per row of `W`, with
/// `C_ij[h, v] = exp(h W_ij v + (b_i / N) h + (a_j / M) v)`.
///
/// With `M = 0` the visible fields go into a single one-dimensional unit
/// with rows `(1, exp(a_j))`.
pub fn couplings_from_params(p: &RbmParams) -> NqsModel {
    let (n, m) = (p.n_visible(), p.n_hidden());
    if m == 0 {
        let couplings = (0..n)
            .map(|j| Coupling::Matrix(CMat::from_fn(1, 2, |_, v| if v == 0 { C64::new(1.0, 0.0) } else { p.a[j].exp() })))
            .collect();
        let unit = HiddenCorrelator::new(1, couplings).expect("1x2 couplings");
        return NqsModel::new(n, vec![unit]).expect("consistent shapes");
    }
    let layer1 = (0..m)
        .map(|i| {
            let couplings = (0..n)
                .map(|j| {
                    Coupling::Matrix(CMat::from_fn(2, 2, |h, v| {
                        let (h, v) = (h as f64, v as f64);
                        (p.w[i][j] * h * v + p.b[i] / n as f64 * h + p.a[j] / m as f64 * v).exp()
                    }))
                })
                .collect();
            HiddenCorrelator::new(2, couplings).expect("2x2 couplings")
        })
        .collect();
    NqsModel::new(n, layer1).expect("consistent shapes")
}

/// Explicit sum of `exp(a.v + b.h + h W v)` over all `2^M` hidden configurations.
pub fn nqs_amplitude_marginal(p: &RbmParams, v: &Config) -> Result<ScaledComplex> {
    let m = p.n_hidden();
    if m > MARGINAL_CAP {
        return Err(Error::CapExceeded {
            what: "hidden units in marginal sum",
            requested: m as u128,
            cap: MARGINAL_CAP as u128,
        });
    }
    if v.len() != p.n_visible() {
        return Err(Error::DimensionMismatch(format!(
            "config of length {} for {} visible units",
            v.len(),
            p.n_visible()
        )));
    }
    let n = p.n_visible();
    let mut av = C64::new(0.0, 0.0);
    for j in 0..n {
        if v.get(j) == 1 {
            av += p.a[j];
        }
    }
    let mut total = ScaledComplex::ZERO;
    for hidx in 0..(1u64 << m) {
        let mut e = av;
        for i in 0..m {
            if (hidx >> i) & 1 == 1 {
                e += p.b[i];
                for j in 0..n {
                    if v.get(j) == 1 {
                        e += p.w[i][j];
                    }
                }
            }
        }
        total += ScaledComplex::from_ln(e);
    }
    Ok(total)
}

/// `d ln Psi / d lambda` in the `[a, b, W row-major]` layout.
pub fn log_derivatives(p: &RbmParams, v: &Config) -> Vec<C64> {
    let n = p.n_visible();
    let mut out = Vec::with_capacity(p.n_params());
    out.extend((0..n).map(|j| C64::new(v.get(j) as f64, 0.0)));
    let sig: Vec<C64> = p.theta(v).into_iter().map(logistic).collect();
    out.extend_from_slice(&sig);
    for s in &sig {
        out.extend((0..n).map(|j| *s * v.get(j) as f64));
    }
    out
}
