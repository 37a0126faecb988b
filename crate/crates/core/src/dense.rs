//! Brute-force state vectors over all `2^N` configurations.

use num_complex::Complex64 as C64;

use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::error::{check_site, Error, Result};
use crate::scaled::ScaledComplex;

/// Default largest `N` for which dense vectors are built.
pub const DEFAULT_ORACLE_CAP: usize = 14;

/// Unnormalised amplitudes indexed by [`Config::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<ScaledComplex>,
}

impl DenseState {
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: FnMut(&Config) -> ScaledComplex,
    {
        Self::from_fn_capped(n, DEFAULT_ORACLE_CAP, f)
    }

    pub fn from_fn_capped<F>(n: usize, cap: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&Config) -> ScaledComplex,
    {
        if n > cap {
            return Err(Error::CapExceeded {
                what: "dense oracle sites",
                requested: n as u128,
                cap: cap as u128,
            });
        }
        let amps = Config::all(n).map(|c| f(&c)).collect();
        Ok(Self { n, amps })
    }

    /// Dense vector of any amplitude source, evaluated in parallel.
    pub fn from_source<S: AmplitudeSource + ?Sized>(src: &S, cap: usize) -> Result<Self> {
        use rayon::prelude::*;
        let n = src.n_sites();
        if n > cap {
            return Err(Error::CapExceeded {
                what: "dense oracle sites",
                requested: n as u128,
                cap: cap as u128,
            });
        }
        let amps = (0..(1u64 << n))
            .into_par_iter()
            .map(|k| src.amplitude(&Config::from_index(n, k)))
            .collect();
        Ok(Self { n, amps })
    }

    pub fn from_complex(n: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {n} sites",
                amps.len()
            )));
        }
        Ok(Self {
            n,
            amps: amps.into_iter().map(ScaledComplex::from).collect(),
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            amps: vec![ScaledComplex::ZERO; 1 << n],
        }
    }

    pub fn basis(v: &Config) -> Self {
        let mut s = Self::zeros(v.len());
        s.amps[v.index() as usize] = ScaledComplex::ONE;
        s
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            n,
            amps: vec![ScaledComplex::ONE; 1 << n],
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[ScaledComplex] {
        &self.amps
    }

    pub fn get(&self, v: &Config) -> ScaledComplex {
        self.amps[v.index() as usize]
    }

    pub fn set(&mut self, v: &Config, a: ScaledComplex) {
        self.amps[v.index() as usize] = a;
    }

    /// Native amplitudes divided by `10^e`, where `e` is the largest exponent
    /// present. Returns the vector and `e`.
    pub fn to_rescaled(&self) -> (Vec<C64>, i64) {
        let e = self
            .amps
            .iter()
            .filter(|a| !a.is_zero())
            .map(|a| a.exponent())
            .max()
            .unwrap_or(0);
        (
            self.amps.iter().map(|a| a.scale_pow10(-e).to_complex()).collect(),
            e,
        )
    }

    /// Unit-norm native vector (zero vector stays zero).
    pub fn to_normalized(&self) -> Vec<C64> {
        let (mut v, _) = self.to_rescaled();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|z| *z /= norm);
        }
        v
    }

    pub fn norm_sqr(&self) -> ScaledComplex {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probabilities `|psi(v)|^2 / <psi|psi>`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.to_normalized().iter().map(|z| z.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &DenseState) -> Result<ScaledComplex> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * *b)
            .sum())
    }

    pub fn scaled(&self, c: ScaledComplex) -> DenseState {
        DenseState {
            n: self.n,
            amps: self.amps.iter().map(|a| *a * c).collect(),
        }
    }

    fn check_same(&self, other: &DenseState) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "states on {} and {} sites",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Multiplies amplitudes with `v_i = v_j = 1` by `e^{i phi}`.
    pub fn apply_controlled_phase(&self, i: usize, j: usize, phi: f64) -> Result<DenseState> {
        check_site(i, self.n)?;
        check_site(j, self.n)?;
        if i == j {
            return Err(Error::InvalidArgument(format!(
                "controlled phase needs two distinct sites, got {i} twice"
            )));
        }
        let ph = ScaledComplex::from(C64::from_polar(1.0, phi));
        let (bi, bj) = (self.n - 1 - i, self.n - 1 - j);
        let mut out = self.clone();
        for (k, a) in out.amps.iter_mut().enumerate() {
            if (k >> bi) & 1 == 1 && (k >> bj) & 1 == 1 {
                *a *= ph;
            }
        }
        Ok(out)
    }

    /// Multiplies amplitudes with `v_i = 1` by `e^d`.
    pub fn apply_diagonal_deformation(&self, i: usize, d: C64) -> Result<DenseState> {
        check_site(i, self.n)?;
        let f = ScaledComplex::from_ln(d);
        let bi = self.n - 1 - i;
        let mut out = self.clone();
        for (k, a) in out.amps.iter_mut().enumerate() {
            if (k >> bi) & 1 == 1 {
                *a *= f;
            }
        }
        Ok(out)
    }

    /// Pointwise sum of two states.
    pub fn add(&self, other: &DenseState) -> Result<DenseState> {
        self.check_same(other)?;
        Ok(DenseState {
            n: self.n,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| *a + *b)
                .collect(),
        })
    }

    /// Configurations carrying a nonzero amplitude.
    pub fn support(&self) -> Vec<Config> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, _)| Config::from_index(self.n, k as u64))
            .collect()
    }
}

impl AmplitudeSource for DenseState {
    fn n_sites(&self) -> usize {
        self.n
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        self.get(v)
    }
}

/// `|<a|b>|^2 / (<a|a><b|b>)`.
pub fn fidelity(a: &DenseState, b: &DenseState) -> Result<f64> {
    a.check_same(b)?;
    let (va, _) = a.to_rescaled();
    let (vb, _) = b.to_rescaled();
    let na: f64 = va.iter().map(|z| z.norm_sqr()).sum();
    let nb: f64 = vb.iter().map(|z| z.norm_sqr()).sum();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroAmplitude("fidelity of a zero-norm state".into()));
    }
    let ov: C64 = va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum();
    Ok((ov.norm_sqr() / (na * nb)).min(1.0))
}

/// Largest entrywise difference after normalising both states and removing
/// the relative global phase.
pub fn max_deviation(a: &DenseState, b: &DenseState) -> Result<f64> {
    a.check_same(b)?;
    let va = a.to_normalized();
    let vb = b.to_normalized();
    let ov: C64 = vb.iter().zip(&va).map(|(x, y)| x.conj() * y).sum();
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
    Ok(va
        .iter()
        .zip(&vb)
        .map(|(x, y)| (x - y * phase).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn builder_examples() {
        let s = DenseState::from_fn(1, |_| ScaledComplex::ONE).unwrap();
        assert_eq!(s.amplitudes(), &[ScaledComplex::ONE; 2]);
        let p = DenseState::from_fn(2, |v| ScaledComplex::from((1 - v.parity()) as f64)).unwrap();
        let got: Vec<f64> = p.amplitudes().iter().map(|a| a.to_complex().re).collect();
        assert_eq!(got, vec![1.0, 0.0, 0.0, 1.0]);
        let err = DenseState::from_fn(15, |_| ScaledComplex::ONE).unwrap_err();
        assert!(err.to_string().contains("cap"));
    }

    #[test]
    fn controlled_phase_examples() {
        let u = DenseState::uniform(2);
        assert_eq!(u.apply_controlled_phase(0, 1, 0.0).unwrap(), u);
        let cz = u.apply_controlled_phase(0, 1, std::f64::consts::PI).unwrap();
        let (v, _) = cz.to_rescaled();
        for (z, want) in v.iter().zip([1.0, 1.0, 1.0, -1.0]) {
            assert!((z - c(want)).norm() < 1e-15);
        }
        assert!(u.apply_controlled_phase(0, 2, 1.0).is_err());
        assert!(u.apply_controlled_phase(1, 1, 1.0).is_err());
    }

    #[test]
    fn deformation_examples() {
        let u = DenseState::uniform(1);
        assert_eq!(u.apply_diagonal_deformation(0, c(0.0)).unwrap(), u);
        let d = u.apply_diagonal_deformation(0, c(2f64.ln())).unwrap();
        assert_relative_eq!(d.amplitudes()[1].to_complex().re, 2.0, epsilon = 1e-14);
        assert!(u.apply_diagonal_deformation(1, c(1.0)).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let n = 3;
        let ghz = DenseState::from_fn(n, |v| {
            let w = v.weight();
            ScaledComplex::from(if w == 0 || w == n { 1.0 } else { 0.0 })
        })
        .unwrap();
        let u = DenseState::uniform(n);
        assert_relative_eq!(fidelity(&ghz, &u).unwrap(), 0.25, epsilon = 1e-15);
        assert_relative_eq!(fidelity(&ghz, &ghz).unwrap(), 1.0, epsilon = 1e-15);
        let a = DenseState::basis(&"010".parse().unwrap());
        let b = DenseState::basis(&"011".parse().unwrap());
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!(fidelity(&DenseState::zeros(3), &a).is_err());
    }

    #[test]
    fn fidelity_survives_huge_amplitudes() {
        let big = ScaledComplex::from_ln(C64::new(5000.0, 0.3));
        let u = DenseState::uniform(3);
        assert_relative_eq!(fidelity(&u.scaled(big), &u).unwrap(), 1.0, epsilon = 1e-14);
    }
}
