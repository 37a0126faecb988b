//! Neural-network quantum states stored as hidden-unit coupling matrices.
//!
//! A hidden unit of dimension `r` couples to each visible site `j` through an
//! `r x 2` matrix `C_j`. Its correlator value at `v` is
//! `sum_h prod_j C_j[h, v_j]` and the amplitude is the product over units.
//! A second layer of units couples to first-layer units through `r_u x r_j`
//! matrices; those first-layer units then become internal summed variables.

mod rbm;

pub use rbm::{couplings_from_params, log_derivatives, nqs_amplitude_marginal, RbmParams, MARGINAL_CAP};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::scaled::{ProductAcc, ScaledComplex};

/// Default cap on the number of second-layer configurations summed.
pub const DEFAULT_DEEP_CAP: u128 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub enum Coupling {
    Matrix(CMat),
    /// Equivalent to the all-ones matrix; skipped during evaluation.
    Disconnected,
}

impl Coupling {
    pub fn matrix(&self) -> Option<&CMat> {
        match self {
            Coupling::Matrix(m) => Some(m),
            Coupling::Disconnected => None,
        }
    }

    /// All-ones stand-in for a disconnected coupling of the given shape.
    pub fn to_matrix(&self, rows: usize, cols: usize) -> CMat {
        match self {
            Coupling::Matrix(m) => m.clone(),
            Coupling::Disconnected => CMat::ones(rows, cols),
        }
    }
}

const DISCONNECTED: &str = "DISCONNECTED";

impl Serialize for Coupling {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coupling::Matrix(m) => m.serialize(s),
            Coupling::Disconnected => s.serialize_str(DISCONNECTED),
        }
    }
}

impl<'de> Deserialize<'de> for Coupling {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Marker(String),
            Matrix(CMat),
        }
        match Repr::deserialize(d)? {
            Repr::Marker(s) if s == DISCONNECTED => Ok(Coupling::Disconnected),
            Repr::Marker(s) => Err(serde::de::Error::custom(format!(
                "unknown coupling marker {s:?}"
            ))),
            Repr::Matrix(m) => Ok(Coupling::Matrix(m)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenCorrelator {
    dim: usize,
    couplings: Vec<Coupling>,
}

impl HiddenCorrelator {
    pub fn new(dim: usize, couplings: Vec<Coupling>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("hidden unit dimension must be positive".into()));
        }
        for (j, c) in couplings.iter().enumerate() {
            if let Coupling::Matrix(m) = c {
                if m.rows() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "coupling to input {j} has {} rows for a unit of dimension {dim}",
                        m.rows()
                    )));
                }
            }
        }
        Ok(Self { dim, couplings })
    }

    /// Unit with every coupling disconnected.
    pub fn disconnected(dim: usize, inputs: usize) -> Self {
        Self {
            dim,
            couplings: vec![Coupling::Disconnected; inputs],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn couplings_mut(&mut self) -> &mut [Coupling] {
        &mut self.couplings
    }

    pub fn set(&mut self, input: usize, c: Coupling) -> Result<()> {
        if let Coupling::Matrix(m) = &c {
            if m.rows() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "{} rows for a unit of dimension {}",
                    m.rows(),
                    self.dim
                )));
            }
        }
        let slot = self.couplings.get_mut(input).ok_or_else(|| {
            Error::InvalidArgument(format!("input {input} out of range"))
        })?;
        *slot = c;
        Ok(())
    }

    /// Inputs with a non-disconnected coupling.
    pub fn receptive_field(&self) -> Vec<usize> {
        self.couplings
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, Coupling::Matrix(_)))
            .map(|(j, _)| j)
            .collect()
    }

    /// `prod_j C_j[h, v_j]` for every `h`.
    pub fn row_products(&self, v: &Config) -> Vec<ScaledComplex> {
        (0..self.dim)
            .map(|h| {
                let mut acc = ProductAcc::new();
                for (j, c) in self.couplings.iter().enumerate() {
                    if let Coupling::Matrix(m) = c {
                        acc.mul(m[(h, v.get(j) as usize)]);
                        if acc.is_zero() {
                            break;
                        }
                    }
                }
                acc.finish()
            })
            .collect()
    }

    /// `sum_h prod_j C_j[h, v_j]`.
    pub fn value(&self, v: &Config) -> ScaledComplex {
        self.row_products(v).into_iter().sum()
    }

    /// Multiplies every coupling matrix by `c` (disconnected ones stay put).
    pub fn scaled(&self, c: C64) -> Self {
        Self {
            dim: self.dim,
            couplings: self
                .couplings
                .iter()
                .map(|k| match k {
                    Coupling::Matrix(m) => Coupling::Matrix(m.scale(c)),
                    Coupling::Disconnected => Coupling::Disconnected,
                })
                .collect(),
        }
    }
}

/// Coupling matrices laid out side by side, one row per hidden value.
///
/// For a configuration `v`, column `v_j` of the `j`-th block is selected and
/// the correlator value is the sum over rows of the product of the selected
/// elements along each row. Disconnected couplings print as all ones.
pub fn tabulate(c: &HiddenCorrelator) -> String {
    let fmt = |z: C64| -> String {
        if z.im == 0.0 {
            format!("{:.6}", z.re)
        } else {
            format!("{:.6}{:+.6}i", z.re, z.im)
        }
    };
    let blocks: Vec<Vec<Vec<String>>> = c
        .couplings
        .iter()
        .map(|k| {
            let cols = k.matrix().map_or(2, |m| m.cols());
            let m = k.to_matrix(c.dim, cols);
            (0..c.dim)
                .map(|h| m.row(h).iter().map(|&z| fmt(z)).collect())
                .collect()
        })
        .collect();
    let width = blocks
        .iter()
        .flatten()
        .flatten()
        .map(|s| s.len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for h in 0..c.dim {
        let row: Vec<String> = blocks
            .iter()
            .map(|b| {
                let cells: Vec<String> = b[h].iter().map(|s| format!("{s:>width$}")).collect();
                format!("[ {} ]", cells.join("  "))
            })
            .collect();
        out.push_str(&row.join("; "));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NqsModel {
    n_sites: usize,
    layer1: Vec<HiddenCorrelator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layer2: Option<Vec<HiddenCorrelator>>,
}

impl NqsModel {
    pub fn new(n_sites: usize, layer1: Vec<HiddenCorrelator>) -> Result<Self> {
        let m = Self {
            n_sites,
            layer1,
            layer2: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn deep(n_sites: usize, layer1: Vec<HiddenCorrelator>, layer2: Vec<HiddenCorrelator>) -> Result<Self> {
        let m = Self {
            n_sites,
            layer1,
            layer2: Some(layer2),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, u) in self.layer1.iter().enumerate() {
            if u.couplings.len() != self.n_sites {
                return Err(Error::DimensionMismatch(format!(
                    "unit {i} has {} couplings for {} sites",
                    u.couplings.len(),
                    self.n_sites
                )));
            }
            HiddenCorrelator::new(u.dim, u.couplings.clone())?;
            for c in &u.couplings {
                if let Some(m) = c.matrix() {
                    if m.cols() != 2 {
                        return Err(Error::DimensionMismatch(format!(
                            "unit {i}: visible couplings need 2 columns, got {}",
                            m.cols()
                        )));
                    }
                }
            }
        }
        if let Some(l2) = &self.layer2 {
            for (u, unit) in l2.iter().enumerate() {
                if unit.couplings.len() != self.layer1.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "second-layer unit {u} has {} couplings for {} first-layer units",
                        unit.couplings.len(),
                        self.layer1.len()
                    )));
                }
                HiddenCorrelator::new(unit.dim, unit.couplings.clone())?;
                for (j, c) in unit.couplings.iter().enumerate() {
                    if let Some(m) = c.matrix() {
                        if m.cols() != self.layer1[j].dim {
                            return Err(Error::DimensionMismatch(format!(
                                "second-layer unit {u}: coupling to unit {j} has {} columns, expected {}",
                                m.cols(),
                                self.layer1[j].dim
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn layer1(&self) -> &[HiddenCorrelator] {
        &self.layer1
    }

    pub fn layer1_mut(&mut self) -> &mut Vec<HiddenCorrelator> {
        &mut self.layer1
    }

    pub fn layer2(&self) -> Option<&[HiddenCorrelator]> {
        self.layer2.as_deref()
    }

    pub fn is_deep(&self) -> bool {
        self.layer2.as_ref().is_some_and(|l| !l.is_empty())
    }

    pub fn n_hidden(&self) -> usize {
        self.layer1.len() + self.layer2.as_ref().map_or(0, |l| l.len())
    }

    /// Number of second-layer configurations a deep evaluation sums over.
    pub fn deep_configurations(&self) -> u128 {
        self.layer2
            .as_ref()
            .map_or(1, |l| l.iter().map(|u| u.dim as u128).product())
    }

    /// Model whose amplitudes are the pointwise product of both models'.
    pub fn product(&self, other: &NqsModel) -> Result<NqsModel> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch(format!(
                "models on {} and {} sites",
                self.n_sites, other.n_sites
            )));
        }
        let (m1, m2) = (self.layer1.len(), other.layer1.len());
        let mut layer1 = self.layer1.clone();
        layer1.extend(other.layer1.iter().cloned());
        let layer2 = if self.layer2.is_none() && other.layer2.is_none() {
            None
        } else {
            let mut l2 = Vec::new();
            for u in self.layer2.iter().flatten() {
                let mut c = u.couplings.clone();
                c.extend(std::iter::repeat(Coupling::Disconnected).take(m2));
                l2.push(HiddenCorrelator { dim: u.dim, couplings: c });
            }
            for u in other.layer2.iter().flatten() {
                let mut c = vec![Coupling::Disconnected; m1];
                c.extend(u.couplings.iter().cloned());
                l2.push(HiddenCorrelator { dim: u.dim, couplings: c });
            }
            Some(l2)
        };
        let m = NqsModel {
            n_sites: self.n_sites,
            layer1,
            layer2,
        };
        m.validate()?;
        Ok(m)
    }

    /// Evaluates either form; deep models are summed without a cap.
    pub fn evaluate(&self, v: &Config) -> ScaledComplex {
        if self.is_deep() {
            deep_eval(self, v)
        } else {
            single_eval(self, v)
        }
    }
}

fn check_config(m: &NqsModel, v: &Config) -> Result<()> {
    if v.len() != m.n_sites {
        return Err(Error::DimensionMismatch(format!(
            "config of length {} for {} sites",
            v.len(),
            m.n_sites
        )));
    }
    Ok(())
}

fn single_eval(m: &NqsModel, v: &Config) -> ScaledComplex {
    let mut acc = ProductAcc::new();
    for u in &m.layer1 {
        acc.mul_scaled(u.value(v));
        if acc.is_zero() {
            break;
        }
    }
    acc.finish()
}

/// `prod_i sum_h prod_j C_ij[h, v_j]` for a single-layer model.
pub fn nqs_amplitude(m: &NqsModel, v: &Config) -> Result<ScaledComplex> {
    if m.is_deep() {
        return Err(Error::InvalidArgument(
            "model has a second hidden layer; use deep_nqs_amplitude".into(),
        ));
    }
    check_config(m, v)?;
    Ok(single_eval(m, v))
}

fn deep_eval(m: &NqsModel, v: &Config) -> ScaledComplex {
    let layer2 = m.layer2.as_deref().unwrap_or(&[]);
    let rows: Vec<Vec<ScaledComplex>> = m.layer1.iter().map(|u| u.row_products(v)).collect();
    let dims: Vec<usize> = layer2.iter().map(|u| u.dim).collect();
    // second-layer units touching each first-layer unit
    let touching: Vec<Vec<(usize, &CMat)>> = (0..m.layer1.len())
        .map(|j| {
            layer2
                .iter()
                .enumerate()
                .filter_map(|(u, unit)| unit.couplings[j].matrix().map(|c| (u, c)))
                .collect()
        })
        .collect();
    let mut state = vec![0usize; dims.len()];
    let mut total = ScaledComplex::ZERO;
    loop {
        let mut acc = ProductAcc::new();
        for (j, unit_rows) in rows.iter().enumerate() {
            let s: ScaledComplex = unit_rows
                .iter()
                .enumerate()
                .map(|(h, &t)| {
                    let mut w = C64::new(1.0, 0.0);
                    for &(u, c) in &touching[j] {
                        w *= c[(state[u], h)];
                    }
                    t * ScaledComplex::from(w)
                })
                .sum();
            acc.mul_scaled(s);
            if acc.is_zero() {
                break;
            }
        }
        total += acc.finish();
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == dims.len() {
                return total;
            }
            state[k] += 1;
            if state[k] < dims[k] {
                break;
            }
            state[k] = 0;
            k += 1;
        }
    }
}

/// Sums over every second-layer configuration; refuses beyond `cap`.
pub fn deep_nqs_amplitude(m: &NqsModel, v: &Config, cap: u128) -> Result<ScaledComplex> {
    check_config(m, v)?;
    let count = m.deep_configurations();
    if count > cap {
        return Err(Error::CapExceeded {
            what: "second-layer configurations",
            requested: count,
            cap,
        });
    }
    Ok(deep_eval(m, v))
}

impl AmplitudeSource for NqsModel {
    fn n_sites(&self) -> usize {
        self.n_sites
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        self.evaluate(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn trivial_models() {
        let empty = NqsModel::new(3, vec![]).unwrap();
        let ones = NqsModel::new(
            3,
            vec![HiddenCorrelator::new(2, vec![Coupling::Matrix(CMat::ones(2, 2)); 3]).unwrap()],
        )
        .unwrap();
        for v in Config::all(3) {
            assert_eq!(nqs_amplitude(&empty, &v).unwrap(), ScaledComplex::ONE);
            assert_eq!(nqs_amplitude(&ones, &v).unwrap().to_complex(), re(2.0));
        }
    }

    #[test]
    fn disconnected_equals_all_ones() {
        let m = CMat::real(&[&[1.0, 0.5], &[-2.0, 3.0]]);
        let a = NqsModel::new(2, vec![HiddenCorrelator::new(2, vec![Coupling::Matrix(m.clone()), Coupling::Disconnected]).unwrap()]).unwrap();
        let b = NqsModel::new(2, vec![HiddenCorrelator::new(2, vec![Coupling::Matrix(m), Coupling::Matrix(CMat::ones(2, 2))]).unwrap()]).unwrap();
        for v in Config::all(2) {
            assert_eq!(a.evaluate(&v), b.evaluate(&v));
        }
    }

    #[test]
    fn deep_without_layer2_matches_single() {
        let u = HiddenCorrelator::new(3, vec![Coupling::Matrix(CMat::real(&[&[1.0, 2.0], &[0.5, -1.0], &[0.0, 1.0]])); 2]).unwrap();
        let single = NqsModel::new(2, vec![u.clone()]).unwrap();
        let deep = NqsModel::deep(2, vec![u], vec![]).unwrap();
        for v in Config::all(2) {
            assert_eq!(deep_nqs_amplitude(&deep, &v, 1).unwrap(), nqs_amplitude(&single, &v).unwrap());
        }
        assert!(nqs_amplitude(&deep, &Config::zeros(2)).is_ok());
    }

    #[test]
    fn deep_cap_refusal_reports_count() {
        let u = HiddenCorrelator::new(2, vec![Coupling::Disconnected; 2]).unwrap();
        let l2 = vec![HiddenCorrelator::new(4, vec![Coupling::Disconnected]).unwrap(); 3];
        let m = NqsModel::deep(2, vec![u], l2).unwrap();
        let err = deep_nqs_amplitude(&m, &Config::zeros(2), 10).unwrap_err();
        assert!(err.to_string().contains("64"), "{err}");
        assert!(nqs_amplitude(&m, &Config::zeros(2)).is_err());
    }

    #[test]
    fn validation() {
        assert!(HiddenCorrelator::new(3, vec![Coupling::Matrix(CMat::ones(2, 2))]).is_err());
        let u = HiddenCorrelator::new(2, vec![Coupling::Disconnected; 2]).unwrap();
        assert!(NqsModel::new(3, vec![u.clone()]).is_err());
        let bad2 = HiddenCorrelator::new(2, vec![Coupling::Matrix(CMat::ones(2, 3))]).unwrap();
        assert!(NqsModel::deep(2, vec![u], vec![bad2]).is_err());
    }

    #[test]
    fn tabulation_layout() {
        let u = HiddenCorrelator::new(2, vec![Coupling::Matrix(CMat::ones(2, 2)); 2]).unwrap();
        let t = tabulate(&u);
        assert_eq!(t.lines().count(), 2);
        assert_eq!(t.lines().next().unwrap(), "[ 1.000000  1.000000 ]; [ 1.000000  1.000000 ]");
        let r4 = HiddenCorrelator::new(4, vec![Coupling::Matrix(CMat::ones(4, 2)); 3]).unwrap();
        let t4 = tabulate(&r4);
        assert_eq!(t4.lines().count(), 4);
        assert!(t4.lines().all(|l| l.matches('[').count() == 3));
    }

    #[test]
    fn json_marker_and_roundtrip() {
        let u = HiddenCorrelator::new(2, vec![Coupling::Matrix(CMat::identity(2)), Coupling::Disconnected]).unwrap();
        let m = NqsModel::new(2, vec![u]).unwrap();
        let j = serde_json::to_string(&m).unwrap();
        assert!(j.contains("\"DISCONNECTED\""));
        let back: NqsModel = serde_json::from_str(&j).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Coupling>("\"NOPE\"").is_err());
    }
}
