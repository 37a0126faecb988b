//! Correlator product states.
//!
//! An amplitude is the product, over correlators, of the entry selected by
//! the configuration restricted to each correlator's sites. Correlators may
//! overlap freely.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::error::{check_site, Error, Result};
use crate::ising::ClassicalIsingParams;
use crate::scaled::{ProductAcc, ScaledComplex};

/// Largest site count of a dense correlator table.
pub const MAX_TABLE_SITES: usize = 12;

/// Dense table over `2^l` local configurations; the first listed site is the
/// most significant bit of the table index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericCorrelator {
    sites: Vec<usize>,
    table: Vec<C64>,
}

impl GenericCorrelator {
    pub fn new(sites: Vec<usize>, table: Vec<C64>) -> Result<Self> {
        let c = Self { sites, table };
        c.validate()?;
        Ok(c)
    }

    pub fn from_fn(sites: Vec<usize>, f: impl Fn(&[u8]) -> C64) -> Result<Self> {
        let l = sites.len();
        if l > MAX_TABLE_SITES {
            return Err(Error::CapExceeded {
                what: "correlator sites",
                requested: l as u128,
                cap: MAX_TABLE_SITES as u128,
            });
        }
        let table = (0..(1u64 << l))
            .map(|k| f(Config::from_index(l, k).bits()))
            .collect();
        Self::new(sites, table)
    }

    fn validate(&self) -> Result<()> {
        let l = self.sites.len();
        if l > MAX_TABLE_SITES {
            return Err(Error::CapExceeded {
                what: "correlator sites",
                requested: l as u128,
                cap: MAX_TABLE_SITES as u128,
            });
        }
        let mut s = self.sites.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated site in {:?}", self.sites)));
        }
        if self.table.len() != 1 << l {
            return Err(Error::DimensionMismatch(format!(
                "table of {} entries for {l} sites",
                self.table.len()
            )));
        }
        Ok(())
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn table(&self) -> &[C64] {
        &self.table
    }

    pub fn entry(&self, v: &Config) -> C64 {
        let k = self.sites.iter().fold(0usize, |acc, &s| (acc << 1) | v.get(s) as usize);
        self.table[k]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Order-3 site tensor `A[l][p][r]` with physical dimension 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpsTensor {
    pub left: usize,
    pub right: usize,
    /// Index `(l * 2 + p) * right + r`.
    pub data: Vec<C64>,
}

impl MpsTensor {
    pub fn new(left: usize, right: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != left * 2 * right {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {left}x2x{right} site tensor",
                data.len()
            )));
        }
        Ok(Self { left, right, data })
    }

    pub fn from_fn(left: usize, right: usize, f: impl Fn(usize, usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(left * 2 * right);
        for l in 0..left {
            for p in 0..2 {
                for r in 0..right {
                    data.push(f(l, p, r));
                }
            }
        }
        Self { left, right, data }
    }

    #[inline]
    pub fn get(&self, l: usize, p: usize, r: usize) -> C64 {
        self.data[(l * 2 + p) * self.right + r]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpsCorrelator {
    sites: Vec<usize>,
    tensors: Vec<MpsTensor>,
    boundary: Boundary,
}

impl MpsCorrelator {
    pub fn new(sites: Vec<usize>, tensors: Vec<MpsTensor>, boundary: Boundary) -> Result<Self> {
        let c = Self {
            sites,
            tensors,
            boundary,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites.len() != self.tensors.len() || self.sites.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} sites but {} tensors",
                self.sites.len(),
                self.tensors.len()
            )));
        }
        for t in &self.tensors {
            if t.data.len() != t.left * 2 * t.right {
                return Err(Error::DimensionMismatch("site tensor entry count".into()));
            }
        }
        for (k, w) in self.tensors.windows(2).enumerate() {
            if w[0].right != w[1].left {
                return Err(Error::DimensionMismatch(format!(
                    "bond {k}: right dim {} vs left dim {}",
                    w[0].right, w[1].left
                )));
            }
        }
        let (first, last) = (&self.tensors[0], &self.tensors[self.tensors.len() - 1]);
        match self.boundary {
            Boundary::Open if first.left != 1 || last.right != 1 => Err(Error::DimensionMismatch(
                "open boundary needs outer bond dimensions 1".into(),
            )),
            Boundary::Periodic if first.left != last.right => Err(Error::DimensionMismatch(
                "periodic boundary needs matching outer bond dimensions".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn tensors(&self) -> &[MpsTensor] {
        &self.tensors
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Largest bond dimension.
    pub fn bond_dim(&self) -> usize {
        self.tensors.iter().map(|t| t.left.max(t.right)).max().unwrap_or(1)
    }

    /// Number of matrix entries visited by one evaluation.
    pub fn reads(&self) -> usize {
        let rows = match self.boundary {
            Boundary::Open => 1,
            Boundary::Periodic => self.tensors[0].left,
        };
        rows * self.tensors.iter().map(|t| t.left * t.right).sum::<usize>()
    }
}

fn rescale(v: &mut [C64], exponent: &mut i64) {
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 || (1e-100..1e100).contains(&m) {
        return;
    }
    let k = m.log10().floor() as i64;
    let s = ScaledComplex::new(C64::new(1.0, 0.0), -k);
    for z in v.iter_mut() {
        *z = (ScaledComplex::from(*z) * s).to_complex();
    }
    *exponent += k;
}

/// Matrix product of the physical slices selected by `bits`; traced for a
/// periodic boundary.
pub fn mps_correlator_value(c: &MpsCorrelator, bits: &[u8]) -> Result<ScaledComplex> {
    c.validate()?;
    if bits.len() != c.tensors.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} bits for {} site tensors",
            bits.len(),
            c.tensors.len()
        )));
    }
    let starts = match c.boundary {
        Boundary::Open => 1,
        Boundary::Periodic => c.tensors[0].left,
    };
    let mut total = ScaledComplex::ZERO;
    for a in 0..starts {
        let mut row = vec![C64::new(0.0, 0.0); c.tensors[0].left];
        row[a] = C64::new(1.0, 0.0);
        let mut exponent = 0i64;
        for (t, &b) in c.tensors.iter().zip(bits) {
            let p = b as usize;
            let mut next = vec![C64::new(0.0, 0.0); t.right];
            for (l, x) in row.iter().enumerate() {
                if *x == C64::new(0.0, 0.0) {
                    continue;
                }
                for (r, out) in next.iter_mut().enumerate() {
                    *out += x * t.get(l, p, r);
                }
            }
            row = next;
            rescale(&mut row, &mut exponent);
        }
        total += ScaledComplex::new(row[a.min(row.len() - 1)], exponent);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Correlator {
    Generic(GenericCorrelator),
    Mps(MpsCorrelator),
}

impl Correlator {
    pub fn sites(&self) -> &[usize] {
        match self {
            Correlator::Generic(g) => g.sites(),
            Correlator::Mps(m) => m.sites(),
        }
    }

    /// Value on `v` and the number of table reads it took.
    pub fn value(&self, v: &Config) -> (ScaledComplex, usize) {
        match self {
            Correlator::Generic(g) => (ScaledComplex::from(g.entry(v)), 1),
            Correlator::Mps(m) => {
                let bits = v.restrict(m.sites());
                (
                    mps_correlator_value(m, &bits).expect("validated correlator"),
                    m.reads(),
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpsModel {
    n_sites: usize,
    correlators: Vec<Correlator>,
}

impl CpsModel {
    pub fn new(n_sites: usize, correlators: Vec<Correlator>) -> Result<Self> {
        let m = Self {
            n_sites,
            correlators,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.correlators {
            match c {
                Correlator::Generic(g) => g.validate()?,
                Correlator::Mps(m) => m.validate()?,
            }
            for &s in c.sites() {
                check_site(s, self.n_sites)?;
            }
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn correlators(&self) -> &[Correlator] {
        &self.correlators
    }

    /// Amplitude and the number of correlator table reads it took.
    pub fn amplitude_with_reads(&self, v: &Config) -> (ScaledComplex, usize) {
        let mut acc = ProductAcc::new();
        let mut reads = 0;
        for c in &self.correlators {
            let (x, r) = c.value(v);
            acc.mul_scaled(x);
            reads += r;
        }
        (acc.finish(), reads)
    }
}

pub fn cps_amplitude(m: &CpsModel, v: &Config) -> ScaledComplex {
    m.amplitude_with_reads(v).0
}

impl AmplitudeSource for CpsModel {
    fn n_sites(&self) -> usize {
        self.n_sites
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        cps_amplitude(self, v)
    }
}

/// Number of nonzero couplings touching each site.
pub fn coordination(params: &ClassicalIsingParams) -> Vec<usize> {
    let mut z = vec![0; params.n_sites()];
    for (i, j, _) in params.bonds() {
        z[i] += 1;
        z[j] += 1;
    }
    z
}

/// Coherent thermal state with amplitudes `exp(-E(v))`: one two-site
/// correlator per nonzero coupling, each site's field split evenly over the
/// correlators containing it.
pub fn thermal_cps(params: &ClassicalIsingParams) -> Result<CpsModel> {
    thermal_cps_with_coordination(params, &coordination(params))
}

pub fn thermal_cps_with_coordination(params: &ClassicalIsingParams, z: &[usize]) -> Result<CpsModel> {
    let n = params.n_sites();
    let implied = coordination(params);
    if z != implied.as_slice() {
        return Err(Error::InvalidArgument(format!(
            "coordination {z:?} does not match the coupling graph {implied:?}"
        )));
    }
    for i in 0..n {
        if z[i] == 0 && params.field(i).norm() != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "site {i} has a field but no coupling to carry it"
            )));
        }
    }
    let mut cs = Vec::new();
    for (i, j, k) in params.bonds() {
        let ai = params.field(i) / z[i] as f64;
        let aj = params.field(j) / z[j] as f64;
        let g = GenericCorrelator::from_fn(vec![i, j], |b| {
            let (vi, vj) = (b[0] as f64, b[1] as f64);
            (k * vi * vj + ai * vi + aj * vj).exp()
        })?;
        cs.push(Correlator::Generic(g));
    }
    CpsModel::new(n, cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::classical_energy;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn pair_sign_correlators() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let cs = edges
            .iter()
            .map(|&(i, j)| {
                Correlator::Generic(
                    GenericCorrelator::from_fn(vec![i, j], |b| re(if b[0] & b[1] == 1 { -1.0 } else { 1.0 })).unwrap(),
                )
            })
            .collect();
        let m = CpsModel::new(4, cs).unwrap();
        assert_eq!(cps_amplitude(&m, &"1100".parse().unwrap()).to_complex(), re(-1.0));
        let one = CpsModel::new(
            3,
            vec![Correlator::Generic(GenericCorrelator::new(vec![0, 2], vec![re(1.0); 4]).unwrap())],
        )
        .unwrap();
        for v in Config::all(3) {
            assert_eq!(cps_amplitude(&one, &v), ScaledComplex::ONE);
        }
    }

    #[test]
    fn thermal_examples() {
        let p = ClassicalIsingParams::zeros(3);
        assert!(thermal_cps(&p).unwrap().correlators().is_empty());
        let mut p = ClassicalIsingParams::zeros(2);
        p.set_coupling(0, 1, re(2f64.ln())).unwrap();
        let m = thermal_cps(&p).unwrap();
        let Correlator::Generic(g) = &m.correlators()[0] else { panic!() };
        let t: Vec<f64> = g.table().iter().map(|z| z.re).collect();
        assert!((t[3] - 2.0).abs() < 1e-15 && t[..3].iter().all(|&x| (x - 1.0).abs() < 1e-15));
        for v in Config::all(2) {
            let want = (-classical_energy(&p, &v).unwrap()).exp();
            assert!((cps_amplitude(&m, &v).to_complex() - want).norm() < 1e-14);
        }
        let mut lone = ClassicalIsingParams::zeros(2);
        lone.set_field(1, re(0.5));
        assert!(thermal_cps(&lone).is_err());
        assert!(thermal_cps_with_coordination(&p, &[2, 1]).is_err());
    }

    #[test]
    fn mps_values() {
        let ones = MpsCorrelator::new(
            vec![0, 1],
            vec![MpsTensor::from_fn(1, 1, |_, _, _| re(1.0)); 2],
            Boundary::Open,
        )
        .unwrap();
        assert_eq!(mps_correlator_value(&ones, &[0, 1]).unwrap(), ScaledComplex::ONE);
        // COPY chain with bond dimension 2
        let n = 4;
        let ts: Vec<MpsTensor> = (0..n)
            .map(|k| {
                let (l, r) = (if k == 0 { 1 } else { 2 }, if k == n - 1 { 1 } else { 2 });
                MpsTensor::from_fn(l, r, move |a, p, b| {
                    let ok = (l == 1 || a == p) && (r == 1 || b == p);
                    re(if ok { 1.0 } else { 0.0 })
                })
            })
            .collect();
        let ghz = MpsCorrelator::new((0..n).collect(), ts, Boundary::Open).unwrap();
        for v in Config::all(n) {
            let want = if v.weight() == 0 || v.weight() == n { 1.0 } else { 0.0 };
            assert_eq!(mps_correlator_value(&ghz, v.bits()).unwrap().to_complex(), re(want));
        }
        assert!(mps_correlator_value(&ghz, &[0, 1]).is_err());
        let bad = MpsCorrelator::new(
            vec![0, 1],
            vec![MpsTensor::from_fn(1, 2, |_, _, _| re(1.0)), MpsTensor::from_fn(3, 1, |_, _, _| re(1.0))],
            Boundary::Open,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn periodic_trace() {
        // identity bond matrices times a phase: trace = chi * prod
        let t = MpsTensor::from_fn(3, 3, |a, p, b| re(if a == b { 1.0 + p as f64 } else { 0.0 }));
        let c = MpsCorrelator::new(vec![0, 1, 2], vec![t; 3], Boundary::Periodic).unwrap();
        assert_eq!(mps_correlator_value(&c, &[1, 0, 1]).unwrap().to_complex(), re(12.0));
    }

    #[test]
    fn json_roundtrip() {
        let mut p = ClassicalIsingParams::zeros(3);
        p.set_coupling(0, 2, C64::new(0.3, -0.1)).unwrap();
        let m = thermal_cps(&p).unwrap();
        let back: CpsModel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
