use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::cps::{Correlator, GenericCorrelator};
use crate::error::{Error, Result};
use crate::nqs::{HiddenCorrelator, NqsModel};
use crate::scaled::{ProductAcc, ScaledComplex};
use crate::zoo::TorusLattice;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Symmetric pair wavefunction `alpha_ij`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<C64>>", into = "Vec<Vec<C64>>")]
pub struct PairingMatrix {
    n: usize,
    alpha: Vec<C64>,
}

impl PairingMatrix {
    pub fn new(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("pairing matrix must be square".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).norm() > 1e-12 * a.norm().max(b.norm()).max(1.0) {
                    return Err(Error::InvalidArgument(format!("alpha[{i}][{j}] = {a} but alpha[{j}][{i}] = {b}")));
                }
            }
        }
        Ok(Self {
            n,
            alpha: rows.into_iter().flatten().collect(),
        })
    }

    /// s + id pairing on a torus: 1 between x-neighbours, i between
    /// y-neighbours, 0 otherwise.
    pub fn s_plus_id(lat: &TorusLattice) -> Self {
        let n = lat.n_vertices();
        let mut alpha = vec![ZERO; n * n];
        for (b, (p, q)) in lat.vertex_bonds().into_iter().enumerate() {
            let w = if b % 2 == 0 { C64::new(1.0, 0.0) } else { C64::i() };
            alpha[p * n + q] = w;
            alpha[q * n + p] = w;
        }
        Self { n, alpha }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.alpha[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.alpha.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }
}

impl TryFrom<Vec<Vec<C64>>> for PairingMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<C64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<PairingMatrix> for Vec<Vec<C64>> {
    fn from(p: PairingMatrix) -> Self {
        p.rows()
    }
}

/// Determinant by LU with partial pivoting; the pivot product is kept in
/// scaled form.
pub fn determinant(mut a: Vec<Vec<C64>>) -> ScaledComplex {
    let n = a.len();
    let mut acc = ProductAcc::new();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm()))
            .expect("non-empty pivot range");
        if a[p][k] == ZERO {
            return ScaledComplex::default();
        }
        if p != k {
            a.swap(p, k);
            acc.mul(C64::new(-1.0, 0.0));
        }
        let piv = a[k][k];
        acc.mul(piv);
        for r in k + 1..n {
            let f = a[r][k] / piv;
            if f == ZERO {
                continue;
            }
            for c in k + 1..n {
                let t = a[k][c];
                a[r][c] -= f * t;
            }
        }
    }
    acc.finish()
}

/// Sign of the permutation that sorts `list` (entries must be distinct).
pub fn permutation_sign(list: &[usize]) -> f64 {
    let mut inv = 0usize;
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if list[i] > list[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `sgn(i_1.., j_1..) det[alpha_{i_k j_l}]` for explicit orderings of the
/// spin-up positions `ups` and spin-down positions `downs`. The result does
/// not depend on the orderings chosen.
pub fn bcs_amplitude_ordered(alpha: &PairingMatrix, ups: &[usize], downs: &[usize]) -> Result<ScaledComplex> {
    let n = alpha.n();
    if ups.len() != downs.len() || ups.len() + downs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} up and {} down positions on {n} sites",
            ups.len(),
            downs.len()
        )));
    }
    let all: Vec<usize> = ups.iter().chain(downs).copied().collect();
    let mut seen = vec![false; n];
    for &s in &all {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidArgument(format!("positions {all:?} are not a permutation of 0..{n}")));
        }
    }
    let a: Vec<Vec<C64>> = ups.iter().map(|&i| downs.iter().map(|&j| alpha.get(i, j)).collect()).collect();
    Ok(determinant(a) * C64::new(permutation_sign(&all), 0.0))
}

/// Fully projected BCS amplitude at half filling; zero off half filling.
pub fn bcs_reference_amplitude(alpha: &PairingMatrix, v: &Config) -> Result<ScaledComplex> {
    let n = alpha.n();
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("half filling needs an even site count, got {n}")));
    }
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("config of length {} for {n} sites", v.len())));
    }
    if v.weight() != n / 2 {
        return Ok(ScaledComplex::default());
    }
    let ups: Vec<usize> = (0..n).filter(|&i| v.get(i) == 0).collect();
    let downs: Vec<usize> = (0..n).filter(|&i| v.get(i) == 1).collect();
    bcs_amplitude_ordered(alpha, &ups, &downs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcsReference {
    pub alpha: PairingMatrix,
}

impl BcsReference {
    pub fn new(alpha: PairingMatrix) -> Result<Self> {
        if alpha.n() % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "half filling needs an even site count, got {}",
                alpha.n()
            )));
        }
        Ok(Self { alpha })
    }
}

impl AmplitudeSource for BcsReference {
    fn n_sites(&self) -> usize {
        self.alpha.n()
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        bcs_reference_amplitude(&self.alpha, v).expect("validated pairing matrix")
    }
}

/// Indicator of `S(v) = weight`, evaluated on the fly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberProjection {
    pub n_sites: usize,
    pub weight: usize,
}

impl AmplitudeSource for NumberProjection {
    fn n_sites(&self) -> usize {
        self.n_sites
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        ScaledComplex::from(if v.weight() == self.weight { 1.0 } else { 0.0 })
    }
}

/// Two-site correlators implementing `exp(-sum_{i,j} u_ij z_i z_j)` with
/// `z = (-1)^v`. Pair `(i, j)` and `(j, i)` share one correlator; the
/// diagonal `z_i^2 = 1` terms become constant one-site correlators.
pub fn jastrow_correlators(u: &[Vec<f64>]) -> Result<Vec<Correlator>> {
    let n = u.len();
    if u.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("Jastrow matrix must be square".into()));
    }
    let mut out = Vec::new();
    for i in 0..n {
        if u[i][i] != 0.0 {
            let c = C64::new((-u[i][i]).exp(), 0.0);
            out.push(Correlator::Generic(GenericCorrelator::new(vec![i], vec![c, c])?));
        }
        for j in i + 1..n {
            let w = u[i][j] + u[j][i];
            if w == 0.0 {
                continue;
            }
            let g = GenericCorrelator::from_fn(vec![i, j], |b| {
                let zz = if b[0] == b[1] { 1.0 } else { -1.0 };
                C64::new((-w * zz).exp(), 0.0)
            })?;
            out.push(Correlator::Generic(g));
        }
    }
    Ok(out)
}

/// A diagonal factor applied to a reference state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "factor", rename_all = "kebab-case")]
pub enum OperatorFactor {
    Correlator(Correlator),
    Hidden(HiddenCorrelator),
    Nqs(NqsModel),
    Projection(NumberProjection),
}

impl OperatorFactor {
    pub fn value(&self, v: &Config) -> ScaledComplex {
        match self {
            OperatorFactor::Correlator(c) => c.value(v).0,
            OperatorFactor::Hidden(h) => h.value(v),
            OperatorFactor::Nqs(m) => m.amplitude(v),
            OperatorFactor::Projection(p) => p.amplitude(v),
        }
    }

    fn max_site(&self) -> Option<usize> {
        match self {
            OperatorFactor::Correlator(c) => c.sites().iter().max().map(|&s| s + 1),
            OperatorFactor::Hidden(h) => Some(h.couplings().len()),
            OperatorFactor::Nqs(m) => Some(m.n_sites()),
            OperatorFactor::Projection(p) => Some(p.n_sites),
        }
    }
}

/// `Psi_ref(v) prod_c U_c(v)`.
pub fn correlator_operator_amplitude<R: AmplitudeSource + ?Sized>(
    reference: &R,
    factors: &[OperatorFactor],
    v: &Config,
) -> ScaledComplex {
    let mut a = reference.amplitude(v);
    for f in factors {
        if a.is_zero() {
            break;
        }
        a *= f.value(v);
    }
    a
}

#[derive(Clone, Debug)]
pub struct CorrelatorOperatorState<R> {
    reference: R,
    factors: Vec<OperatorFactor>,
}

impl<R: AmplitudeSource> CorrelatorOperatorState<R> {
    pub fn new(reference: R, factors: Vec<OperatorFactor>) -> Result<Self> {
        let n = reference.n_sites();
        for (k, f) in factors.iter().enumerate() {
            if f.max_site().is_some_and(|m| m > n) {
                return Err(Error::DimensionMismatch(format!("factor {k} reaches past the {n} reference sites")));
            }
        }
        Ok(Self { reference, factors })
    }

    pub fn reference(&self) -> &R {
        &self.reference
    }

    pub fn factors(&self) -> &[OperatorFactor] {
        &self.factors
    }
}

impl<R: AmplitudeSource> AmplitudeSource for CorrelatorOperatorState<R> {
    fn n_sites(&self) -> usize {
        self.reference.n_sites()
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        correlator_operator_amplitude(&self.reference, &self.factors, v)
    }
}
