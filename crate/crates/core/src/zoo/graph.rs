use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::nqs::{Coupling, HiddenCorrelator, NqsModel};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Simple undirected graph with optional edge phases and vertex deformations.
///
/// The state it describes is `prod_i e^{d_i v_i} prod_(ij) e^{i phi_ij v_i v_j}`
/// on top of the uniform superposition; without phases every edge is a
/// controlled-Z (`phi = pi`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phases: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deformations: Option<Vec<C64>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::SiteOutOfRange { site: i.max(j), n });
            }
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop on vertex {i}")));
            }
            let e = (i.min(j), i.max(j));
            if norm.contains(&e) {
                return Err(Error::InvalidArgument(format!("duplicate edge {e:?}")));
            }
            norm.push(e);
        }
        Ok(Self {
            n,
            edges: norm,
            phases: None,
            deformations: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            phases: None,
            deformations: None,
        }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("a cycle needs 3 vertices, got {n}")));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    /// One phase per edge, in edge order.
    pub fn with_phases(mut self, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != self.edges.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} phases for {} edges",
                phases.len(),
                self.edges.len()
            )));
        }
        self.phases = Some(phases);
        Ok(self)
    }

    pub fn with_deformations(mut self, d: Vec<C64>) -> Result<Self> {
        if d.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} deformations for {} vertices",
                d.len(),
                self.n
            )));
        }
        self.deformations = Some(d);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn phase(&self, edge: usize) -> f64 {
        self.phases.as_ref().map_or(std::f64::consts::PI, |p| p[edge])
    }

    pub fn deformation(&self, i: usize) -> C64 {
        self.deformations.as_ref().map_or(ZERO, |d| d[i])
    }

    pub fn has_phases(&self) -> bool {
        self.phases.is_some()
    }

    /// Greedy cover: repeatedly take the vertex with the most uncovered edges
    /// (lowest index on ties) until every edge is covered. Returns each cover
    /// vertex with the edge indices it took.
    pub fn greedy_cover(&self) -> Vec<(usize, Vec<usize>)> {
        let mut covered = vec![false; self.edges.len()];
        let mut out = Vec::new();
        loop {
            let mut deg = vec![0usize; self.n];
            for (k, &(i, j)) in self.edges.iter().enumerate() {
                if !covered[k] {
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
            let (best, &d) = match deg.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))) {
                Some(x) => x,
                None => break,
            };
            if d == 0 {
                break;
            }
            let taken: Vec<usize> = (0..self.edges.len())
                .filter(|&k| !covered[k] && (self.edges[k].0 == best || self.edges[k].1 == best))
                .collect();
            for &k in &taken {
                covered[k] = true;
            }
            out.push((best, taken));
        }
        out
    }
}

fn phase_coupling(phi: f64) -> CMat {
    CMat::from_fn(2, 2, |h, v| if h == 1 && v == 1 { C64::from_polar(1.0, phi) } else { ONE })
}

/// Puts `e^{d_i}` on column 1 of exactly one coupling per site.
fn absorb_deformations(n: usize, units: &mut Vec<HiddenCorrelator>, d: &[C64]) {
    for (i, &di) in d.iter().enumerate() {
        if di == ZERO {
            continue;
        }
        let f = di.exp();
        if let Some(u) = units.iter_mut().find(|u| u.couplings()[i].matrix().is_some()) {
            if let Coupling::Matrix(m) = &mut u.couplings_mut()[i] {
                m.scale_col(1, f);
            }
            continue;
        }
        if units.is_empty() {
            // a lone unit: row 1 vanishes on its first site and is ignored elsewhere
            let mut u = HiddenCorrelator::disconnected(2, n);
            u.set(i, Coupling::Matrix(CMat::from_rows(vec![vec![ONE, f], vec![ZERO, ZERO]]).expect("2x2")))
                .expect("valid site");
            units.push(u);
        } else {
            let dim = units[0].dim();
            let m = CMat::from_fn(dim, 2, |_, v| if v == 1 { f } else { ONE });
            units[0].set(i, Coupling::Matrix(m)).expect("valid site");
        }
    }
}

fn graph_units(g: &Graph) -> Vec<HiddenCorrelator> {
    let n = g.n;
    g.greedy_cover()
        .into_iter()
        .map(|(r, taken)| {
            let mut u = HiddenCorrelator::disconnected(2, n);
            u.set(r, Coupling::Matrix(CMat::identity(2))).expect("valid site");
            for k in taken {
                let (i, j) = g.edges[k];
                let other = if i == r { j } else { i };
                u.set(other, Coupling::Matrix(phase_coupling(g.phase(k))))
                    .expect("valid site");
            }
            u
        })
        .collect()
}

/// One binary unit per greedy cover vertex `r`: identity on `r`, phase
/// couplings `e^{i phi h v}` on the neighbours it covers.
pub fn build_graph_state_nqs(g: &Graph) -> NqsModel {
    let mut units = graph_units(g);
    if let Some(d) = &g.deformations {
        absorb_deformations(g.n, &mut units, d);
    }
    NqsModel::new(g.n, units).expect("consistent shapes")
}

/// Graph-state units plus one `k`-dimensional unit whose row `m` on site `j`
/// is `alpha_m^{1/N} (1, e^{d_j^(m)})`, giving `sum_m alpha_m |Psi(d^(m))>`.
/// Fractional powers use the principal branch. Branches with `alpha_m = 0`
/// are dropped.
pub fn build_weighted_graph_superposition(g: &Graph, deformations: &[Vec<C64>], amps: &[C64]) -> Result<NqsModel> {
    if deformations.is_empty() || deformations.len() != amps.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} deformation vectors and {} amplitudes",
            deformations.len(),
            amps.len()
        )));
    }
    let n = g.n;
    if let Some(d) = deformations.iter().find(|d| d.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "deformation of length {} for {n} vertices",
            d.len()
        )));
    }
    let branches: Vec<usize> = (0..amps.len()).filter(|&m| amps[m] != ZERO).collect();
    if branches.is_empty() {
        return Err(Error::ZeroAmplitude("every branch amplitude is zero".into()));
    }
    let mut units = graph_units(g);
    if let Some(d) = &g.deformations {
        absorb_deformations(n, &mut units, d);
    }
    if n > 0 {
        let k = branches.len();
        let roots: Vec<C64> = branches.iter().map(|&m| amps[m].powf(1.0 / n as f64)).collect();
        let couplings = (0..n)
            .map(|j| {
                Coupling::Matrix(CMat::from_fn(k, 2, |row, v| {
                    let m = branches[row];
                    roots[row] * if v == 1 { deformations[m][j].exp() } else { ONE }
                }))
            })
            .collect();
        units.push(HiddenCorrelator::new(k, couplings)?);
    }
    NqsModel::new(n, units)
}
