use num_complex::Complex64 as C64;

use super::lattice::{SectorLabel, TorusLattice};
use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::nqs::{Coupling, HiddenCorrelator, NqsModel, DEFAULT_DEEP_CAP};
use crate::tensors::{f_cpd, hadamard, s_cpd, w_cpd, CpdTensor};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Toric code ground state in the given winding sector, using the default
/// reference loops `e_y` (for `pi_x = -1`) and `e_x` (for `pi_y = -1`).
pub fn build_toric_code_nqs(lat: &TorusLattice, sector: SectorLabel) -> Result<NqsModel> {
    build_toric_code_nqs_with_paths(lat, sector, &lat.e_y(), &lat.e_x())
}

fn check_loop(lat: &TorusLattice, path: &[usize], mx: bool, my: bool) -> Result<()> {
    let n = lat.n_qubits();
    let mut occ = vec![false; n];
    for &q in path {
        if q >= n {
            return Err(Error::SiteOutOfRange { site: q, n });
        }
        occ[q] ^= true;
    }
    for (s, v) in lat.vertices().iter().enumerate() {
        if v.iter().filter(|&&q| occ[q]).count() % 2 == 1 {
            return Err(Error::InvalidArgument(format!("path is not closed at vertex {s}")));
        }
    }
    let par = |cut: Vec<usize>| cut.iter().filter(|&&q| occ[q]).count() % 2 == 1;
    if par(lat.m_x()) != mx || par(lat.m_y()) != my {
        return Err(Error::InvalidArgument("path has the wrong winding".into()));
    }
    Ok(())
}

/// As [`build_toric_code_nqs`] with caller-chosen closed loops: `path_x` must
/// wind like `e_y` and `path_y` like `e_x`.
///
/// Vertex `0` hosts an 8-dimensional unit
/// `C[(h1 h2 h3), b] = (-1)^{b (h1 [q in star 0] + h2 [q in m_x] + h3 [q in m_y])}`
/// that enforces its own vertex parity and fixes both winding parities
/// to even. Every other vertex hosts a binary unit with Hadamard couplings on
/// its four bonds. Sectors are reached by swapping the columns of every
/// coupling on the qubits of a reference loop, so that
/// `Psi_s(v) = Psi_(+1,+1)(v xor loop)`.
pub fn build_toric_code_nqs_with_paths(
    lat: &TorusLattice,
    sector: SectorLabel,
    path_x: &[usize],
    path_y: &[usize],
) -> Result<NqsModel> {
    sector.validate()?;
    check_loop(lat, path_x, true, false)?;
    check_loop(lat, path_y, false, true)?;
    let n = lat.n_qubits();
    let verts = lat.vertices();
    let (mx, my) = (lat.m_x(), lat.m_y());
    let mut units = Vec::with_capacity(verts.len());
    let mut anchor = HiddenCorrelator::disconnected(8, n);
    for q in 0..n {
        let e = [verts[0].contains(&q), mx.contains(&q), my.contains(&q)];
        if !e.iter().any(|&x| x) {
            continue;
        }
        let c = CMat::from_fn(8, 2, |h, b| {
            let bits = [(h >> 2) & 1, (h >> 1) & 1, h & 1];
            let k: usize = bits.iter().zip(e).filter(|(_, on)| *on).map(|(b, _)| b).sum();
            if b == 1 && k % 2 == 1 {
                -ONE
            } else {
                ONE
            }
        });
        anchor.set(q, Coupling::Matrix(c))?;
    }
    units.push(anchor);
    for star in &verts[1..] {
        let mut u = HiddenCorrelator::disconnected(2, n);
        for &q in star {
            u.set(q, Coupling::Matrix(hadamard()))?;
        }
        units.push(u);
    }
    let mut flip = vec![false; n];
    if sector.px == -1 {
        for &q in path_x {
            flip[q] ^= true;
        }
    }
    if sector.py == -1 {
        for &q in path_y {
            flip[q] ^= true;
        }
    }
    for u in &mut units {
        for (q, c) in u.couplings_mut().iter_mut().enumerate() {
            if let (true, Coupling::Matrix(m)) = (flip[q], c) {
                m.swap_cols(0, 1);
            }
        }
    }
    NqsModel::new(n, units)
}

/// One unit per vertex built from a rank-`r` order-4 CPD on its four bonds,
/// with the CPD weights folded into the first leg.
fn vertex_cpd_model(lat: &TorusLattice, t: &CpdTensor) -> Result<NqsModel> {
    let n = lat.n_qubits();
    let r = t.rank();
    let mut units = Vec::new();
    for star in lat.vertices() {
        let mut u = HiddenCorrelator::disconnected(r, n);
        for (l, &q) in star.iter().enumerate() {
            let mut m = t.factors()[l].clone();
            if l == 0 {
                m = CMat::from_fn(r, 2, |a, b| t.weights()[a] * m[(a, b)]);
            }
            u.set(q, Coupling::Matrix(m))?;
        }
        units.push(u);
    }
    NqsModel::new(n, units)
}

/// Equal superposition of fully packed loops: exactly two occupied bonds at
/// every vertex.
pub fn build_fpl_nqs(lat: &TorusLattice) -> Result<NqsModel> {
    vertex_cpd_model(lat, &f_cpd())
}

/// Equal superposition of dimer coverings: exactly one occupied bond at every
/// vertex.
pub fn build_dimer_nqs(lat: &TorusLattice) -> Result<NqsModel> {
    vertex_cpd_model(lat, &w_cpd(4)?)
}

/// Nearest-neighbour RVB state on the vertex qubits as a two-layer model.
///
/// The first layer has one 3-dimensional singlet unit per bond, coupling to
/// the A-sublattice end with the second S factor and to the B end with the
/// third. The second layer has one 4-dimensional W unit per vertex that reads
/// the dimer leg of its four incident singlet units through
/// `C[w, alpha] = [f(alpha) == (w == l)]` with `f = (1, 1, 0)`.
/// Bonds listed in `flipped` swap which end is treated as A.
pub fn build_rvb_deep_nqs_oriented(lat: &TorusLattice, flipped: &[usize]) -> Result<NqsModel> {
    if !lat.is_bipartite() {
        return Err(Error::InvalidArgument(format!(
            "RVB construction needs even Lx and Ly, got {}x{}",
            lat.lx(),
            lat.ly()
        )));
    }
    let nv = lat.n_vertices();
    let count = 4u128.pow(nv as u32);
    if count > DEFAULT_DEEP_CAP {
        return Err(Error::CapExceeded {
            what: "second-layer configurations",
            requested: count,
            cap: DEFAULT_DEEP_CAP,
        });
    }
    let s = s_cpd();
    let (fa, fb) = (&s.factors()[1], &s.factors()[2]);
    let dimer_leg = &s.factors()[0];
    let bonds = lat.vertex_bonds();
    let mut layer1 = Vec::with_capacity(bonds.len());
    for (b, &(p, q)) in bonds.iter().enumerate() {
        let (mut a, mut bb) = if lat.is_a_site(p) { (p, q) } else { (q, p) };
        if flipped.contains(&b) {
            std::mem::swap(&mut a, &mut bb);
        }
        let mut u = HiddenCorrelator::disconnected(3, nv);
        u.set(a, Coupling::Matrix(fa.clone()))?;
        u.set(bb, Coupling::Matrix(fb.clone()))?;
        layer1.push(u);
    }
    let mut layer2 = Vec::with_capacity(nv);
    for site in 0..nv {
        let mut u = HiddenCorrelator::disconnected(4, bonds.len());
        for (l, &b) in lat.incident_bonds(site).iter().enumerate() {
            let c = CMat::from_fn(4, 3, |w, alpha| {
                let occupied = dimer_leg[(alpha, 1)] == ONE;
                if occupied == (w == l) {
                    ONE
                } else {
                    ZERO
                }
            });
            u.set(b, Coupling::Matrix(c))?;
        }
        layer2.push(u);
    }
    NqsModel::deep(nv, layer1, layer2)
}

pub fn build_rvb_deep_nqs(lat: &TorusLattice) -> Result<NqsModel> {
    build_rvb_deep_nqs_oriented(lat, &[])
}
