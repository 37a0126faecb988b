//! Reference states built directly from their definitions, without any
//! hidden-unit machinery. Everything here is exponential in the system size.

use std::collections::HashMap;

use num_complex::Complex64 as C64;

use crate::config::{enumerate_sector, Config};
use crate::dense::{DenseState, DEFAULT_ORACLE_CAP};
use crate::error::{Error, Result};
use crate::scaled::ScaledComplex;
use crate::zoo::{Graph, SectorLabel, TorusLattice};

/// `prod_i e^{d_i Z-ish} prod_(ij) CP(phi_ij) |+>^N` applied gate by gate.
pub fn graph_state_circuit(g: &Graph) -> Result<DenseState> {
    let mut psi = DenseState::uniform(g.n_vertices());
    if psi.n_sites() > DEFAULT_ORACLE_CAP {
        return Err(Error::CapExceeded {
            what: "oracle sites",
            requested: psi.n_sites() as u128,
            cap: DEFAULT_ORACLE_CAP as u128,
        });
    }
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        psi = psi.apply_controlled_phase(i, j, g.phase(k))?;
    }
    for i in 0..g.n_vertices() {
        let d = g.deformation(i);
        if d != C64::new(0.0, 0.0) {
            psi = psi.apply_diagonal_deformation(i, d)?;
        }
    }
    Ok(psi)
}

/// Uniform superposition over every configuration of Hamming weight `w`.
pub fn number_sector_state(n: usize, w: usize) -> Result<DenseState> {
    let mut psi = DenseState::zeros(n);
    for v in enumerate_sector(n, w)? {
        psi.set(&v, ScaledComplex::ONE);
    }
    Ok(psi)
}

/// `sum_j alpha_j |0..1_j..0>`.
pub fn w_state(alphas: &[C64]) -> DenseState {
    let n = alphas.len();
    let mut psi = DenseState::zeros(n);
    for (j, &a) in alphas.iter().enumerate() {
        let mut v = Config::zeros(n);
        v.set(j, 1);
        psi.set(&v, ScaledComplex::from(a));
    }
    psi
}

/// First-quantised Laughlin amplitudes on lattice positions:
/// `prod_{i<j occupied} (z_i - z_j)^nu prod_{k occupied} e^{-|z_k|^2}` on the
/// weight-`n` sector, zero elsewhere.
pub fn laughlin_state(coords: &[C64], nu: u32, n: usize) -> Result<DenseState> {
    let sites = coords.len();
    let mut psi = DenseState::zeros(sites);
    for v in enumerate_sector(sites, n)? {
        let occ: Vec<usize> = (0..sites).filter(|&i| v.get(i) == 1).collect();
        let mut amp = ScaledComplex::ONE;
        for (a, &i) in occ.iter().enumerate() {
            amp *= ScaledComplex::from_ln(C64::new(-coords[i].norm_sqr(), 0.0));
            for &j in &occ[a + 1..] {
                amp *= ScaledComplex::from(coords[i] - coords[j]).powi(nu as i64);
            }
        }
        psi.set(&v, amp);
    }
    Ok(psi)
}

fn vec_to_state(n: usize, amps: &HashMap<u64, f64>) -> DenseState {
    let mut psi = DenseState::zeros(n);
    for (&k, &a) in amps {
        psi.set(&Config::from_index(n, k), ScaledComplex::from(a));
    }
    psi
}

/// `prod_p (1 + B_p) |c>` where `c` is the reference loop for the sector:
/// empty for `(+1, +1)`, with the vertical loop `e_y` added for `pi_x = -1` and
/// the horizontal loop `e_x` for `pi_y = -1`.
pub fn toric_loop_state(lat: &TorusLattice, sector: SectorLabel) -> Result<DenseState> {
    let n = lat.n_qubits();
    check_cap(n)?;
    let mut c = Config::zeros(n);
    if sector.px == -1 {
        for q in lat.e_y() {
            c.flip(q);
        }
    }
    if sector.py == -1 {
        for q in lat.e_x() {
            c.flip(q);
        }
    }
    let mut st: HashMap<u64, f64> = HashMap::from([(c.index(), 1.0)]);
    for p in lat.plaquettes() {
        let mask: u64 = p.iter().map(|&q| 1u64 << (n - 1 - q)).fold(0, |a, b| a ^ b);
        let mut next = st.clone();
        for (&k, &a) in &st {
            *next.entry(k ^ mask).or_insert(0.0) += a;
        }
        st = next;
    }
    Ok(vec_to_state(n, &st))
}

fn check_cap(n: usize) -> Result<()> {
    if n > DEFAULT_ORACLE_CAP + 2 {
        return Err(Error::CapExceeded {
            what: "oracle sites",
            requested: n as u128,
            cap: (DEFAULT_ORACLE_CAP + 2) as u128,
        });
    }
    Ok(())
}

fn vertex_filter(lat: &TorusLattice, count: usize) -> Result<DenseState> {
    let n = lat.n_qubits();
    check_cap(n)?;
    let verts = lat.vertices();
    let mut psi = DenseState::zeros(n);
    for v in Config::all(n) {
        if verts.iter().all(|q| q.iter().filter(|&&i| v.get(i) == 1).count() == count) {
            psi.set(&v, ScaledComplex::ONE);
        }
    }
    Ok(psi)
}

/// Equal superposition of dimer coverings of the bond qubits.
pub fn dimer_state(lat: &TorusLattice) -> Result<DenseState> {
    vertex_filter(lat, 1)
}

/// Equal superposition of fully packed loop configurations.
pub fn fpl_state(lat: &TorusLattice) -> Result<DenseState> {
    vertex_filter(lat, 2)
}

/// Nearest-neighbour RVB state on the vertex qubits: a sum over dimer
/// coverings of products of singlets `|0_A 1_B> - |1_A 0_B>`, with the A member
/// on the even sublattice unless the bond index is listed in `flipped`.
pub fn rvb_state(lat: &TorusLattice, flipped: &[usize]) -> Result<DenseState> {
    let n = lat.n_vertices();
    let bonds = lat.vertex_bonds();
    if bonds.len() > 24 {
        return Err(Error::CapExceeded {
            what: "bond subsets",
            requested: 1u128 << bonds.len(),
            cap: 1 << 24,
        });
    }
    let mut amps = vec![0.0f64; 1 << n];
    for sel in 0u64..(1 << bonds.len()) {
        let mut cnt = vec![0u8; n];
        for (b, &(p, q)) in bonds.iter().enumerate() {
            if (sel >> b) & 1 == 1 {
                cnt[p] += 1;
                cnt[q] += 1;
            }
        }
        if cnt.iter().any(|&c| c != 1) {
            continue;
        }
        let pairs: Vec<(usize, usize)> = bonds
            .iter()
            .enumerate()
            .filter(|(b, _)| (sel >> b) & 1 == 1)
            .map(|(b, &(p, q))| {
                let (a, bb) = if lat.is_a_site(p) { (p, q) } else { (q, p) };
                if flipped.contains(&b) {
                    (bb, a)
                } else {
                    (a, bb)
                }
            })
            .collect();
        // expand the singlet product
        for choice in 0u64..(1 << pairs.len()) {
            let mut k = 0u64;
            let mut sign = 1.0;
            for (t, &(a, b)) in pairs.iter().enumerate() {
                if (choice >> t) & 1 == 0 {
                    k |= 1 << (n - 1 - b);
                } else {
                    k |= 1 << (n - 1 - a);
                    sign = -sign;
                }
            }
            amps[k as usize] += sign;
        }
    }
    let mut psi = DenseState::zeros(n);
    for (k, &a) in amps.iter().enumerate() {
        psi.set(&Config::from_index(n, k as u64), ScaledComplex::from(a));
    }
    Ok(psi)
}

/// Fermionic BCS state `(sum_ij alpha_ij c+_{i up} c+_{j down})^{N/2} |vac>`
/// projected to one fermion per site, read back as `v_i = 0` for spin up and
/// `v_i = 1` for spin down. Modes are ordered `m = 2i + spin`, with creation
/// signs counted over lower modes. Gutzwiller `g = 0` is the projection.
pub fn fock_bcs_state(alpha: &[Vec<C64>]) -> Result<DenseState> {
    let n = alpha.len();
    if alpha.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("pairing matrix must be square".into()));
    }
    if n % 2 == 1 {
        return Err(Error::InvalidArgument("half filling needs an even site count".into()));
    }
    if n > 8 {
        return Err(Error::CapExceeded {
            what: "Fock oracle sites",
            requested: n as u128,
            cap: 8,
        });
    }
    fn create(m: usize, st: &HashMap<u64, C64>) -> HashMap<u64, C64> {
        let mut out = HashMap::new();
        for (&mask, &a) in st {
            if (mask >> m) & 1 == 1 {
                continue;
            }
            let sign = if (mask & ((1 << m) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            *out.entry(mask | (1 << m)).or_insert(C64::new(0.0, 0.0)) += a * sign;
        }
        out
    }
    let mut st: HashMap<u64, C64> = HashMap::from([(0, C64::new(1.0, 0.0))]);
    for _ in 0..n / 2 {
        let mut next: HashMap<u64, C64> = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                if alpha[i][j] == C64::new(0.0, 0.0) {
                    continue;
                }
                for (k, a) in create(2 * i, &create(2 * j + 1, &st)) {
                    *next.entry(k).or_insert(C64::new(0.0, 0.0)) += alpha[i][j] * a;
                }
            }
        }
        st = next;
    }
    let mut psi = DenseState::zeros(n);
    for v in Config::all(n) {
        let mask: u64 = (0..n).map(|i| 1u64 << (2 * i + v.get(i) as usize)).sum();
        if let Some(&a) = st.get(&mask) {
            psi.set(&v, ScaledComplex::from(a));
        }
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_and_sector_states() {
        let w = w_state(&[C64::new(1.0, 0.0); 3]);
        assert_eq!(w.support().len(), 3);
        assert_eq!(number_sector_state(4, 2).unwrap().support().len(), 6);
    }

    #[test]
    fn toric_loop_counts() {
        let lat = TorusLattice::new(2, 2).unwrap();
        for s in SectorLabel::ALL {
            // 2^(plaquettes - 1) distinct closed loops per sector
            assert_eq!(toric_loop_state(&lat, s).unwrap().support().len(), 8);
        }
    }

    #[test]
    fn dimer_and_fpl_counts() {
        let lat = TorusLattice::new(2, 2).unwrap();
        // every vertex has four distinct bonds on the 2x2 torus
        assert_eq!(dimer_state(&lat).unwrap().support().len(), 8);
        assert!(!fpl_state(&lat).unwrap().support().is_empty());
    }

    #[test]
    fn fock_two_sites() {
        let a = vec![
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ];
        let psi = fock_bcs_state(&a).unwrap();
        let s01 = psi.get(&"01".parse().unwrap()).to_complex();
        let s10 = psi.get(&"10".parse().unwrap()).to_complex();
        assert!((s01 + s10).norm() < 1e-14 && s01.norm() > 0.5);
    }
}
