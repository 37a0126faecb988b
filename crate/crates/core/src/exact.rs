//! Dense exact diagonalisation for small systems.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::dense::DenseState;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;

/// Largest system handed to the dense eigensolver.
pub const DEFAULT_ED_CAP: usize = 12;

pub fn dense_matrix(h: &Hamiltonian, cap: usize) -> Result<DMatrix<C64>> {
    let n = h.n_sites();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact diagonalisation sites",
            requested: n as u128,
            cap: cap as u128,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for t in h.terms() {
        for k in 0..dim {
            let (k2, ph) = t.act_index(n, k as u64);
            m[(k2 as usize, k)] += ph;
        }
    }
    Ok(m)
}

fn hermitian_matrix(h: &Hamiltonian, cap: usize) -> Result<DMatrix<C64>> {
    let m = dense_matrix(h, cap)?;
    let defect = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-10 {
        return Err(Error::NotHermitian(defect));
    }
    Ok(m)
}

/// Sorted eigenvalues.
pub fn spectrum(h: &Hamiltonian) -> Result<Vec<f64>> {
    let m = hermitian_matrix(h, DEFAULT_ED_CAP)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}

/// Lowest eigenvalue and one eigenvector for it.
pub fn ground_state_exact(h: &Hamiltonian) -> Result<(f64, DenseState)> {
    let n = h.n_sites();
    let m = hermitian_matrix(h, DEFAULT_ED_CAP)?;
    let eig = SymmetricEigen::new(m);
    let (idx, e0) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::InvalidArgument("empty operator".into()))?;
    let vec: Vec<C64> = eig.eigenvectors.column(idx).iter().copied().collect();
    Ok((e0, DenseState::from_complex(n, vec)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{heisenberg, tfim, z_field};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_site_field() {
        let (e, psi) = ground_state_exact(&z_field(1, 1.0).unwrap()).unwrap();
        assert_relative_eq!(e, -1.0, epsilon = 1e-12);
        let p = psi.probabilities();
        assert_relative_eq!(p[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_site_heisenberg_singlet() {
        let h = heisenberg(2, &[(0, 1)], 1.0).unwrap();
        let (e, psi) = ground_state_exact(&h).unwrap();
        assert_relative_eq!(e, -3.0, epsilon = 1e-12);
        let v = psi.to_normalized();
        assert!(v[0].norm() < 1e-12 && v[3].norm() < 1e-12);
        assert_relative_eq!((v[1] + v[2]).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h: Hamiltonian = "(0,1) X@0".parse().unwrap();
        assert!(matches!(ground_state_exact(&h), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn rayleigh_quotient_bound() {
        let h = tfim(5, 1.0, 0.8, true).unwrap();
        let (e0, _) = ground_state_exact(&h).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let amps: Vec<C64> = (0..32)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let s = DenseState::from_complex(5, amps).unwrap();
            assert!(h.expectation(&s).unwrap().re >= e0 - 1e-9);
        }
    }
}
