//! Classical pairwise energy functions.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};

/// `E(v) = -v^T K v - a^T v` with `K` strictly upper triangular.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalIsingParams {
    k: Vec<Vec<C64>>,
    a: Vec<C64>,
}

impl ClassicalIsingParams {
    pub fn new(k: Vec<Vec<C64>>, a: Vec<C64>) -> Result<Self> {
        let n = a.len();
        if k.len() != n || k.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "coupling matrix must be {n}x{n}"
            )));
        }
        for (i, row) in k.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                if j <= i && z.norm() != 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "K[{i}][{j}] must vanish (strictly upper triangular)"
                    )));
                }
            }
        }
        Ok(Self { k, a })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            k: vec![vec![C64::new(0.0, 0.0); n]; n],
            a: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// Real couplings and fields uniform in `[-scale, scale]`, all pairs coupled.
    pub fn random<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> Self {
        let mut p = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                p.k[i][j] = C64::new(rng.gen_range(-scale..=scale), 0.0);
            }
            p.a[i] = C64::new(rng.gen_range(-scale..=scale), 0.0);
        }
        p
    }

    pub fn n_sites(&self) -> usize {
        self.a.len()
    }

    pub fn coupling(&self, i: usize, j: usize) -> C64 {
        self.k[i][j]
    }

    pub fn set_coupling(&mut self, i: usize, j: usize, value: C64) -> Result<()> {
        if i >= j || j >= self.n_sites() {
            return Err(Error::InvalidArgument(format!(
                "coupling ({i},{j}) must satisfy i < j < {}",
                self.n_sites()
            )));
        }
        self.k[i][j] = value;
        Ok(())
    }

    pub fn field(&self, i: usize) -> C64 {
        self.a[i]
    }

    pub fn fields(&self) -> &[C64] {
        &self.a
    }

    pub fn set_field(&mut self, i: usize, value: C64) {
        self.a[i] = value;
    }

    /// Pairs `(i, j, K_ij)` with nonzero coupling.
    pub fn bonds(&self) -> Vec<(usize, usize, C64)> {
        let n = self.n_sites();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.k[i][j].norm() != 0.0 {
                    out.push((i, j, self.k[i][j]));
                }
            }
        }
        out
    }
}

pub fn classical_energy(p: &ClassicalIsingParams, v: &Config) -> Result<C64> {
    let n = p.n_sites();
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "config of length {} for {n} sites",
            v.len()
        )));
    }
    let mut e = C64::new(0.0, 0.0);
    for i in 0..n {
        if v.get(i) == 0 {
            continue;
        }
        e -= p.a[i];
        for j in (i + 1)..n {
            if v.get(j) == 1 {
                e -= p.k[i][j];
            }
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn examples() {
        let p = ClassicalIsingParams::zeros(3);
        assert_eq!(classical_energy(&p, &"101".parse().unwrap()).unwrap(), c(0.0, 0.0));
        let mut p = ClassicalIsingParams::zeros(2);
        p.set_coupling(0, 1, c(1.0, 0.0)).unwrap();
        assert_eq!(classical_energy(&p, &"11".parse().unwrap()).unwrap(), c(-1.0, 0.0));
        assert!(classical_energy(&p, &"1".parse().unwrap()).is_err());
        assert!(p.set_coupling(1, 0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn matches_full_quadratic_form() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 3;
        let mut p = ClassicalIsingParams::zeros(n);
        for i in 0..n {
            p.set_field(i, c(rng.gen(), rng.gen()));
            for j in (i + 1)..n {
                p.set_coupling(i, j, c(rng.gen(), rng.gen())).unwrap();
            }
        }
        let v: Config = "101".parse().unwrap();
        let x: Vec<f64> = v.bits().iter().map(|&b| b as f64).collect();
        let mut want = c(0.0, 0.0);
        for i in 0..n {
            want -= p.field(i) * x[i];
            for j in 0..n {
                if i < j {
                    want -= x[i] * p.coupling(i, j) * x[j];
                }
            }
        }
        assert!((classical_energy(&p, &v).unwrap() - want).norm() < 1e-14);
    }
}
