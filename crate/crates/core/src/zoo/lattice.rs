use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{rokhsar_kivelson, toric_code, Hamiltonian};

/// Periodic `Lx x Ly` square lattice with one qubit on every bond.
///
/// Bond qubits: `h(x, y) = 2 (y Lx + x)` joins vertex `(x, y)` to `(x+1, y)`,
/// `v(x, y) = h(x, y) + 1` joins it to `(x, y+1)`. Vertex qubits, used by the
/// RVB construction, are numbered `y Lx + x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusLattice {
    lx: usize,
    ly: usize,
}

impl TorusLattice {
    pub fn new(lx: usize, ly: usize) -> Result<Self> {
        if lx < 2 || ly < 2 {
            return Err(Error::InvalidArgument(format!(
                "torus needs Lx, Ly >= 2, got {lx}x{ly}"
            )));
        }
        Ok(Self { lx, ly })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn n_vertices(&self) -> usize {
        self.lx * self.ly
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.lx * self.ly
    }

    fn wrap(&self, x: isize, y: isize) -> (usize, usize) {
        (
            x.rem_euclid(self.lx as isize) as usize,
            y.rem_euclid(self.ly as isize) as usize,
        )
    }

    pub fn site(&self, x: isize, y: isize) -> usize {
        let (x, y) = self.wrap(x, y);
        y * self.lx + x
    }

    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site % self.lx, site / self.lx)
    }

    pub fn h(&self, x: isize, y: isize) -> usize {
        2 * self.site(x, y)
    }

    pub fn v(&self, x: isize, y: isize) -> usize {
        2 * self.site(x, y) + 1
    }

    /// `[h(x,y), h(x-1,y), v(x,y), v(x,y-1)]`.
    pub fn vertex_qubits(&self, x: isize, y: isize) -> [usize; 4] {
        [self.h(x, y), self.h(x - 1, y), self.v(x, y), self.v(x, y - 1)]
    }

    /// `[bottom h(x,y), top h(x,y+1), left v(x,y), right v(x+1,y)]`.
    pub fn plaquette_qubits(&self, x: isize, y: isize) -> [usize; 4] {
        [self.h(x, y), self.h(x, y + 1), self.v(x, y), self.v(x + 1, y)]
    }

    /// Vertex stars in vertex-site order.
    pub fn vertices(&self) -> Vec<[usize; 4]> {
        (0..self.n_vertices())
            .map(|s| {
                let (x, y) = self.coords(s);
                self.vertex_qubits(x as isize, y as isize)
            })
            .collect()
    }

    /// Plaquettes, indexed by their lower-left vertex.
    pub fn plaquettes(&self) -> Vec<[usize; 4]> {
        (0..self.n_vertices())
            .map(|s| {
                let (x, y) = self.coords(s);
                self.plaquette_qubits(x as isize, y as isize)
            })
            .collect()
    }

    /// Horizontal electric loop `h(x, 0)`, winding in x.
    pub fn e_x(&self) -> Vec<usize> {
        (0..self.lx).map(|x| self.h(x as isize, 0)).collect()
    }

    /// Vertical electric loop `v(0, y)`, winding in y.
    pub fn e_y(&self) -> Vec<usize> {
        (0..self.ly).map(|y| self.v(0, y as isize)).collect()
    }

    /// Cut `v(x, 0)`; its parity detects `e_y`-type winding.
    pub fn m_x(&self) -> Vec<usize> {
        (0..self.lx).map(|x| self.v(x as isize, 0)).collect()
    }

    /// Cut `h(0, y)`; its parity detects `e_x`-type winding.
    pub fn m_y(&self) -> Vec<usize> {
        (0..self.ly).map(|y| self.h(0, y as isize)).collect()
    }

    /// Vertex-qubit bonds: bond `2 s` joins `s` to its +x neighbour and bond
    /// `2 s + 1` joins it to its +y neighbour.
    pub fn vertex_bonds(&self) -> Vec<(usize, usize)> {
        (0..self.n_vertices())
            .flat_map(|s| {
                let (x, y) = self.coords(s);
                let (x, y) = (x as isize, y as isize);
                [(s, self.site(x + 1, y)), (s, self.site(x, y + 1))]
            })
            .collect()
    }

    /// Bonds at a vertex in leg order `[+x, -x, +y, -y]`.
    pub fn incident_bonds(&self, s: usize) -> [usize; 4] {
        let (x, y) = self.coords(s);
        let (x, y) = (x as isize, y as isize);
        [2 * s, 2 * self.site(x - 1, y), 2 * s + 1, 2 * self.site(x, y - 1) + 1]
    }

    /// Even sublattice, `x + y` even.
    pub fn is_a_site(&self, s: usize) -> bool {
        let (x, y) = self.coords(s);
        (x + y) % 2 == 0
    }

    pub fn is_bipartite(&self) -> bool {
        self.lx % 2 == 0 && self.ly % 2 == 0
    }

    /// `-sum_v A_v - sum_p B_p` on the bond qubits.
    pub fn toric_hamiltonian(&self) -> Result<Hamiltonian> {
        let v: Vec<Vec<usize>> = self.vertices().iter().map(|q| q.to_vec()).collect();
        let p: Vec<Vec<usize>> = self.plaquettes().iter().map(|q| q.to_vec()).collect();
        toric_code(self.n_qubits(), &v, &p)
    }

    /// Rokhsar-Kivelson dimer Hamiltonian on the bond qubits.
    pub fn rk_hamiltonian(&self, j: f64, v: f64) -> Result<Hamiltonian> {
        rokhsar_kivelson(self.n_qubits(), &self.plaquettes(), j, v)
    }
}

/// Winding parities `(pi_x, pi_y)`. `pi_x` is the parity of occupied `m_x`
/// bonds (odd for the vertical loop `e_y`), `pi_y` that of `m_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorLabel {
    pub px: i8,
    pub py: i8,
}

impl SectorLabel {
    pub const ALL: [SectorLabel; 4] = [
        SectorLabel { px: 1, py: 1 },
        SectorLabel { px: -1, py: 1 },
        SectorLabel { px: 1, py: -1 },
        SectorLabel { px: -1, py: -1 },
    ];

    pub fn new(px: i8, py: i8) -> Result<Self> {
        let s = Self { px, py };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.px, 1 | -1) || !matches!(self.py, 1 | -1) {
            return Err(Error::InvalidArgument(format!(
                "sector labels are +1 or -1, got ({}, {})",
                self.px, self.py
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+},{:+})", self.px, self.py)
    }
}

impl std::str::FromStr for SectorLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let sign = |c: char| if c == '+' { 1 } else { -1 };
        if let [a @ ('+' | '-'), b @ ('+' | '-')] = t.chars().collect::<Vec<_>>()[..] {
            return Self::new(sign(a), sign(b));
        }
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::Format(format!("sector {s:?}: expected two signs")));
        }
        let p = |x: &str| -> Result<i8> {
            x.parse::<i8>()
                .map_err(|_| Error::Format(format!("sector {s:?}: bad sign {x:?}")))
        };
        Self::new(p(parts[0])?, p(parts[1])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_are_total() {
        let lat = TorusLattice::new(3, 2).unwrap();
        let mut count = vec![0; lat.n_qubits()];
        for v in lat.vertices() {
            for q in v {
                count[q] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
        let mut count = vec![0; lat.n_qubits()];
        for p in lat.plaquettes() {
            for q in p {
                count[q] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
        assert!(TorusLattice::new(1, 3).is_err());
    }

    #[test]
    fn sector_parsing() {
        assert_eq!("(-1,1)".parse::<SectorLabel>().unwrap(), SectorLabel { px: -1, py: 1 });
        assert!("(0,1)".parse::<SectorLabel>().is_err());
        assert_eq!("+-".parse::<SectorLabel>().unwrap(), SectorLabel { px: 1, py: -1 });
        assert!(SectorLabel::new(2, 1).is_err());
    }
}
