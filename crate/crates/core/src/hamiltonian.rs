//! Operators as sums of Pauli strings.
//!
//! Conventions: `Z|b> = (-1)^b |b>`, `X|b> = |1-b>`, `Y|b> = i(-1)^b |1-b>`.
//!
//! Text format, one term per line:
//!
//! ```text
//! # transverse-field Ising on two sites
//! sites 2
//! -1.0 Z@0 Z@1
//! -0.5 X@0
//! (0,0.25) X@0 Y@1
//! ```
//!
//! The coefficient is a real number or a complex `(re,im)` pair; a line with
//! a coefficient and no operators is a constant. `sites N` is optional and
//! defaults to one past the largest site used.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dense::DenseState;
use crate::error::{check_site, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: C64,
    /// Sorted by site, sites distinct.
    pub ops: Vec<(usize, Pauli)>,
}

impl PauliTerm {
    pub fn new(coeff: C64, mut ops: Vec<(usize, Pauli)>) -> Result<Self> {
        ops.sort();
        if ops.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!(
                "Pauli term acts twice on one site: {ops:?}"
            )));
        }
        Ok(Self { coeff, ops })
    }

    /// Returns `(v', <v|T|v'>)`: the unique configuration connected to `v`.
    pub fn connect(&self, v: &Config) -> (Config, C64) {
        let mut w = v.clone();
        let mut ny = 0;
        for &(s, p) in &self.ops {
            if p != Pauli::Z {
                w.flip(s);
            }
            if p == Pauli::Y {
                ny += 1;
            }
        }
        // <v|T|w> is the phase T picks up acting on w
        let mut sign = 1.0;
        for &(s, p) in &self.ops {
            if p != Pauli::X && w.get(s) == 1 {
                sign = -sign;
            }
        }
        (w, self.coeff * C64::i().powi(ny) * sign)
    }

    /// Acts on basis index `k` of an `n`-site register: `T|k> = c |k'>`.
    pub fn act_index(&self, n: usize, k: u64) -> (u64, C64) {
        let mut out = k;
        let mut ph = self.coeff;
        for &(s, p) in &self.ops {
            let bit = n - 1 - s;
            let b = (k >> bit) & 1;
            match p {
                Pauli::X => out ^= 1 << bit,
                Pauli::Y => {
                    out ^= 1 << bit;
                    ph *= if b == 0 { C64::i() } else { -C64::i() };
                }
                Pauli::Z => {
                    if b == 1 {
                        ph = -ph;
                    }
                }
            }
        }
        (out, ph)
    }

    pub fn is_diagonal(&self) -> bool {
        self.ops.iter().all(|&(_, p)| p == Pauli::Z)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    n_sites: usize,
    terms: Vec<PauliTerm>,
}

impl Hamiltonian {
    pub fn new(n_sites: usize) -> Self {
        Self {
            n_sites,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(n_sites: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        let mut h = Self::new(n_sites);
        for t in terms {
            h.push(t)?;
        }
        Ok(h)
    }

    pub fn push(&mut self, t: PauliTerm) -> Result<()> {
        for &(s, _) in &t.ops {
            check_site(s, self.n_sites)?;
        }
        self.terms.push(t);
        Ok(())
    }

    pub fn add(&mut self, coeff: impl Into<C64>, ops: &[(usize, Pauli)]) -> Result<()> {
        self.push(PauliTerm::new(coeff.into(), ops.to_vec())?)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Identity operator (a single constant term).
    pub fn identity(n_sites: usize) -> Self {
        Self {
            n_sites,
            terms: vec![PauliTerm {
                coeff: C64::new(1.0, 0.0),
                ops: vec![],
            }],
        }
    }

    /// Merges identical Pauli strings and drops zero coefficients.
    pub fn simplified(&self) -> Self {
        let mut acc: BTreeMap<Vec<(usize, Pauli)>, C64> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry(t.ops.clone()).or_default() += t.coeff;
        }
        Self {
            n_sites: self.n_sites,
            terms: acc
                .into_iter()
                .filter(|(_, c)| c.norm() > 1e-15)
                .map(|(ops, coeff)| PauliTerm { coeff, ops })
                .collect(),
        }
    }

    /// Largest imaginary part among merged coefficients. Pauli strings are
    /// Hermitian, so the operator is Hermitian iff this vanishes.
    pub fn hermiticity_defect(&self) -> f64 {
        self.simplified()
            .terms
            .iter()
            .map(|t| t.coeff.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= 1e-12
    }

    /// Nonzero matrix elements `(v', <v|H|v'>)` in row `v`, duplicates merged.
    pub fn connections(&self, v: &Config) -> Vec<(Config, C64)> {
        let mut out: Vec<(Config, C64)> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let (w, el) = t.connect(v);
            if let Some(slot) = out.iter_mut().find(|(c, _)| *c == w) {
                slot.1 += el;
            } else {
                out.push((w, el));
            }
        }
        out.retain(|(_, el)| el.norm() > 0.0);
        out
    }

    /// `H psi` on a native vector.
    pub fn apply_vec(&self, psi: &[C64]) -> Result<Vec<C64>> {
        let n = self.n_sites;
        if psi.len() != 1usize << n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {n} sites",
                psi.len()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        for t in &self.terms {
            for (k, &a) in psi.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let (k2, ph) = t.act_index(n, k as u64);
                out[k2 as usize] += ph * a;
            }
        }
        Ok(out)
    }

    /// `<psi|H|psi> / <psi|psi>`.
    pub fn expectation(&self, psi: &DenseState) -> Result<C64> {
        if psi.n_sites() != self.n_sites {
            return Err(Error::DimensionMismatch(format!(
                "state on {} sites, operator on {}",
                psi.n_sites(),
                self.n_sites
            )));
        }
        let v = psi.to_normalized();
        let hv = self.apply_vec(&v)?;
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm == 0.0 {
            return Err(Error::ZeroAmplitude("expectation in a zero state".into()));
        }
        Ok(v.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum::<C64>() / norm)
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            n_sites: self.n_sites,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coeff: t.coeff * c,
                    ops: t.ops.clone(),
                })
                .collect(),
        }
    }

    pub fn plus(&self, other: &Hamiltonian) -> Result<Self> {
        if self.n_sites != other.n_sites {
            return Err(Error::DimensionMismatch(format!(
                "operators on {} and {} sites",
                self.n_sites, other.n_sites
            )));
        }
        let mut h = self.clone();
        h.terms.extend(other.terms.iter().cloned());
        Ok(h)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("sites {}\n", self.n_sites);
        for t in &self.terms {
            if t.coeff.im == 0.0 {
                s.push_str(&format!("{}", t.coeff.re));
            } else {
                s.push_str(&format!("({},{})", t.coeff.re, t.coeff.im));
            }
            for (site, p) in &t.ops {
                s.push_str(&format!(" {p}@{site}"));
            }
            s.push('\n');
        }
        s
    }
}

/// `-J sum Z_i Z_{i+1} - h sum X_i` on a chain.
pub fn tfim(n: usize, j: f64, h: f64, periodic: bool) -> Result<Hamiltonian> {
    let mut op = Hamiltonian::new(n);
    let bonds = if periodic && n > 2 { n } else { n.saturating_sub(1) };
    for i in 0..bonds {
        op.add(-j, &[(i, Pauli::Z), ((i + 1) % n, Pauli::Z)])?;
    }
    for i in 0..n {
        op.add(-h, &[(i, Pauli::X)])?;
    }
    Ok(op)
}

/// `J sum_<ij> (X_i X_j + Y_i Y_j + Z_i Z_j)` over the given edges.
pub fn heisenberg(n: usize, edges: &[(usize, usize)], j: f64) -> Result<Hamiltonian> {
    let mut op = Hamiltonian::new(n);
    for &(a, b) in edges {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            op.add(j, &[(a, p), (b, p)])?;
        }
    }
    Ok(op)
}

pub fn heisenberg_chain(n: usize, j: f64, periodic: bool) -> Result<Hamiltonian> {
    let bonds = if periodic && n > 2 { n } else { n.saturating_sub(1) };
    let edges: Vec<_> = (0..bonds).map(|i| (i, (i + 1) % n)).collect();
    heisenberg(n, &edges, j)
}

/// `h sum Z_i`. With `h > 0` the ground state is all ones.
pub fn z_field(n: usize, h: f64) -> Result<Hamiltonian> {
    let mut op = Hamiltonian::new(n);
    for i in 0..n {
        op.add(h, &[(i, Pauli::Z)])?;
    }
    Ok(op)
}

/// `-sum_v prod_{i in v} Z_i - sum_p prod_{i in p} X_i`.
pub fn toric_code(n: usize, vertices: &[Vec<usize>], plaquettes: &[Vec<usize>]) -> Result<Hamiltonian> {
    let mut op = Hamiltonian::new(n);
    for v in vertices {
        let ops: Vec<_> = v.iter().map(|&q| (q, Pauli::Z)).collect();
        op.add(-1.0, &ops)?;
    }
    for p in plaquettes {
        let ops: Vec<_> = p.iter().map(|&q| (q, Pauli::X)).collect();
        op.add(-1.0, &ops)?;
    }
    Ok(op)
}

/// Pauli expansion of the single-qubit operator `|a><b|`.
fn ketbra(a: u8, b: u8) -> [(C64, Option<Pauli>); 2] {
    let h = C64::new(0.5, 0.0);
    let hi = C64::new(0.0, 0.5);
    match (a, b) {
        (0, 0) => [(h, None), (h, Some(Pauli::Z))],
        (1, 1) => [(h, None), (-h, Some(Pauli::Z))],
        (0, 1) => [(h, Some(Pauli::X)), (hi, Some(Pauli::Y))],
        _ => [(h, Some(Pauli::X)), (-hi, Some(Pauli::Y))],
    }
}

/// Adds `coeff |a><b|` on `sites` to `op` as Pauli strings.
pub fn add_projector(op: &mut Hamiltonian, coeff: C64, sites: &[usize], a: &[u8], b: &[u8]) -> Result<()> {
    if sites.len() != a.len() || sites.len() != b.len() {
        return Err(Error::DimensionMismatch("projector pattern length".into()));
    }
    let k = sites.len();
    for choice in 0..(1usize << k) {
        let mut c = coeff;
        let mut ops = Vec::new();
        for (l, &s) in sites.iter().enumerate() {
            let (f, p) = ketbra(a[l], b[l])[(choice >> l) & 1];
            c *= f;
            if let Some(p) = p {
                ops.push((s, p));
            }
        }
        op.push(PauliTerm::new(c, ops)?)?;
    }
    Ok(())
}

/// Quantum dimer model on square plaquettes.
///
/// Each plaquette lists its bond qubits as `[bottom, top, left, right]`.
/// Two horizontal dimers (`=`) occupy bottom and top, two vertical dimers
/// (`||`) occupy left and right. The operator is
/// `sum_p -J(|=><|| + h.c.) + V(|=><=| + |||><|||)`.
pub fn rokhsar_kivelson(n: usize, plaquettes: &[[usize; 4]], j: f64, v: f64) -> Result<Hamiltonian> {
    let mut op = Hamiltonian::new(n);
    let horiz = [1u8, 1, 0, 0];
    let vert = [0u8, 0, 1, 1];
    for p in plaquettes {
        add_projector(&mut op, C64::new(-j, 0.0), p, &horiz, &vert)?;
        add_projector(&mut op, C64::new(-j, 0.0), p, &vert, &horiz)?;
        add_projector(&mut op, C64::new(v, 0.0), p, &horiz, &horiz)?;
        add_projector(&mut op, C64::new(v, 0.0), p, &vert, &vert)?;
    }
    Ok(op.simplified())
}

fn parse_coeff(tok: &str) -> Result<C64> {
    let bad = || Error::Format(format!("cannot parse coefficient {tok:?}"));
    if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        return Ok(C64::new(re, im));
    }
    tok.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad())
}

fn parse_op(tok: &str) -> Result<(usize, Pauli)> {
    let bad = || Error::Format(format!("cannot parse operator {tok:?}; expected e.g. X@3"));
    let (p, s) = tok.split_once('@').ok_or_else(bad)?;
    let p = match p {
        "X" | "x" => Pauli::X,
        "Y" | "y" => Pauli::Y,
        "Z" | "z" => Pauli::Z,
        _ => return Err(bad()),
    };
    Ok((s.parse().map_err(|_| bad())?, p))
}

impl FromStr for Hamiltonian {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let first = toks.next().unwrap_or_default();
            if first == "sites" {
                let n = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Format(format!("line {}: bad sites directive", lineno + 1)))?;
                declared = Some(n);
                continue;
            }
            let coeff = parse_coeff(first)
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
            let ops = toks
                .map(parse_op)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
            terms.push(PauliTerm::new(coeff, ops)?);
        }
        let used = terms
            .iter()
            .flat_map(|t| t.ops.iter().map(|&(s, _)| s + 1))
            .max()
            .unwrap_or(0);
        let n = declared.unwrap_or(used);
        if used > n {
            return Err(Error::Format(format!(
                "term uses site {} but only {n} sites declared",
                used - 1
            )));
        }
        Hamiltonian::from_terms(n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_actions() {
        let v: Config = "01".parse().unwrap();
        let z0 = PauliTerm::new(C64::new(1.0, 0.0), vec![(0, Pauli::Z)]).unwrap();
        assert_eq!(z0.connect(&v), (v.clone(), C64::new(1.0, 0.0)));
        let z1 = PauliTerm::new(C64::new(1.0, 0.0), vec![(1, Pauli::Z)]).unwrap();
        assert_eq!(z1.connect(&v).1, C64::new(-1.0, 0.0));
        // <v|Y_0|v'> with v = 01, v' = 11: Y|1> = -i|0>
        let y0 = PauliTerm::new(C64::new(1.0, 0.0), vec![(0, Pauli::Y)]).unwrap();
        let (w, el) = y0.connect(&v);
        assert_eq!(w.to_string(), "11");
        assert_eq!(el, -C64::i());
        let (k2, ph) = y0.act_index(2, w.index());
        assert_eq!(k2, v.index());
        assert_eq!(ph, el);
    }

    #[test]
    fn dense_application_matches_connections() {
        let h: Hamiltonian = "-1 Z@0 Z@1\n(0.5,0) Y@1 X@2\n0.3 X@0\n2\n".parse().unwrap();
        let n = h.n_sites();
        assert_eq!(n, 3);
        for k in 0..8u64 {
            let mut e = vec![C64::new(0.0, 0.0); 8];
            e[k as usize] = C64::new(1.0, 0.0);
            let col = h.apply_vec(&e).unwrap();
            // row k of H via connections must equal column k conjugated (Hermitian)
            let v = Config::from_index(n, k);
            for (w, el) in h.connections(&v) {
                assert!((col[w.index() as usize].conj() - el).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let h = tfim(4, 1.0, 0.7, true).unwrap();
        let back: Hamiltonian = h.to_text().parse().unwrap();
        assert_eq!(back, h);
        assert!("1 Q@0".parse::<Hamiltonian>().is_err());
        assert!("sites 2\n1 Z@5".parse::<Hamiltonian>().is_err());
        assert!("1 Z@0 Z@0".parse::<Hamiltonian>().is_err());
    }

    #[test]
    fn hermiticity() {
        assert!(heisenberg_chain(4, 1.0, true).unwrap().is_hermitian());
        let bad: Hamiltonian = "(0,1) X@0".parse().unwrap();
        assert!(!bad.is_hermitian());
        let rk = rokhsar_kivelson(4, &[[0, 1, 2, 3]], 1.0, 1.0).unwrap();
        assert!(rk.is_hermitian());
    }
}
