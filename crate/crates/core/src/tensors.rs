//! COPY and XOR tensors, CPD-form tensors and a small contraction oracle.
//!
//! The Hadamard matrix is kept unnormalised, `H_jk = (-1)^{jk}`, so
//! `H H = 2 I` and conjugating an order-`k` COPY tensor by `H` on every leg
//! gives exactly `2 XOR_k`.

use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::scaled::ScaledComplex;

/// Largest number of entries any tensor in a contraction may hold.
pub const DEFAULT_TENSOR_CAP: usize = 1 << 22;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major tensor; leg 0 is the slowest index.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<C64>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn unravel(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for i in (0..dims.len()).rev() {
        out[i] = flat % dims[i];
        flat /= dims[i];
    }
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if size != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for dims {dims:?}",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let size = dims.iter().product();
        Self {
            dims,
            data: vec![ZERO; size],
        }
    }

    pub fn scalar(c: C64) -> Self {
        Self {
            dims: vec![],
            data: vec![c],
        }
    }

    pub fn vector(v: &[C64]) -> Self {
        Self {
            dims: vec![v.len()],
            data: v.to_vec(),
        }
    }

    pub fn from_fn(dims: Vec<usize>, f: impl Fn(&[usize]) -> C64) -> Self {
        let size: usize = dims.iter().product();
        let mut idx = vec![0; dims.len()];
        let data = (0..size)
            .map(|k| {
                unravel(k, &dims, &mut idx);
                f(&idx)
            })
            .collect();
        Self { dims, data }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.dims.len(), "index order mismatch");
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| {
            assert!(i < d, "index {i} out of range for leg of dim {d}");
            acc * d + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: C64) {
        let k = self.flat(idx);
        self.data[k] = value;
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &DenseTensor) -> f64 {
        if self.dims != other.dims {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|z| z.norm() != 0.0).count()
    }

    /// Reorders legs: new leg `i` is old leg `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let k = self.order();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of {k} legs"
            )));
        }
        let old_strides = strides(&self.dims);
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut idx = vec![0; k];
        let mut data = Vec::with_capacity(self.data.len());
        for flat in 0..self.data.len() {
            unravel(flat, &dims, &mut idx);
            let old: usize = idx.iter().zip(perm).map(|(&i, &p)| i * old_strides[p]).sum();
            data.push(self.data[old]);
        }
        Ok(Self { dims, data })
    }

    pub fn outer(&self, other: &DenseTensor) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { dims, data }
    }

    /// Applies `m` to one leg: `t'[.., j, ..] = sum_k m[j, k] t[.., k, ..]`.
    pub fn apply_matrix(&self, leg: usize, m: &CMat) -> Result<Self> {
        if leg >= self.order() || m.cols() != self.dims[leg] {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply a {}x{} matrix to leg {leg} of {:?}",
                m.rows(),
                m.cols(),
                self.dims
            )));
        }
        let mut dims = self.dims.clone();
        dims[leg] = m.rows();
        let s = strides(&self.dims);
        let mut idx = vec![0; dims.len()];
        let mut out = Vec::with_capacity(dims.iter().product());
        let total: usize = dims.iter().product();
        for flat in 0..total {
            unravel(flat, &dims, &mut idx);
            let base: usize = idx
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != leg)
                .map(|(l, &i)| i * s[l])
                .sum();
            let j = idx[leg];
            let v: C64 = (0..self.dims[leg])
                .map(|k| m[(j, k)] * self.data[base + k * s[leg]])
                .sum();
            out.push(v);
        }
        Ok(Self { dims, data: out })
    }

    /// Contracts one leg with a vector, removing the leg.
    pub fn terminate(&self, leg: usize, vec: &[C64]) -> Result<Self> {
        let row = CMat::from_rows(vec![vec.to_vec()])?;
        let t = self.apply_matrix(leg, &row)?;
        let mut dims = t.dims.clone();
        dims.remove(leg);
        Ok(Self { dims, data: t.data })
    }
}

/// `delta_{i1 ... ik}`.
pub fn copy_tensor(order: usize, dim: usize) -> Result<DenseTensor> {
    if order == 0 || dim == 0 {
        return Err(Error::InvalidArgument(format!(
            "COPY tensor needs order >= 1 and dim >= 1, got order {order}, dim {dim}"
        )));
    }
    Ok(DenseTensor::from_fn(vec![dim; order], |idx| {
        if idx.iter().all(|&i| i == idx[0]) {
            ONE
        } else {
            ZERO
        }
    }))
}

/// One on even-parity binary index tuples, zero otherwise.
pub fn xor_tensor(order: usize) -> Result<DenseTensor> {
    if order == 0 {
        return Err(Error::InvalidArgument("XOR tensor needs order >= 1".into()));
    }
    Ok(DenseTensor::from_fn(vec![2; order], |idx| {
        if idx.iter().sum::<usize>() % 2 == 0 {
            ONE
        } else {
            ZERO
        }
    }))
}

/// Unnormalised Hadamard `[[1, 1], [1, -1]]`.
pub fn hadamard() -> CMat {
    CMat::real(&[&[1.0, 1.0], &[1.0, -1.0]])
}

/// Contracts `H` onto each listed leg.
pub fn hadamard_conjugate(t: &DenseTensor, legs: &[usize]) -> Result<DenseTensor> {
    let h = hadamard();
    let mut out = t.clone();
    for &leg in legs {
        if leg >= t.order() || t.dims[leg] != 2 {
            return Err(Error::InvalidArgument(format!(
                "Hadamard needs a binary leg, leg {leg} of {:?}",
                t.dims
            )));
        }
        out = out.apply_matrix(leg, &h)?;
    }
    Ok(out)
}

/// `(node, leg)`.
pub type LegRef = (usize, usize);

#[derive(Clone, Debug, Default)]
pub struct TensorNetwork {
    nodes: Vec<DenseTensor>,
    edges: Vec<(LegRef, LegRef)>,
    open: Vec<LegRef>,
    cap: Option<usize>,
}

struct Work {
    t: DenseTensor,
    labels: Vec<LegRef>,
}

impl TensorNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, t: DenseTensor) -> usize {
        self.nodes.push(t);
        self.nodes.len() - 1
    }

    pub fn connect(&mut self, a: LegRef, b: LegRef) -> Result<()> {
        let da = self.leg_dim(a)?;
        let db = self.leg_dim(b)?;
        if da != db {
            return Err(Error::DimensionMismatch(format!(
                "edge {a:?}-{b:?} joins legs of dims {da} and {db}"
            )));
        }
        self.edges.push((a, b));
        Ok(())
    }

    pub fn set_open(&mut self, open: Vec<LegRef>) {
        self.open = open;
    }

    pub fn set_cap(&mut self, entries: usize) {
        self.cap = Some(entries);
    }

    pub fn edges(&self) -> &[(LegRef, LegRef)] {
        &self.edges
    }

    fn leg_dim(&self, (n, l): LegRef) -> Result<usize> {
        self.nodes
            .get(n)
            .and_then(|t| t.dims.get(l).copied())
            .ok_or_else(|| Error::InvalidArgument(format!("no leg {l} on node {n}")))
    }

    fn validate(&self) -> Result<()> {
        let mut seen: HashMap<LegRef, usize> = HashMap::new();
        for &(a, b) in &self.edges {
            if self.leg_dim(a)? != self.leg_dim(b)? {
                return Err(Error::DimensionMismatch(format!("edge {a:?}-{b:?}")));
            }
            *seen.entry(a).or_default() += 1;
            *seen.entry(b).or_default() += 1;
        }
        for &o in &self.open {
            self.leg_dim(o)?;
            *seen.entry(o).or_default() += 1;
        }
        for (n, t) in self.nodes.iter().enumerate() {
            for l in 0..t.order() {
                match seen.get(&(n, l)) {
                    Some(1) => {}
                    Some(k) => {
                        return Err(Error::InvalidArgument(format!(
                            "leg ({n},{l}) used {k} times"
                        )))
                    }
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "leg ({n},{l}) is neither contracted nor open"
                        )))
                    }
                }
            }
        }
        let open_size: usize = self.open.iter().map(|&o| self.leg_dim(o).unwrap_or(1)).product();
        if open_size > self.cap() {
            return Err(Error::CapExceeded {
                what: "open-leg entries",
                requested: open_size as u128,
                cap: self.cap() as u128,
            });
        }
        Ok(())
    }

    fn cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_TENSOR_CAP)
    }

    /// Contracts everything, choosing at each step the pair of tensors whose
    /// product is smallest.
    pub fn contract(&self) -> Result<DenseTensor> {
        self.validate()?;
        let mut st = State::new(self);
        while let Some(e) = st.cheapest_edge() {
            st.contract_edge(e, true, self.cap())?;
        }
        st.finish(&self.open, self.cap())
    }

    /// Contracts edges one at a time in the given order (indices into the
    /// edge list, each exactly once).
    pub fn contract_in_order(&self, order: &[usize]) -> Result<DenseTensor> {
        self.validate()?;
        let set: BTreeSet<usize> = order.iter().copied().collect();
        if set.len() != self.edges.len() || order.len() != self.edges.len() || set.iter().any(|&e| e >= self.edges.len()) {
            return Err(Error::InvalidArgument(
                "contraction order must list every edge exactly once".into(),
            ));
        }
        let mut st = State::new(self);
        for &e in order {
            st.contract_edge(e, false, self.cap())?;
        }
        st.finish(&self.open, self.cap())
    }
}

struct State<'a> {
    net: &'a TensorNetwork,
    works: Vec<Option<Work>>,
    owner: HashMap<LegRef, usize>,
    done: Vec<bool>,
}

impl<'a> State<'a> {
    fn new(net: &'a TensorNetwork) -> Self {
        let mut owner = HashMap::new();
        let works = net
            .nodes
            .iter()
            .enumerate()
            .map(|(n, t)| {
                let labels: Vec<LegRef> = (0..t.order()).map(|l| (n, l)).collect();
                for &lab in &labels {
                    owner.insert(lab, n);
                }
                Some(Work { t: t.clone(), labels })
            })
            .collect();
        Self {
            net,
            works,
            owner,
            done: vec![false; net.edges.len()],
        }
    }

    fn work(&self, w: usize) -> &Work {
        self.works[w].as_ref().expect("live work tensor")
    }

    fn cheapest_edge(&self) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (e, &(a, b)) in self.net.edges.iter().enumerate() {
            if self.done[e] {
                continue;
            }
            let (wa, wb) = (self.owner[&a], self.owner[&b]);
            let cost = if wa == wb {
                let d = self.net.leg_dim(a).unwrap_or(1) as f64;
                self.work(wa).t.len() as f64 / (d * d)
            } else {
                let shared: f64 = self
                    .net
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|&(f, &(x, y))| {
                        !self.done[f]
                            && ((self.owner[&x] == wa && self.owner[&y] == wb)
                                || (self.owner[&x] == wb && self.owner[&y] == wa))
                    })
                    .map(|(_, &(x, _))| self.net.leg_dim(x).unwrap_or(1) as f64)
                    .product();
                self.work(wa).t.len() as f64 * self.work(wb).t.len() as f64 / (shared * shared)
            };
            if best.map_or(true, |(c, _)| cost < c) {
                best = Some((cost, e));
            }
        }
        best.map(|(_, e)| e)
    }

    fn contract_edge(&mut self, e: usize, bundle: bool, cap: usize) -> Result<()> {
        let (a, b) = self.net.edges[e];
        let (wa, wb) = (self.owner[&a], self.owner[&b]);
        if wa == wb {
            self.done[e] = true;
            let w = self.works[wa].take().expect("live work tensor");
            let pa = w.labels.iter().position(|&l| l == a).expect("label");
            let pb = w.labels.iter().position(|&l| l == b).expect("label");
            let t = trace(&w.t, pa, pb)?;
            let labels = w
                .labels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pa && i != pb)
                .map(|(_, &l)| l)
                .collect();
            self.works[wa] = Some(Work { t, labels });
            return Ok(());
        }
        let mut pairs = vec![(a, b)];
        self.done[e] = true;
        if bundle {
            for (f, &(x, y)) in self.net.edges.iter().enumerate() {
                if self.done[f] {
                    continue;
                }
                if self.owner[&x] == wa && self.owner[&y] == wb {
                    pairs.push((x, y));
                    self.done[f] = true;
                } else if self.owner[&x] == wb && self.owner[&y] == wa {
                    pairs.push((y, x));
                    self.done[f] = true;
                }
            }
        }
        let ta = self.works[wa].take().expect("live work tensor");
        let tb = self.works[wb].take().expect("live work tensor");
        let la: Vec<usize> = pairs
            .iter()
            .map(|(x, _)| ta.labels.iter().position(|l| l == x).expect("label"))
            .collect();
        let lb: Vec<usize> = pairs
            .iter()
            .map(|(_, y)| tb.labels.iter().position(|l| l == y).expect("label"))
            .collect();
        let t = tensordot(&ta.t, &la, &tb.t, &lb, cap)?;
        let mut labels: Vec<LegRef> = ta
            .labels
            .iter()
            .enumerate()
            .filter(|(i, _)| !la.contains(i))
            .map(|(_, &l)| l)
            .collect();
        labels.extend(
            tb.labels
                .iter()
                .enumerate()
                .filter(|(i, _)| !lb.contains(i))
                .map(|(_, &l)| l),
        );
        for &l in &labels {
            self.owner.insert(l, wa);
        }
        self.works[wa] = Some(Work { t, labels });
        Ok(())
    }

    fn finish(mut self, open: &[LegRef], cap: usize) -> Result<DenseTensor> {
        let mut acc: Option<Work> = None;
        for w in self.works.iter_mut() {
            if let Some(w) = w.take() {
                acc = Some(match acc {
                    None => w,
                    Some(prev) => {
                        if prev.t.len() * w.t.len() > cap {
                            return Err(Error::CapExceeded {
                                what: "intermediate tensor entries",
                                requested: (prev.t.len() * w.t.len()) as u128,
                                cap: cap as u128,
                            });
                        }
                        let mut labels = prev.labels;
                        labels.extend(w.labels);
                        Work {
                            t: prev.t.outer(&w.t),
                            labels,
                        }
                    }
                });
            }
        }
        let w = acc.unwrap_or(Work {
            t: DenseTensor::scalar(ONE),
            labels: vec![],
        });
        let perm: Vec<usize> = open
            .iter()
            .map(|o| w.labels.iter().position(|l| l == o).expect("open label"))
            .collect();
        w.t.permute(&perm)
    }
}

/// Sums over `t[.., i, .., i, ..]` for legs `p` and `q`.
fn trace(t: &DenseTensor, p: usize, q: usize) -> Result<DenseTensor> {
    if t.dims[p] != t.dims[q] {
        return Err(Error::DimensionMismatch(format!("trace over legs of dims {} and {}", t.dims[p], t.dims[q])));
    }
    let dims: Vec<usize> = t
        .dims
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p && i != q)
        .map(|(_, &d)| d)
        .collect();
    let s = strides(&t.dims);
    let rest: Vec<usize> = (0..t.order()).filter(|&i| i != p && i != q).collect();
    let mut idx = vec![0; dims.len()];
    let total: usize = dims.iter().product();
    let mut data = Vec::with_capacity(total);
    for flat in 0..total {
        unravel(flat, &dims, &mut idx);
        let base: usize = idx.iter().zip(&rest).map(|(&i, &l)| i * s[l]).sum();
        data.push((0..t.dims[p]).map(|k| t.data[base + k * (s[p] + s[q])]).sum());
    }
    Ok(DenseTensor { dims, data })
}

/// Contracts legs `la` of `a` with legs `lb` of `b`; result legs are the free
/// legs of `a` followed by those of `b`.
pub fn tensordot(a: &DenseTensor, la: &[usize], b: &DenseTensor, lb: &[usize], cap: usize) -> Result<DenseTensor> {
    if la.len() != lb.len() || la.iter().zip(lb).any(|(&x, &y)| a.dims[x] != b.dims[y]) {
        return Err(Error::DimensionMismatch("tensordot leg dims".into()));
    }
    let fa: Vec<usize> = (0..a.order()).filter(|i| !la.contains(i)).collect();
    let fb: Vec<usize> = (0..b.order()).filter(|i| !lb.contains(i)).collect();
    let pa: Vec<usize> = fa.iter().chain(la).copied().collect();
    let pb: Vec<usize> = lb.iter().chain(&fb).copied().collect();
    let ap = a.permute(&pa)?;
    let bp = b.permute(&pb)?;
    let m: usize = fa.iter().map(|&i| a.dims[i]).product();
    let k: usize = la.iter().map(|&i| a.dims[i]).product();
    let n: usize = fb.iter().map(|&i| b.dims[i]).product();
    if m * n > cap {
        return Err(Error::CapExceeded {
            what: "intermediate tensor entries",
            requested: (m * n) as u128,
            cap: cap as u128,
        });
    }
    let mut data = vec![ZERO; m * n];
    for i in 0..m {
        for kk in 0..k {
            let x = ap.data[i * k + kk];
            if x == ZERO {
                continue;
            }
            let row = &bp.data[kk * n..(kk + 1) * n];
            for (out, y) in data[i * n..(i + 1) * n].iter_mut().zip(row) {
                *out += x * y;
            }
        }
    }
    let mut dims: Vec<usize> = fa.iter().map(|&i| a.dims[i]).collect();
    dims.extend(fb.iter().map(|&i| b.dims[i]));
    Ok(DenseTensor { dims, data })
}

/// `T[v_1..v_k] = sum_alpha lambda_alpha prod_j A_j[alpha, v_j]`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CpdTensor {
    weights: Vec<C64>,
    factors: Vec<CMat>,
}

impl CpdTensor {
    pub fn new(weights: Vec<C64>, factors: Vec<CMat>) -> Result<Self> {
        let r = weights.len();
        if r == 0 {
            return Err(Error::InvalidArgument("CPD rank must be positive".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.rows() != r) {
            return Err(Error::DimensionMismatch(format!(
                "component matrix with {} rows for rank {r}",
                f.rows()
            )));
        }
        Ok(Self { weights, factors })
    }

    /// Unit weights.
    pub fn unweighted(factors: Vec<CMat>) -> Result<Self> {
        let r = factors.first().map_or(0, |f| f.rows());
        Self::new(vec![ONE; r], factors)
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.cols()).collect()
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn factors(&self) -> &[CMat] {
        &self.factors
    }
}

pub fn cpd_eval(t: &CpdTensor, index: &[usize]) -> Result<ScaledComplex> {
    if index.len() != t.order() {
        return Err(Error::DimensionMismatch(format!(
            "index of order {} for a CPD of order {}",
            index.len(),
            t.order()
        )));
    }
    for (j, (&i, f)) in index.iter().zip(&t.factors).enumerate() {
        if i >= f.cols() {
            return Err(Error::InvalidArgument(format!(
                "index {i} out of range on leg {j} of dim {}",
                f.cols()
            )));
        }
    }
    Ok((0..t.rank())
        .map(|a| {
            index
                .iter()
                .zip(&t.factors)
                .map(|(&i, f)| ScaledComplex::from(f[(a, i)]))
                .product::<ScaledComplex>()
                * ScaledComplex::from(t.weights[a])
        })
        .sum())
}

pub fn cpd_to_dense(t: &CpdTensor, cap: usize) -> Result<DenseTensor> {
    let dims = t.dims();
    let size = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    match size {
        Some(s) if s <= cap => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "dense tensor entries",
                requested: dims.iter().map(|&d| d as u128).product(),
                cap: cap as u128,
            })
        }
    }
    let mut out = DenseTensor::zeros(dims.clone());
    let mut idx = vec![0; dims.len()];
    for k in 0..out.data.len() {
        unravel(k, &dims, &mut idx);
        out.data[k] = cpd_eval(t, &idx)?.to_complex();
    }
    Ok(out)
}

/// Rank-2 CPD of the order-`k` XOR tensor: `(1/2) sum_h prod_l (-1)^{h v_l}`.
pub fn xor_cpd(order: usize) -> Result<CpdTensor> {
    CpdTensor::new(
        vec![C64::new(0.5, 0.0); 2],
        vec![hadamard(); order],
    )
}

/// Rank-`k` CPD of the order-`k` W tensor (exactly one index set).
pub fn w_cpd(order: usize) -> Result<CpdTensor> {
    CpdTensor::unweighted(
        (0..order)
            .map(|l| CMat::from_fn(order, 2, |w, b| if b == usize::from(w == l) { ONE } else { ZERO }))
            .collect(),
    )
}

/// Rank-4 CPD of the order-4 tensor that is one when exactly two indices are set:
/// `F = (1/4) sum_m (-1)^m prod_l (1, i^m)`.
pub fn f_cpd() -> CpdTensor {
    let weights = (0..4).map(|m| C64::new(if m % 2 == 0 { 0.25 } else { -0.25 }, 0.0)).collect();
    let comp = CMat::from_fn(4, 2, |m, b| if b == 0 { ONE } else { C64::i().powi(m as i32) });
    CpdTensor::new(weights, vec![comp; 4]).expect("consistent rank")
}

/// Rank-3 CPD of the singlet tensor `S[b, vA, vB]`: `b = 0` gives all ones,
/// `b = 1` gives the singlet `|01> - |10>`.
pub fn s_cpd() -> CpdTensor {
    CpdTensor::unweighted(vec![
        CMat::real(&[&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0]]),
        CMat::real(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]),
        CMat::real(&[&[0.0, 1.0], &[-1.0, 0.0], &[1.0, 1.0]]),
    ])
    .expect("consistent rank")
}
