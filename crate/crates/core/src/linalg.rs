//! Exact graded linear algebra over the rationals.

use crate::q::{Lin, Vector, Q};
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElem {
    pub name: String,
    /// Homological degree.
    pub degree: i64,
    pub weight: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct GradedSpace {
    pub basis: Vec<BasisElem>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_degrees(items: &[(&str, i64)]) -> Self {
        let mut s = Self::new();
        for (n, d) in items {
            s.push(n, *d);
        }
        s
    }

    pub fn push(&mut self, name: &str, degree: i64) -> usize {
        self.basis.push(BasisElem {
            name: name.to_string(),
            degree,
            weight: None,
        });
        self.basis.len() - 1
    }

    pub fn push_weighted(&mut self, name: &str, degree: i64, weight: Option<u32>) -> usize {
        self.basis.push(BasisElem {
            name: name.to_string(),
            degree,
            weight,
        });
        self.basis.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn weight(&self, i: usize) -> Option<u32> {
        self.basis[i].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    /// Indices in degree `d`, in insertion order.
    pub fn in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.deg(i) == d).collect()
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        self.basis.iter().filter(|b| b.degree == d).count()
    }

    pub fn names_unique(&self) -> bool {
        let set: BTreeSet<&str> = self.basis.iter().map(|b| b.name.as_str()).collect();
        set.len() == self.basis.len()
    }

    /// Degree of a homogeneous vector, or `None` for zero or mixed vectors.
    pub fn vec_degree(&self, v: &Vector) -> Option<i64> {
        let degs: BTreeSet<i64> = v.iter().map(|(i, _)| self.deg(*i)).collect();
        if degs.len() == 1 {
            degs.into_iter().next()
        } else {
            None
        }
    }

    /// Every degree shifted by `k`.
    pub fn shifted(&self, k: i64) -> GradedSpace {
        GradedSpace {
            basis: self
                .basis
                .iter()
                .map(|b| BasisElem {
                    name: b.name.clone(),
                    degree: b.degree + k,
                    weight: b.weight,
                })
                .collect(),
        }
    }

    pub fn fmt_vec(&self, v: &Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in v.iter().enumerate() {
            let cs = crate::q::fmt_q(c);
            if k > 0 {
                s.push_str(if cs.starts_with('-') { " - " } else { " + " });
            } else if cs.starts_with('-') {
                s.push('-');
            }
            let a = cs.trim_start_matches('-');
            if a != "1" {
                s.push_str(a);
                s.push('*');
            }
            s.push_str(self.name(*i));
        }
        s
    }
}

/// A linear map stored column by column: `cols[j]` is the image of source basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub degree: i64,
    pub cols: Vec<Vector>,
}

impl SparseMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: i64) -> Self {
        SparseMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            cols: vec![Vector::zero(); source.dim()],
        }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let mut m = Self::zero(space, space, 0);
        for i in 0..space.dim() {
            m.cols[i] = Vector::basis(i);
        }
        m
    }

    pub fn from_fn(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i64,
        f: impl Fn(usize) -> Vector,
    ) -> Self {
        let mut m = Self::zero(source, target, degree);
        for i in 0..source.dim() {
            m.cols[i] = f(i);
        }
        m
    }

    pub fn set(&mut self, row: usize, col: usize, c: Q) {
        let cur = self.cols[col].get(&row);
        self.cols[col].add_term(row, c - cur);
    }

    pub fn entry(&self, row: usize, col: usize) -> Q {
        self.cols[col].get(&row)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        v.apply(|j| self.cols[*j].clone())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMap) -> SparseMap {
        SparseMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn plus(&self, other: &SparseMap) -> SparseMap {
        let mut r = self.clone();
        for (a, b) in r.cols.iter_mut().zip(&other.cols) {
            a.add(b);
        }
        r
    }

    pub fn minus(&self, other: &SparseMap) -> SparseMap {
        self.plus(&other.scaled(&-Q::one()))
    }

    pub fn scaled(&self, c: &Q) -> SparseMap {
        let mut r = self.clone();
        for col in r.cols.iter_mut() {
            *col = col.scaled(c);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// Every nonzero entry respects the degree shift.
    pub fn is_homogeneous(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, c)| {
            c.iter()
                .all(|(i, _)| self.target.deg(*i) == self.source.deg(j) + self.degree)
        })
    }

    pub fn transpose(&self) -> SparseMap {
        let mut t = SparseMap::zero(&self.target, &self.source, -self.degree);
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                t.cols[*i].add_term(j, v.clone());
            }
        }
        t
    }

    /// Restriction to a list of source indices and a list of target indices (block matrix).
    pub fn block(&self, src: &[usize], tgt: &[usize]) -> Vec<Vector> {
        let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        src.iter()
            .map(|&j| self.cols[j].map_keys(|i| pos.get(i).map(|&k| (k, Q::one()))))
            .collect()
    }
}

/// Incremental echelon basis with combination tracking.
///
/// Each stored row has a distinct leading key (its smallest key). `combo` expresses the stored
/// row in terms of the vectors passed to `insert`, numbered in insertion order.
#[derive(Clone, Debug)]
pub struct Reducer<K: Ord + Clone> {
    rows: BTreeMap<K, (Lin<K>, Vector)>,
    count: usize,
}

impl<K: Ord + Clone> Default for Reducer<K> {
    fn default() -> Self {
        Reducer {
            rows: BTreeMap::new(),
            count: 0,
        }
    }
}

impl<K: Ord + Clone> Reducer<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.count
    }

    /// Reduce `v`; returns the remainder and the combination `c` with `v = remainder + Σ c_i input_i`.
    pub fn reduce(&self, v: &Lin<K>) -> (Lin<K>, Vector) {
        let mut rem = v.clone();
        let mut combo = Vector::zero();
        let mut done: BTreeSet<K> = BTreeSet::new();
        loop {
            let key = rem
                .terms
                .keys()
                .find(|k| !done.contains(*k) && self.rows.contains_key(*k))
                .cloned();
            let Some(k) = key else { break };
            let (row, rc) = &self.rows[&k];
            let c = rem.get(&k) / row.get(&k);
            rem.add_scaled(row, &-c.clone());
            combo.add_scaled(rc, &c);
            done.insert(k);
        }
        (rem, combo)
    }

    pub fn contains(&self, v: &Lin<K>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Insert a vector; returns true if it was independent of the previous ones.
    pub fn insert(&mut self, v: &Lin<K>) -> bool {
        let id = self.count;
        self.count += 1;
        let (rem, combo) = self.reduce(v);
        if rem.is_zero() {
            return false;
        }
        let mut c = combo.neg();
        c.add_term(id, Q::one());
        let lead = rem.terms.keys().next().unwrap().clone();
        self.rows.insert(lead, (rem, c));
        true
    }

    /// Express `v` in terms of the inserted vectors, if it lies in their span.
    pub fn solve(&self, v: &Lin<K>) -> Option<Vector> {
        let (rem, combo) = self.reduce(v);
        if rem.is_zero() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn leading_keys(&self) -> Vec<K> {
        self.rows.keys().cloned().collect()
    }
}

/// Rank, kernel basis and image basis of a map.
#[derive(Clone, Debug)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel: Vec<Vector>,
    pub image: Vec<Vector>,
}

/// Column elimination in source order; pivots are the first nonzero row of each reduced column.
pub fn rank_kernel_cols(cols: &[Vector]) -> RankKernel {
    let mut red: Reducer<usize> = Reducer::new();
    let mut kernel = Vec::new();
    let mut image = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let (rem, combo) = red.reduce(c);
        if rem.is_zero() {
            let mut k = combo.neg();
            k.add_term(j, Q::one());
            kernel.push(k);
            red.count += 1;
        } else {
            red.insert(c);
            image.push(c.clone());
        }
    }
    RankKernel {
        rank: image.len(),
        kernel,
        image,
    }
}

pub fn rank_kernel(m: &SparseMap) -> RankKernel {
    rank_kernel_cols(&m.cols)
}

pub fn rank_of(cols: &[Vector]) -> usize {
    let mut red: Reducer<usize> = Reducer::new();
    cols.iter().filter(|c| red.insert(c)).count()
}

pub fn rank_of_lin<K: Ord + Clone>(cols: &[Lin<K>]) -> usize {
    let mut red: Reducer<K> = Reducer::new();
    cols.iter().filter(|c| red.insert(c)).count()
}

/// Basis of the span of the given vectors, in order of first appearance.
pub fn span_basis<K: Ord + Clone>(vs: &[Lin<K>]) -> Vec<Lin<K>> {
    let mut red: Reducer<K> = Reducer::new();
    vs.iter().filter(|v| red.insert(v)).cloned().collect()
}

/// Null space of a family of linear functionals on `Lin<K>` over a finite key set.
/// `rows[i]` pairs with a vector `x` as `Σ_k rows[i][k] x[k]`.
pub fn nullspace<K: Ord + Clone>(keys: &[K], rows: &[Lin<K>]) -> Vec<Lin<K>> {
    let pos: BTreeMap<&K, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let cols: Vec<Vector> = keys
        .iter()
        .map(|k| {
            let mut c = Vector::zero();
            for (r, row) in rows.iter().enumerate() {
                c.add_term(r, row.get(k));
            }
            c
        })
        .collect();
    let _ = pos;
    rank_kernel_cols(&cols)
        .kernel
        .into_iter()
        .map(|v| v.map_keys(|i| Some((keys[*i].clone(), Q::one()))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub space: GradedSpace,
    pub d: SparseMap,
}

impl Complex {
    pub fn new(space: GradedSpace, d: SparseMap) -> Self {
        Complex { space, d }
    }

    pub fn zero_differential(space: &GradedSpace) -> Self {
        Complex {
            space: space.clone(),
            d: SparseMap::zero(space, space, -1),
        }
    }

    pub fn d_squared_zero(&self) -> bool {
        self.d.compose(&self.d).is_zero()
    }

    /// Matrix columns of `d` restricted to degree `k` → `k − 1`.
    pub fn d_block(&self, k: i64) -> (Vec<usize>, Vec<usize>, Vec<Vector>) {
        let src = self.space.in_degree(k);
        let tgt = self.space.in_degree(k - 1);
        let cols = self.d.block(&src, &tgt);
        (src, tgt, cols)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space
            .basis
            .iter()
            .map(|b| if b.degree.rem_euclid(2) == 0 { 1 } else { -1 })
            .sum()
    }
}

/// Homology in a single degree: a graded space of the right dimension and cycle representatives
/// (expressed in the full basis of the complex).
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: i64,
    pub space: GradedSpace,
    pub representatives: Vec<Vector>,
}

pub fn homology(c: &Complex, degree: i64) -> Homology {
    let (src, _, cols) = c.d_block(degree);
    let rk = rank_kernel_cols(&cols);
    let cycles: Vec<Vector> = rk
        .kernel
        .iter()
        .map(|v| v.map_keys(|i| Some((src[*i], Q::one()))))
        .collect();
    let (_, _, up) = c.d_block(degree + 1);
    let tgt = src.clone();
    let mut red: Reducer<usize> = Reducer::new();
    for col in &up {
        red.insert(&col.map_keys(|i| Some((tgt[*i], Q::one()))));
    }
    let mut reps = Vec::new();
    for z in cycles {
        if red.insert(&z) {
            reps.push(z);
        }
    }
    let mut space = GradedSpace::new();
    for k in 0..reps.len() {
        space.push(&format!("h{}_{}", degree, k), degree);
    }
    Homology {
        degree,
        space,
        representatives: reps,
    }
}

/// Homology dimensions in every degree carried by the complex.
pub fn betti(c: &Complex) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for d in c.space.degrees() {
        let h = homology(c, d).representatives.len();
        out.insert(d, h);
    }
    out
}

/// A contraction onto a smaller complex: `f g = id`, `g f = id + d h + h d`, `f h = 0`, `h g = 0`, `h h = 0`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub big: Complex,
    pub small: Complex,
    pub f: SparseMap,
    pub g: SparseMap,
    pub h: SparseMap,
}

impl Contraction {
    /// Names of the side conditions that fail.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut bad = Vec::new();
        let idb = SparseMap::identity(&self.big.space);
        let ids = SparseMap::identity(&self.small.space);
        if self.f.compose(&self.g) != ids {
            bad.push("f g = id");
        }
        let dh = self
            .big
            .d
            .compose(&self.h)
            .plus(&self.h.compose(&self.big.d));
        if self.g.compose(&self.f) != idb.plus(&dh) {
            bad.push("g f = id + dh + hd");
        }
        if !self.f.compose(&self.h).is_zero() {
            bad.push("f h = 0");
        }
        if !self.h.compose(&self.g).is_zero() {
            bad.push("h g = 0");
        }
        if !self.h.compose(&self.h).is_zero() {
            bad.push("h h = 0");
        }
        if self.small.d.compose(&self.f) != self.f.compose(&self.big.d) {
            bad.push("f chain map");
        }
        if self.big.d.compose(&self.g) != self.g.compose(&self.small.d) {
            bad.push("g chain map");
        }
        bad
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// The trivial contraction of a complex onto itself.
    pub fn identity(c: &Complex) -> Contraction {
        Contraction {
            big: c.clone(),
            small: c.clone(),
            f: SparseMap::identity(&c.space),
            g: SparseMap::identity(&c.space),
            h: SparseMap::zero(&c.space, &c.space, 1),
        }
    }
}

/// Contraction of a complex onto its homology (with zero differential).
///
/// In each degree the chains split as boundaries ⊕ homology representatives ⊕ a complement of
/// the cycles, chosen by reducing in basis order, so the result depends only on the basis order.
pub fn build_contraction(c: &Complex) -> Contraction {
    let degs: Vec<i64> = c.space.degrees().into_iter().collect();
    let mut small = GradedSpace::new();
    let mut reps_all: Vec<Vector> = Vec::new();
    // complement of cycles per degree
    let mut comp: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    let mut reps: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    for &k in &degs {
        let (src, _, cols) = c.d_block(k);
        let rk = rank_kernel_cols(&cols);
        let mut red: Reducer<usize> = Reducer::new();
        for z in &rk.kernel {
            red.insert(&z.map_keys(|i| Some((src[*i], Q::one()))));
        }
        let mut cp = Vec::new();
        for &i in &src {
            let e = Vector::basis(i);
            if red.insert(&e) {
                cp.push(e);
            }
        }
        comp.insert(k, cp);
    }
    for &k in &degs {
        let h = homology(c, k);
        for (n, r) in h.representatives.iter().enumerate() {
            let single = r.len() == 1 && r.iter().all(|(_, c)| c.is_one());
            let name = match r.iter().next() {
                Some((i, _)) if single => c.space.name(*i).to_string(),
                _ => format!("h{}_{}", k, n),
            };
            small.push(&name, k);
            reps_all.push(r.clone());
        }
        reps.insert(k, h.representatives);
    }
    let mut f = SparseMap::zero(&c.space, &small, 0);
    let mut g = SparseMap::zero(&small, &c.space, 0);
    let mut h = SparseMap::zero(&c.space, &c.space, 1);
    for (j, r) in reps_all.iter().enumerate() {
        g.cols[j] = r.clone();
    }
    let mut small_offset = 0usize;
    for &k in &degs {
        let up: Vec<Vector> = comp.get(&(k + 1)).cloned().unwrap_or_default();
        let bnd: Vec<Vector> = up.iter().map(|v| c.d.apply(v)).collect();
        let hr = &reps[&k];
        let cp = &comp[&k];
        let mut red: Reducer<usize> = Reducer::new();
        for v in bnd.iter().chain(hr.iter()).chain(cp.iter()) {
            red.insert(v);
        }
        let nb = bnd.len();
        let nh = hr.len();
        for i in c.space.in_degree(k) {
            let coords = red
                .solve(&Vector::basis(i))
                .expect("basis spans the degree");
            let mut fv = Vector::zero();
            let mut hv = Vector::zero();
            for (p, a) in coords.iter() {
                if *p < nb {
                    hv.add_scaled(&up[*p], &-a.clone());
                } else if *p < nb + nh {
                    fv.add_term(small_offset + (*p - nb), a.clone());
                }
            }
            f.cols[i] = fv;
            h.cols[i] = hv;
        }
        small_offset += nh;
    }
    Contraction {
        big: c.clone(),
        small: Complex::zero_differential(&small),
        f,
        g,
        h,
    }
}

fn dual_name(n: &str) -> String {
    match n.strip_suffix('^') {
        Some(s) => s.to_string(),
        None => format!("{}^", n),
    }
}

/// Linear dual: degrees negated, differential transposed.
pub fn dualize(c: &Complex) -> Complex {
    let space = GradedSpace {
        basis: c
            .space
            .basis
            .iter()
            .map(|b| BasisElem {
                name: dual_name(&b.name),
                degree: -b.degree,
                weight: b.weight,
            })
            .collect(),
    };
    let t = c.d.transpose();
    let d = SparseMap {
        source: space.clone(),
        target: space.clone(),
        degree: -1,
        cols: t.cols,
    };
    Complex { space, d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    fn two_by_two(a: i64, b: i64, c: i64, d: i64) -> SparseMap {
        let s = GradedSpace::from_degrees(&[("e0", 0), ("e1", 0)]);
        let t = GradedSpace::from_degrees(&[("f0", 0), ("f1", 0)]);
        let mut m = SparseMap::zero(&s, &t, 0);
        m.set(0, 0, q(a));
        m.set(0, 1, q(b));
        m.set(1, 0, q(c));
        m.set(1, 1, q(d));
        m
    }

    #[test]
    fn rank_kernel_small() {
        let m = two_by_two(1, 2, 2, 4);
        let rk = rank_kernel(&m);
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel.len(), 1);
        let k = &rk.kernel[0];
        // proportional to (2, -1)
        assert_eq!(k.get(&0) * q(-1), k.get(&1) * q(2));
        assert!(m.apply(k).is_zero());
        let z = SparseMap::zero(
            &GradedSpace::from_degrees(&[("a", 0), ("b", 0), ("c", 0)]),
            &GradedSpace::new(),
            0,
        );
        assert_eq!(rank_kernel(&z).kernel.len(), 3);
        assert_eq!(rank_kernel(&two_by_two(1, 0, 0, 1)).rank, 2);
    }

    #[test]
    fn acyclic_two_term() {
        let s = GradedSpace::from_degrees(&[("a", 1), ("b", 0)]);
        let mut d = SparseMap::zero(&s, &s, -1);
        d.set(1, 0, q(1));
        let c = Complex::new(s, d);
        assert!(homology(&c, 0).representatives.is_empty());
        assert!(homology(&c, 1).representatives.is_empty());
        let k = build_contraction(&c);
        assert!(k.is_valid(), "{:?}", k.violations());
        assert_eq!(k.small.space.dim(), 0);
        assert_eq!(k.h.entry(0, 1), q(-1));
    }

    #[test]
    fn contraction_three_dim() {
        let s = GradedSpace::from_degrees(&[("a", 1), ("b", 0), ("c", 0)]);
        let mut d = SparseMap::zero(&s, &s, -1);
        d.set(1, 0, q(2));
        d.set(2, 0, q(3));
        let c = Complex::new(s, d);
        let k = build_contraction(&c);
        assert!(k.is_valid(), "{:?}", k.violations());
        assert_eq!(k.small.space.dim(), 1);
    }

    #[test]
    fn dual_involution() {
        let s = GradedSpace::from_degrees(&[("a", 2), ("b", 1)]);
        let mut d = SparseMap::zero(&s, &s, -1);
        d.set(1, 0, q(5));
        let c = Complex::new(s, d);
        let dd = dualize(&c);
        assert_eq!(dd.space.deg(0), -2);
        assert_eq!(dd.d.entry(0, 1), q(5));
        assert_eq!(dualize(&dd), c);
    }
}
