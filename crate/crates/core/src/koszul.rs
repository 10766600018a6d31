//! Weight gradings, quadratic presentations, Koszul duals and Koszulness certificates.
//!
//! A bar word `s a_1 ⊗ … ⊗ s a_k` sits in row `r = Σ (w(a_i) − 1)` and suspended degree
//! `D = Σ |s a_i|`. When `m_n` has weight `2 − n` (and `d` weight `+1`) the bar differential
//! maps row `r` to row `r + 1` and lowers `D` by one, so each block `(r, D)` is finite once the
//! suspended degrees have one sign. Koszul means every row `r ≥ 1` is exact.
//!
//! For C∞ inputs the full bar construction is used rather than the Harrison quotient: in
//! characteristic zero the Harrison complex is a direct summand (Eulerian idempotents) and the
//! bar homology is its symmetric algebra, so the two are exact in the same rows.

use crate::dictionary::{dual_name, fmt_combination, quillen_from_cinfty, sullivan_from_linfty};
use crate::free::{bracket, lie_basis, sym_canonical, LieCoords, LieTree, Tensor, Word};
use crate::infinity::{Flavor, InfinityStructure};
use crate::linalg::{
    nullspace, rank_kernel_cols, rank_of, rank_of_lin, span_basis, Complex, GradedSpace, Reducer,
    SparseMap,
};
use crate::poly::{Mono, Poly, PolyRing, SullivanModel};
use crate::q::{sign, Lin, Vector, Q};
use crate::Error;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    Comm,
    Lie,
}

impl PresentationKind {
    pub fn name(self) -> &'static str {
        match self {
            PresentationKind::Comm => "comm",
            PresentationKind::Lie => "lie",
        }
    }
}

/// Relations in `ΛV` (polynomials) or in `𝕃V ⊂ T(V)` (tensors).
#[derive(Clone, Debug, PartialEq)]
pub enum Relations {
    Comm(Vec<Poly>),
    Lie(Vec<Tensor>),
}

impl Relations {
    pub fn len(&self) -> usize {
        match self {
            Relations::Comm(r) => r.len(),
            Relations::Lie(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Generators with weights and homogeneous relations of a graded commutative or Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPresentation {
    pub gens: GradedSpace,
    pub relations: Relations,
}

impl WeightedPresentation {
    /// Missing generator weights default to 1. Zero relations are dropped.
    pub fn new(mut gens: GradedSpace, relations: Relations) -> Result<Self, Error> {
        for b in &mut gens.basis {
            match b.weight {
                None => b.weight = Some(1),
                Some(0) => return Err(Error::Domain(format!("generator {} has weight 0", b.name))),
                _ => {}
            }
        }
        if !gens.names_unique() {
            return Err(Error::Domain("generator names must be unique".into()));
        }
        let relations = match relations {
            Relations::Comm(r) => Relations::Comm(r.into_iter().filter(|p| !p.is_zero()).collect()),
            Relations::Lie(r) => Relations::Lie(r.into_iter().filter(|t| !t.is_zero()).collect()),
        };
        let p = WeightedPresentation { gens, relations };
        for k in 0..p.relations.len() {
            p.relation_weight(k)?;
        }
        if let Relations::Lie(rels) = &p.relations {
            let mut free = crate::dictionary::FreeLie::new(&p.gens);
            for t in rels {
                if !free.is_lie(t) {
                    return Err(Error::Domain(format!(
                        "relation {} is not a Lie element",
                        p.fmt_tensor(t)
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn kind(&self) -> PresentationKind {
        match self.relations {
            Relations::Comm(_) => PresentationKind::Comm,
            Relations::Lie(_) => PresentationKind::Lie,
        }
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.gens.weight(i).unwrap_or(1)
    }

    pub fn ring(&self) -> PolyRing {
        PolyRing::new(self.gens.clone())
    }

    fn mono_weight(&self, m: &Mono) -> u32 {
        m.iter().enumerate().map(|(i, &e)| e * self.weight(i)).sum()
    }

    fn word_weight(&self, w: &[usize]) -> u32 {
        w.iter().map(|&i| self.weight(i)).sum()
    }

    /// Weight and homological degree of relation `k`; rejects inhomogeneous relations.
    pub fn relation_weight(&self, k: usize) -> Result<u32, Error> {
        let (wts, degs): (Vec<u32>, Vec<i64>) = match &self.relations {
            Relations::Comm(r) => {
                let ring = self.ring();
                r[k].iter()
                    .map(|(m, _)| (self.mono_weight(m), ring.mono_degree(m)))
                    .unzip()
            }
            Relations::Lie(r) => r[k]
                .iter()
                .map(|(w, _)| {
                    (
                        self.word_weight(w),
                        w.iter().map(|&i| self.gens.deg(i)).sum::<i64>(),
                    )
                })
                .unzip(),
        };
        let first = (wts[0], degs[0]);
        if wts.iter().zip(&degs).any(|(w, d)| (*w, *d) != first) {
            return Err(Error::Domain(format!(
                "relation {} is not homogeneous",
                self.fmt_relation(k)
            )));
        }
        Ok(first.0)
    }

    pub fn is_quadratic(&self) -> bool {
        (0..self.gens.dim()).all(|i| self.weight(i) == 1)
            && (0..self.relations.len()).all(|k| self.relation_weight(k).ok() == Some(2))
    }

    /// The relations of weight 2.
    pub fn quadratic_part(&self) -> Relations {
        let keep: Vec<usize> = (0..self.relations.len())
            .filter(|&k| self.relation_weight(k).ok() == Some(2))
            .collect();
        match &self.relations {
            Relations::Comm(r) => Relations::Comm(keep.iter().map(|&k| r[k].clone()).collect()),
            Relations::Lie(r) => Relations::Lie(keep.iter().map(|&k| r[k].clone()).collect()),
        }
    }

    pub fn fmt_tensor(&self, t: &Tensor) -> String {
        fmt_lie(&self.gens, t)
    }

    pub fn fmt_relation(&self, k: usize) -> String {
        match &self.relations {
            Relations::Comm(r) => self.ring().fmt_poly(&r[k]),
            Relations::Lie(r) => self.fmt_tensor(&r[k]),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let what = match self.kind() {
            PresentationKind::Comm => "graded commutative algebra",
            PresentationKind::Lie => "graded Lie algebra",
        };
        s.push_str(&format!(
            "{} on {} generators, {} relations\n",
            what,
            self.gens.dim(),
            self.relations.len()
        ));
        for (i, b) in self.gens.basis.iter().enumerate() {
            s.push_str(&format!(
                "  generator {} deg {} weight {}\n",
                b.name,
                b.degree,
                self.weight(i)
            ));
        }
        for k in 0..self.relations.len() {
            s.push_str(&format!("  relation {}\n", self.fmt_relation(k)));
        }
        s
    }

    /// The algebra presented, truncated above `max_weight`, as a strict structure on a basis of
    /// normal forms (monomials or super-Lyndon brackets).
    pub fn algebra(&self, max_weight: usize) -> Result<InfinityStructure, Error> {
        match &self.relations {
            Relations::Comm(r) => self.comm_quotient(r, max_weight as u32),
            Relations::Lie(r) => self.lie_quotient(r, max_weight),
        }
    }

    fn comm_quotient(&self, rels: &[Poly], n: u32) -> Result<InfinityStructure, Error> {
        let ring = self.ring();
        let mut monos = monomials_by_weight(&ring, &|i| self.weight(i), n);
        monos.sort_by_key(|m| (self.mono_weight(m), std::cmp::Reverse(m.clone())));
        let mut ideal: Reducer<Mono> = Reducer::new();
        for (k, r) in rels.iter().enumerate() {
            let wr = self.relation_weight(k)?;
            if wr > n {
                continue;
            }
            ideal.insert(r);
            for m in &monos {
                if self.mono_weight(m) + wr <= n {
                    ideal.insert(&ring.mul(&Poly::basis(m.clone()), r));
                }
            }
        }
        let lead: std::collections::BTreeSet<Mono> = ideal.leading_keys().into_iter().collect();
        let basis: Vec<Mono> = monos.into_iter().filter(|m| !lead.contains(m)).collect();
        let index: BTreeMap<Mono, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut space = GradedSpace::new();
        for m in &basis {
            space.push_weighted(
                &ring.fmt_mono(m),
                ring.mono_degree(m),
                Some(self.mono_weight(m)),
            );
        }
        let mut s = InfinityStructure::new(Flavor::Comm, space);
        for (a, ma) in basis.iter().enumerate() {
            for (b, mb) in basis.iter().enumerate() {
                if self.mono_weight(ma) + self.mono_weight(mb) > n {
                    continue;
                }
                let p = ring.mul(&Poly::basis(ma.clone()), &Poly::basis(mb.clone()));
                let nf = normal_form(&ideal, &p);
                let v = nf.map_keys(|m| Some((index[m], Q::one())));
                s.set_raw(2, vec![a, b], v);
            }
        }
        s.certify_declared(2);
        Ok(s)
    }

    fn lie_quotient(&self, rels: &[Tensor], n: usize) -> Result<InfinityStructure, Error> {
        if (0..self.gens.dim()).any(|i| self.weight(i) != 1) {
            return Err(Error::Domain(
                "Lie quotients need generators of weight 1".into(),
            ));
        }
        let deg = |i: usize| self.gens.deg(i);
        let coords: Vec<LieCoords> = (1..=n).map(|k| LieCoords::new(&self.gens, k)).collect();
        let mut ideal: Vec<Vec<Tensor>> = vec![vec![]; n + 1];
        let mut reducers: Vec<Reducer<usize>> = vec![Reducer::new(); n + 1];
        for k in 1..=n {
            let mut span: Vec<Tensor> = rels
                .iter()
                .filter(|t| t.iter().next().unwrap().0.len() == k)
                .cloned()
                .collect();
            if k > 1 {
                for t in &ideal[k - 1] {
                    for g in 0..self.gens.dim() {
                        span.push(bracket(&Tensor::basis(vec![g]), t, &deg));
                    }
                }
            }
            ideal[k] = span_basis(&span);
            for t in &ideal[k] {
                reducers[k].insert(&coords[k - 1].coords(t).expect("ideal elements are Lie"));
            }
        }
        let mut basis: Vec<(usize, usize)> = Vec::new();
        let mut space = GradedSpace::new();
        for k in 1..=n {
            let lead: std::collections::BTreeSet<usize> =
                reducers[k].leading_keys().into_iter().collect();
            for (i, t) in coords[k - 1].basis.iter().enumerate() {
                if !lead.contains(&i) {
                    basis.push((k, i));
                    let name = t.render(&|g| self.gens.name(g).to_string());
                    space.push_weighted(&name, t.degree(&deg), Some(k as u32));
                }
            }
        }
        let index: BTreeMap<(usize, usize), usize> =
            basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut s = InfinityStructure::new(Flavor::Lie, space);
        for (a, &(ka, ia)) in basis.iter().enumerate() {
            for (b, &(kb, ib)) in basis.iter().enumerate() {
                let k = ka + kb;
                if k > n {
                    continue;
                }
                let ta = coords[ka - 1].basis[ia].to_tensor(&deg);
                let tb = coords[kb - 1].basis[ib].to_tensor(&deg);
                let c = coords[k - 1]
                    .coords(&bracket(&ta, &tb, &deg))
                    .expect("brackets are Lie");
                let nf = normal_form(&reducers[k], &c);
                s.set_raw(
                    2,
                    vec![a, b],
                    nf.map_keys(|i| Some((index[&(k, *i)], Q::one()))),
                );
            }
        }
        s.certify_declared(2);
        Ok(s)
    }
}

fn normal_form<K: Ord + Clone>(red: &Reducer<K>, v: &Lin<K>) -> Lin<K> {
    let mut cur = v.clone();
    loop {
        let (rem, _) = red.reduce(&cur);
        if rem == cur {
            return rem;
        }
        cur = rem;
    }
}

/// Nonconstant monomials of total weight at most `n`.
fn monomials_by_weight(ring: &PolyRing, w: &dyn Fn(usize) -> u32, n: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = ring.one();
    fn rec(
        ring: &PolyRing,
        w: &dyn Fn(usize) -> u32,
        i: usize,
        budget: u32,
        cur: &mut Mono,
        out: &mut Vec<Mono>,
    ) {
        if i == ring.n() {
            if PolyRing::mono_len(cur) > 0 {
                out.push(cur.clone());
            }
            return;
        }
        let maxe = if ring.odd(i) { 1 } else { budget / w(i) };
        for e in 0..=maxe.min(budget / w(i)) {
            cur[i] = e;
            rec(ring, w, i + 1, budget - e * w(i), cur, out);
        }
        cur[i] = 0;
    }
    rec(ring, w, 0, n, &mut cur, &mut out);
    out
}

/// A tensor that is a Lie element, written in super-Lyndon brackets where possible.
pub fn fmt_lie(gens: &GradedSpace, t: &Tensor) -> String {
    let mut by_len: BTreeMap<usize, Tensor> = BTreeMap::new();
    for (u, c) in t.iter() {
        by_len
            .entry(u.len())
            .or_default()
            .add_term(u.clone(), c.clone());
    }
    let name = |g: usize| gens.name(g).to_string();
    let mut items = Vec::new();
    for (k, part) in by_len {
        let lc = LieCoords::new(gens, k);
        match lc.coords(&part) {
            Some(v) => {
                for (i, c) in v.iter() {
                    items.push((lc.basis[*i].render(&name), c.clone()));
                }
            }
            None => {
                for (u, c) in part.iter() {
                    let names: Vec<String> = u.iter().map(|&g| name(g)).collect();
                    items.push((names.join("⊗"), c.clone()));
                }
            }
        }
    }
    fmt_combination(&items)
}

/// Basis of `Λ²V`: products `x_i x_j` with `i < j` and squares of even generators.
pub fn lambda2_basis(ring: &PolyRing) -> Vec<Mono> {
    let mut out = Vec::new();
    for i in 0..ring.n() {
        for j in i..ring.n() {
            if i == j && ring.odd(i) {
                continue;
            }
            let mut m = ring.one();
            m[i] += 1;
            m[j] += 1;
            out.push(m);
        }
    }
    out
}

/// `⟨x y, α ⊗ β⟩ = (−1)^{|y||α| + |x| + |α|} ⟨x, α⟩⟨y, β⟩` for the monomial `x y` (generators in
/// index order) and a word of dual generators. Graded antisymmetrization gives
/// `⟨x ∧ y, [α, β]⟩ = (−1)^{|y||α|+|x|+|α|}⟨x,α⟩⟨y,β⟩ − (−1)^{|α||β|+|y||β|+|x|+|β|}⟨x,β⟩⟨y,α⟩`.
fn pair_mono_word(v: &GradedSpace, w: &GradedSpace, m: &Mono, word: &[usize]) -> Q {
    let l = PolyRing::letters(m);
    if l.len() != 2 || word.len() != 2 || l[0] != word[0] || l[1] != word[1] {
        return Q::zero();
    }
    let (x, y, a) = (v.deg(l[0]), v.deg(l[1]), w.deg(word[0]));
    sign((y * a + x + a).rem_euclid(2) == 1)
}

/// The weight-2 pairing `Λ²V ⊗ 𝕃²W → ℚ` of a quadratic polynomial with a Lie element.
pub fn pairing(v: &GradedSpace, w: &GradedSpace, p: &Poly, t: &Tensor) -> Q {
    let mut acc = Q::zero();
    for (m, c) in p.iter() {
        for (u, e) in t.iter() {
            let s = pair_mono_word(v, w, m, u);
            if !s.is_zero() {
                acc += c * e * s;
            }
        }
    }
    acc
}

fn dual_space(gens: &GradedSpace) -> GradedSpace {
    let mut out = GradedSpace::new();
    for b in &gens.basis {
        out.push_weighted(&dual_name(&b.name), -b.degree - 1, Some(1));
    }
    out
}

/// The Koszul dual of a quadratic presentation: generators `(sV)^∨`, relations the orthogonal
/// complement of the relations under the weight-2 pairing.
pub fn koszul_dual(p: &WeightedPresentation) -> Result<WeightedPresentation, Error> {
    if !p.is_quadratic() {
        return Err(Error::Domain(
            "Koszul dual needs a quadratic presentation (generators of weight 1, relations of weight 2)".into(),
        ));
    }
    let dual = dual_space(&p.gens);
    let (v, w) = match p.kind() {
        PresentationKind::Comm => (p.gens.clone(), dual),
        PresentationKind::Lie => (dual, p.gens.clone()),
    };
    let ring = PolyRing::new(v.clone());
    let monos = lambda2_basis(&ring);
    let wdeg = |i: usize| w.deg(i);
    let tens: Vec<Tensor> = lie_basis(&w, 2)
        .iter()
        .map(|t| t.to_tensor(&wdeg))
        .collect();
    if monos.len() != tens.len() {
        return Err(Error::Domain(format!(
            "pairing is degenerate: dim Λ²V = {} but dim 𝕃²W = {}",
            monos.len(),
            tens.len()
        )));
    }
    let cols: Vec<Vector> = tens
        .iter()
        .map(|t| {
            let mut c = Vector::zero();
            for (i, m) in monos.iter().enumerate() {
                c.add_term(i, pairing(&v, &w, &Poly::basis(m.clone()), t));
            }
            c
        })
        .collect();
    if rank_of(&cols) != monos.len() {
        return Err(Error::Domain("pairing Λ²V ⊗ 𝕃²W → ℚ is degenerate".into()));
    }
    match &p.relations {
        Relations::Comm(rels) => {
            let keys: Vec<usize> = (0..tens.len()).collect();
            let rows: Vec<Vector> = rels
                .iter()
                .map(|r| {
                    let mut row = Vector::zero();
                    for (k, t) in tens.iter().enumerate() {
                        row.add_term(k, pairing(&v, &w, r, t));
                    }
                    row
                })
                .collect();
            let s: Vec<Tensor> = nullspace(&keys, &rows)
                .iter()
                .map(|c| {
                    let mut t = Tensor::zero();
                    for (k, e) in c.iter() {
                        t.add_scaled(&tens[*k], e);
                    }
                    t
                })
                .collect();
            WeightedPresentation::new(w, Relations::Lie(s))
        }
        Relations::Lie(rels) => {
            let rows: Vec<Lin<Mono>> = rels
                .iter()
                .map(|t| {
                    let mut row = Lin::zero();
                    for m in &monos {
                        row.add_term(m.clone(), pairing(&v, &w, &Poly::basis(m.clone()), t));
                    }
                    row
                })
                .collect();
            WeightedPresentation::new(v, Relations::Comm(nullspace(&monos, &rows)))
        }
    }
}

/// Presentations agree after identifying generators in order: same kind, degrees and weights,
/// and the same span of relations.
pub fn same_presentation(a: &WeightedPresentation, b: &WeightedPresentation) -> bool {
    if a.kind() != b.kind() || a.gens.dim() != b.gens.dim() {
        return false;
    }
    for i in 0..a.gens.dim() {
        if a.gens.deg(i) != b.gens.deg(i) || a.weight(i) != b.weight(i) {
            return false;
        }
    }
    fn same_span<K: Ord + Clone>(x: &[Lin<K>], y: &[Lin<K>]) -> bool {
        let rx = rank_of_lin(x);
        let mut all = x.to_vec();
        all.extend_from_slice(y);
        rx == rank_of_lin(y) && rx == rank_of_lin(&all)
    }
    match (&a.relations, &b.relations) {
        (Relations::Comm(x), Relations::Comm(y)) => same_span(x, y),
        (Relations::Lie(x), Relations::Lie(y)) => same_span(x, y),
        _ => false,
    }
}

fn pair_name(n: usize, i: usize, j: usize, prefix: &str) -> String {
    if n < 10 {
        format!("{}{}{}", prefix, i, j)
    } else {
        format!("{}{}_{}", prefix, i, j)
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push((i, j));
        }
    }
    out
}

/// Cohomology of the configuration space of `n` points in `ℝ^m`: generators `a_ij` of
/// cohomological degree `m − 1` with `a_ji = (−1)^m a_ij`, relations `a_ij²` and
/// `a_ij a_jk + a_jk a_ki + a_ki a_ij`.
pub fn arnold(n: usize, m: i64) -> WeightedPresentation {
    let ps = pairs(n);
    let mut gens = GradedSpace::new();
    for &(i, j) in &ps {
        gens.push_weighted(&pair_name(n, i, j, "a"), -(m - 1), Some(1));
    }
    let ring = PolyRing::new(gens.clone());
    let idx: BTreeMap<(usize, usize), usize> =
        ps.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let a = |i: usize, j: usize| -> Poly {
        if i < j {
            ring.gen(idx[&(i, j)])
        } else {
            ring.gen(idx[&(j, i)]).scaled(&sign(m % 2 != 0))
        }
    };
    let mut rels = Vec::new();
    for &(i, j) in &ps {
        rels.push(ring.mul(&a(i, j), &a(i, j)));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let mut r = ring.mul(&a(i, j), &a(j, k));
                r.add(&ring.mul(&a(j, k), &a(k, i)));
                r.add(&ring.mul(&a(k, i), &a(i, j)));
                rels.push(r);
            }
        }
    }
    WeightedPresentation::new(gens, Relations::Comm(rels))
        .expect("Arnold relations are homogeneous")
}

/// The Drinfeld–Kohno Lie algebra: generators `t_ij` of degree `m − 2` with
/// `t_ji = (−1)^m t_ij`, relations `[t_ij, t_kl]` for disjoint pairs and `[t_ij, t_ik + t_jk]`.
pub fn drinfeld_kohno(n: usize, m: i64) -> WeightedPresentation {
    let ps = pairs(n);
    let mut gens = GradedSpace::new();
    for &(i, j) in &ps {
        gens.push_weighted(&pair_name(n, i, j, "t"), m - 2, Some(1));
    }
    let idx: BTreeMap<(usize, usize), usize> =
        ps.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let t = |i: usize, j: usize| -> Tensor {
        if i < j {
            Tensor::basis(vec![idx[&(i, j)]])
        } else {
            Tensor::single(vec![idx[&(j, i)]], sign(m % 2 != 0))
        }
    };
    let deg = |_: usize| m - 2;
    let mut rels = Vec::new();
    for (a, &(i, j)) in ps.iter().enumerate() {
        for &(k, l) in &ps[a + 1..] {
            if i != k && i != l && j != k && j != l {
                rels.push(bracket(&t(i, j), &t(k, l), &deg));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let mut s = t(i, k);
                s.add(&t(j, k));
                rels.push(bracket(&t(i, j), &s, &deg));
            }
        }
    }
    let rels = span_basis(&rels);
    WeightedPresentation::new(gens, Relations::Lie(rels))
        .expect("Drinfeld–Kohno relations are homogeneous")
}

/// Weights of the basis: explicit, stored on the space, or `|deg| / k` for the smallest
/// nonzero `|deg| = k` when every degree is a multiple of it.
pub fn resolve_weights(s: &InfinityStructure, weights: Option<&[u32]>) -> Result<Vec<u32>, Error> {
    if let Some(w) = weights {
        if w.len() != s.dim() {
            return Err(Error::Usage(format!(
                "{} weights given for {} basis elements",
                w.len(),
                s.dim()
            )));
        }
        if w.contains(&0) {
            return Err(Error::Usage("weights must be positive".into()));
        }
        return Ok(w.to_vec());
    }
    if let Some(w) = (0..s.dim())
        .map(|i| s.space.weight(i))
        .collect::<Option<Vec<u32>>>()
    {
        if !w.contains(&0) {
            return Ok(w);
        }
    }
    let degs: Vec<i64> = (0..s.dim()).map(|i| s.deg(i).abs()).collect();
    let k = degs.iter().cloned().filter(|&d| d > 0).min().unwrap_or(0);
    if k == 0 || degs.iter().any(|&d| d == 0 || d % k != 0) {
        return Err(Error::Domain(
            "cannot infer weights from degrees; give them explicitly".into(),
        ));
    }
    Ok(degs.iter().map(|&d| (d / k) as u32).collect())
}

/// Rejects operations that are not of weight `2 − n` (and `d` not of weight `+1`).
pub fn check_homogeneous(s: &InfinityStructure, w: &[u32]) -> Result<(), Error> {
    let name = |i: usize| s.space.name(i).to_string();
    for i in 0..s.dim() {
        for (j, _) in s.d.cols[i].iter() {
            if w[*j] != w[i] + 1 {
                return Err(Error::Domain(format!(
                    "d({}) has component {} of weight {}; expected {}",
                    name(i),
                    name(*j),
                    w[*j],
                    w[i] + 1
                )));
            }
        }
    }
    let letter = if s.flavor == Flavor::Lie { "l" } else { "m" };
    for (n, t) in &s.ops {
        for (word, v) in t {
            let expect = word.iter().map(|&i| w[i] as i64).sum::<i64>() + 2 - *n as i64;
            for (j, _) in v.iter() {
                if w[*j] as i64 != expect {
                    let args: Vec<String> = word.iter().map(|&i| name(i)).collect();
                    return Err(Error::Domain(format!(
                        "{}{}({}) has component {} of weight {}; expected {}",
                        letter,
                        n,
                        args.join(","),
                        name(*j),
                        w[*j],
                        expect
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct BlockKey {
    row: i64,
    degree: i64,
    total: i64,
}

struct BarWords<'a> {
    s: &'a InfinityStructure,
    w: Vec<i64>,
    sd: Vec<i64>,
}

impl<'a> BarWords<'a> {
    fn new(s: &'a InfinityStructure, weights: &[u32]) -> Result<Self, Error> {
        let sd: Vec<i64> = (0..s.dim()).map(|i| s.sdeg(i)).collect();
        if let Some(i) = (0..s.dim()).find(|&i| sd[i] == 0) {
            return Err(Error::Domain(format!(
                "{} has suspended degree 0; the bar blocks are infinite",
                s.space.name(i)
            )));
        }
        if sd.iter().any(|&d| d > 0) && sd.iter().any(|&d| d < 0) {
            return Err(Error::Domain(
                "suspended degrees of both signs; the bar blocks are infinite".into(),
            ));
        }
        Ok(BarWords {
            s,
            w: weights.iter().map(|&x| x as i64).collect(),
            sd,
        })
    }

    fn key(&self, word: &[usize], split_total: bool) -> BlockKey {
        let total: i64 = word.iter().map(|&i| self.w[i]).sum();
        BlockKey {
            row: total - word.len() as i64,
            degree: word.iter().map(|&i| self.sd[i]).sum(),
            total: if split_total { total } else { 0 },
        }
    }

    /// All words accepted by `ok(len, row, degree, total)`, which must be monotone along prefixes.
    fn enumerate(&self, ok: &dyn Fn(usize, i64, i64, i64) -> bool) -> Vec<Word> {
        let symmetric = self.s.flavor == Flavor::Lie;
        let mut out = Vec::new();
        let mut cur: Word = Vec::new();
        self.rec(symmetric, ok, &mut cur, 0, 0, 0, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        symmetric: bool,
        ok: &dyn Fn(usize, i64, i64, i64) -> bool,
        cur: &mut Word,
        row: i64,
        deg: i64,
        total: i64,
        out: &mut Vec<Word>,
    ) {
        let start = if symmetric {
            cur.last().cloned().unwrap_or(0)
        } else {
            0
        };
        for i in start..self.s.dim() {
            if symmetric && cur.last() == Some(&i) && self.sd[i].rem_euclid(2) == 1 {
                continue;
            }
            let (r, d, t) = (row + self.w[i] - 1, deg + self.sd[i], total + self.w[i]);
            if !ok(cur.len() + 1, r, d, t) {
                continue;
            }
            cur.push(i);
            out.push(cur.clone());
            self.rec(symmetric, ok, cur, r, d, t, out);
            cur.pop();
        }
    }

    fn label(&self, word: &[usize]) -> String {
        let names: Vec<&str> = word.iter().map(|&i| self.s.space.name(i)).collect();
        if self.s.flavor == Flavor::Lie {
            format!("({})", names.join("."))
        } else {
            format!("[{}]", names.join("|"))
        }
    }

    fn apply(&self, word: &[usize]) -> Lin<Word> {
        let img = self.s.coderivation_apply(word, true);
        if self.s.flavor == Flavor::Lie {
            img.map_keys(|u| sym_canonical(u, &|i| self.sd[i]).map(|(c, sg)| (c, sign(sg < 0))))
        } else {
            img
        }
    }
}

/// Rank data of one bar block `(row, degree)`, split by total weight for strict structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRank {
    pub row: i64,
    pub degree: i64,
    pub total_weight: Option<i64>,
    pub dim: usize,
    /// Rank of the differential into the block.
    pub rank_in: usize,
    /// Rank of the differential out of the block.
    pub rank_out: usize,
}

impl BlockRank {
    pub fn homology(&self) -> usize {
        self.dim - self.rank_in - self.rank_out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum KoszulVerdict {
    KoszulUpTo(usize),
    NotKoszul {
        row: usize,
        degree: i64,
        class: Lin<Word>,
        rendered: String,
    },
}

#[derive(Clone, Debug)]
pub struct KoszulCertificate {
    pub flavor: Flavor,
    pub weights: Vec<u32>,
    pub verified_through_weight: usize,
    /// Bound on `|D|` for structures with higher operations; `None` when blocks are split by
    /// total weight, which is then bounded by `verified_through_weight`.
    pub window: Option<i64>,
    pub blocks: Vec<BlockRank>,
    pub verdict: KoszulVerdict,
}

impl KoszulCertificate {
    pub fn is_koszul(&self) -> bool {
        matches!(self.verdict, KoszulVerdict::KoszulUpTo(_))
    }

    /// The verdict agrees with the stored ranks.
    pub fn reproduce(&self) -> bool {
        let bad = self.blocks.iter().find(|b| b.row >= 1 && b.homology() > 0);
        match (&self.verdict, bad) {
            (KoszulVerdict::KoszulUpTo(_), None) => true,
            (KoszulVerdict::NotKoszul { row, degree, .. }, Some(b)) => {
                b.row == *row as i64 && b.degree == *degree
            }
            _ => false,
        }
    }

    pub fn render(&self) -> String {
        let bound = match self.window {
            Some(w) => format!("rows ≤ {} with |D| ≤ {}", self.verified_through_weight, w),
            None => format!("total weight ≤ {}", self.verified_through_weight),
        };
        match &self.verdict {
            KoszulVerdict::KoszulUpTo(n) => {
                format!(
                    "Koszul up to weight {} ({} blocks checked, {})",
                    n,
                    self.blocks.len(),
                    bound
                )
            }
            KoszulVerdict::NotKoszul {
                row,
                degree,
                rendered,
                ..
            } => format!(
                "not Koszul: homology in row {} at bar degree {}: {} (exact through {})",
                row, degree, rendered, bound
            ),
        }
    }
}

/// Certify exactness of the bar rows `1..=max_weight`. Structures with only `m_2` (and `d = 0`)
/// are split by total weight, which bounds everything; otherwise blocks with `|D| ≤ window`.
pub fn koszul_check(
    s: &InfinityStructure,
    weights: Option<&[u32]>,
    max_weight: usize,
    window: i64,
) -> Result<KoszulCertificate, Error> {
    let w = resolve_weights(s, weights)?;
    check_homogeneous(s, &w)?;
    let bw = BarWords::new(s, &w)?;
    let strict = s.is_minimal() && s.top_arity() <= 2;
    let n = max_weight as i64;
    let ok = |_: usize, r: i64, d: i64, t: i64| {
        if strict {
            t <= n
        } else {
            r <= n + 1 && d.abs() <= window + 1
        }
    };
    let mut blocks: BTreeMap<BlockKey, Vec<Word>> = BTreeMap::new();
    for word in bw.enumerate(&ok) {
        blocks.entry(bw.key(&word, strict)).or_default().push(word);
    }
    let empty = Vec::new();
    let mut ranks = Vec::new();
    for (key, words) in &blocks {
        let checked = key.row >= 1
            && if strict {
                key.total <= n
            } else {
                key.row <= n && key.degree.abs() <= window
            };
        if !checked {
            continue;
        }
        let next = blocks
            .get(&BlockKey {
                row: key.row + 1,
                degree: key.degree - 1,
                total: key.total,
            })
            .unwrap_or(&empty);
        let prev = blocks
            .get(&BlockKey {
                row: key.row - 1,
                degree: key.degree + 1,
                total: key.total,
            })
            .unwrap_or(&empty);
        let next_index: BTreeMap<&Word, usize> =
            next.iter().enumerate().map(|(i, u)| (u, i)).collect();
        let cols: Vec<Vector> = words
            .iter()
            .map(|u| {
                bw.apply(u).map_keys(|x| {
                    let k = next_index
                        .get(x)
                        .unwrap_or_else(|| panic!("bar differential leaves its block at {:?}", x));
                    Some((*k, Q::one()))
                })
            })
            .collect();
        let rk = rank_kernel_cols(&cols);
        let mut image: Reducer<Word> = Reducer::new();
        for u in prev {
            image.insert(&bw.apply(u));
        }
        let b = BlockRank {
            row: key.row,
            degree: key.degree,
            total_weight: strict.then_some(key.total),
            dim: words.len(),
            rank_in: image.rank(),
            rank_out: rk.rank,
        };
        let hom = b.homology();
        ranks.push(b);
        if hom > 0 {
            let class = rk
                .kernel
                .iter()
                .map(|z| z.map_keys(|i| Some((words[*i].clone(), Q::one()))))
                .find(|z| !image.contains(z))
                .expect("homology has a representative");
            let items: Vec<(String, Q)> = class
                .iter()
                .map(|(u, c)| (bw.label(u), c.clone()))
                .collect();
            return Ok(KoszulCertificate {
                flavor: s.flavor,
                weights: w,
                verified_through_weight: key.row as usize - 1,
                window: (!strict).then_some(window),
                blocks: ranks,
                verdict: KoszulVerdict::NotKoszul {
                    row: key.row as usize,
                    degree: key.degree,
                    class,
                    rendered: fmt_combination(&items),
                },
            });
        }
    }
    Ok(KoszulCertificate {
        flavor: s.flavor,
        weights: w,
        verified_through_weight: max_weight,
        window: (!strict).then_some(window),
        blocks: ranks,
        verdict: KoszulVerdict::KoszulUpTo(max_weight),
    })
}

/// The bar subcomplex of words of length `≤ max_len` with `row + D = c`, graded by `D`.
/// Its homology in degree `D` is the homology of row `c − D`.
pub fn weight_complex(
    s: &InfinityStructure,
    weights: Option<&[u32]>,
    c: i64,
    max_len: usize,
) -> Result<Complex, Error> {
    let w = resolve_weights(s, weights)?;
    check_homogeneous(s, &w)?;
    let bw = BarWords::new(s, &w)?;
    let words: Vec<Word> = bw
        .enumerate(&|len, _, _, _| len <= max_len)
        .into_iter()
        .filter(|u| {
            let k = bw.key(u, false);
            k.row + k.degree == c
        })
        .collect();
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut space = GradedSpace::new();
    for u in &words {
        let k = bw.key(u, false);
        space.push_weighted(&bw.label(u), k.degree, Some(k.row as u32));
    }
    let mut d = SparseMap::zero(&space, &space, -1);
    for (j, u) in words.iter().enumerate() {
        d.cols[j] = bw.apply(u).map_keys(|x| Some((index[x], Q::one())));
    }
    Ok(Complex::new(space, d))
}

/// A quadratic presentation of a strict weight-graded algebra, with the basis indices of its
/// weight-1 generators.
#[derive(Clone, Debug)]
pub struct QuadraticPresentation {
    pub presentation: WeightedPresentation,
    pub generators: Vec<usize>,
    pub verified_through_weight: usize,
}

fn op2(s: &InfinityStructure, a: &Vector, b: &Vector) -> Vector {
    let mut out = Vector::zero();
    for (i, c) in a.iter() {
        for (j, e) in b.iter() {
            out.add_scaled(&s.op(2, &[*i, *j]), &(c * e));
        }
    }
    out
}

fn eval_tree(s: &InfinityStructure, t: &LieTree, gens: &[usize]) -> Vector {
    match t {
        LieTree::Leaf(i) => Vector::basis(gens[*i]),
        LieTree::Br(a, b) => op2(s, &eval_tree(s, a, gens), &eval_tree(s, b, gens)),
    }
}

/// `V` = weight-1 part, `R` = kernel of `Λ²V → A^{(2)}` (resp. `𝕃²V → L^{(2)}`). Verifies that
/// `V` generates and that the presented algebra has the same dimensions through `max_weight`.
pub fn quadratic_presentation(
    s: &InfinityStructure,
    weights: Option<&[u32]>,
    max_weight: usize,
) -> Result<QuadraticPresentation, Error> {
    if !s.is_minimal() || s.top_arity() > 2 {
        return Err(Error::Domain(
            "quadratic presentations are for strict algebras with zero differential".into(),
        ));
    }
    if s.flavor == Flavor::Assoc {
        return Err(Error::Domain(
            "expected a commutative or Lie algebra".into(),
        ));
    }
    let w = resolve_weights(s, weights)?;
    check_homogeneous(s, &w)?;
    let v: Vec<usize> = (0..s.dim()).filter(|&i| w[i] == 1).collect();
    let mut gens = GradedSpace::new();
    for &i in &v {
        gens.push_weighted(s.space.name(i), s.deg(i), Some(1));
    }
    let top = *w.iter().max().unwrap_or(&1) as usize;
    for k in 2..=max_weight.min(top) {
        let mut red: Reducer<usize> = Reducer::new();
        for &g in &v {
            for a in (0..s.dim()).filter(|&a| w[a] as usize == k - 1) {
                red.insert(&s.op(2, &[g, a]));
            }
        }
        if let Some(b) =
            (0..s.dim()).find(|&b| w[b] as usize == k && !red.contains(&Vector::basis(b)))
        {
            return Err(Error::Domain(format!(
                "not generated in weight 1: {} (weight {}) is not a product",
                s.space.name(b),
                k
            )));
        }
    }
    let relations = match s.flavor {
        Flavor::Comm => {
            let ring = PolyRing::new(gens.clone());
            let monos = lambda2_basis(&ring);
            let images: Vec<Vector> = monos
                .iter()
                .map(|m| {
                    let l = PolyRing::letters(m);
                    s.op(2, &[v[l[0]], v[l[1]]])
                })
                .collect();
            let rk = rank_kernel_cols(&images);
            Relations::Comm(
                rk.kernel
                    .iter()
                    .map(|z| z.map_keys(|k| Some((monos[*k].clone(), Q::one()))))
                    .collect(),
            )
        }
        _ => {
            let deg = |i: usize| gens.deg(i);
            let trees = lie_basis(&gens, 2);
            let images: Vec<Vector> = trees.iter().map(|t| eval_tree(s, t, &v)).collect();
            let rk = rank_kernel_cols(&images);
            Relations::Lie(
                rk.kernel
                    .iter()
                    .map(|z| {
                        let mut t = Tensor::zero();
                        for (k, c) in z.iter() {
                            t.add_scaled(&trees[*k].to_tensor(&deg), c);
                        }
                        t
                    })
                    .collect(),
            )
        }
    };
    let p = WeightedPresentation::new(gens, relations)?;
    let bound = max_weight;
    let q = p.algebra(bound)?;
    for k in 1..=bound as u32 {
        let have = w.iter().filter(|&&x| x == k).count();
        let want = (0..q.dim())
            .filter(|&i| q.space.weight(i) == Some(k))
            .count();
        if have != want {
            return Err(Error::Domain(format!(
                "not quadratic: weight {} has dimension {} but the quadratic presentation gives {}",
                k, have, want
            )));
        }
    }
    Ok(QuadraticPresentation {
        presentation: p,
        generators: v,
        verified_through_weight: bound,
    })
}

/// Basis indices of weight-1 elements; rejects structures not generated by them.
fn weight_one_generators(s: &InfinityStructure, w: &[u32]) -> Result<Vec<usize>, Error> {
    let mut red: Reducer<usize> = Reducer::new();
    for t in s.ops.values() {
        for v in t.values() {
            red.insert(v);
        }
    }
    if let Some(b) = (0..s.dim()).find(|&b| w[b] > 1 && !red.contains(&Vector::basis(b))) {
        return Err(Error::Domain(format!(
            "not generated in weight 1: {} (weight {}) is not in the image of the operations",
            s.space.name(b),
            w[b]
        )));
    }
    Ok((0..s.dim()).filter(|&i| w[i] == 1).collect())
}

/// The Koszul dual of a minimal Koszul L∞ or C∞ algebra: `ΛV/(S^⊥)` with `V` dual to the
/// weight-1 part (resp. `𝕃W/(R^⊥)`), where `S^⊥` is spanned by the cochain differentials of the
/// weight-2 dual generators.
pub fn koszul_dual_infinity(
    s: &InfinityStructure,
    weights: Option<&[u32]>,
) -> Result<WeightedPresentation, Error> {
    if !s.is_minimal() {
        return Err(Error::Domain(
            "Koszul dual of an ∞-structure needs a minimal input".into(),
        ));
    }
    let w = resolve_weights(s, weights)?;
    check_homogeneous(s, &w)?;
    let v = weight_one_generators(s, &w)?;
    let pos: BTreeMap<usize, usize> = v.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let two: Vec<usize> = (0..s.dim()).filter(|&i| w[i] == 2).collect();
    match s.flavor {
        Flavor::Lie => {
            let m = sullivan_from_linfty(s)?;
            let mut gens = GradedSpace::new();
            for &i in &v {
                gens.push_weighted(m.ring.gens.name(i), m.ring.gens.deg(i), Some(1));
            }
            let rels: Vec<Poly> = two
                .iter()
                .map(|&b| {
                    m.d[b].map_keys(|mono| {
                        let mut out = vec![0; v.len()];
                        for (i, &e) in mono.iter().enumerate() {
                            if e > 0 {
                                out[pos[&i]] = e;
                            }
                        }
                        Some((out, Q::one()))
                    })
                })
                .collect();
            WeightedPresentation::new(gens, Relations::Comm(span_basis(&rels)))
        }
        Flavor::Comm => {
            let q = quillen_from_cinfty(s)?;
            let mut gens = GradedSpace::new();
            for &i in &v {
                gens.push_weighted(q.gens.name(i), q.gens.deg(i), Some(1));
            }
            let rels: Vec<Tensor> = two
                .iter()
                .map(|&b| {
                    q.delta[b].map_keys(|u| Some((u.iter().map(|i| pos[i]).collect(), Q::one())))
                })
                .collect();
            WeightedPresentation::new(gens, Relations::Lie(span_basis(&rels)))
        }
        Flavor::Assoc => Err(Error::Domain("expected an L∞ or C∞ algebra".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedBlock {
    pub codegree: i64,
    pub lower: u32,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
}

impl BigradedBlock {
    pub fn homology(&self) -> usize {
        self.dim - self.rank_in - self.rank_out
    }
}

/// `coCE(L)` with the lower grading `Σ (w − 1)` over generators dual to weight-`w` elements.
#[derive(Clone, Debug)]
pub struct BigradedModel {
    pub model: SullivanModel,
    pub lower: Vec<u32>,
    pub max_codegree: i64,
    pub blocks: Vec<BigradedBlock>,
    /// Homology vanishes in every lower degree `≥ 1` through the codegree bound.
    pub exact: bool,
}

impl BigradedModel {
    pub fn mono_lower(&self, m: &Mono) -> u32 {
        m.iter().zip(&self.lower).map(|(e, l)| e * l).sum()
    }

    /// Largest lower degree with a nonzero term through the bound.
    pub fn length(&self) -> u32 {
        self.blocks
            .iter()
            .filter(|b| b.dim > 0)
            .map(|b| b.lower)
            .max()
            .unwrap_or(0)
    }

    /// Dimensions of `H_0 = coCE_(0) / D coCE_(1)` by codegree: the augmented resolution target.
    pub fn h0(&self) -> BTreeMap<i64, usize> {
        self.blocks
            .iter()
            .filter(|b| b.lower == 0)
            .map(|b| (b.codegree, b.homology()))
            .collect()
    }

    pub fn render(&self) -> String {
        let ring = &self.model.ring;
        let mut s = String::new();
        for (i, b) in ring.gens.basis.iter().enumerate() {
            s.push_str(&format!(
                "  {} codeg {} lower {} d = {}\n",
                b.name,
                -b.degree,
                self.lower[i],
                ring.fmt_poly(&self.model.d[i])
            ));
        }
        let mut seq: Vec<String> = vec!["0".into()];
        for l in (0..=self.length()).rev() {
            seq.push(format!("coCE_({})", l));
        }
        seq.push("H".into());
        seq.push("0".into());
        s.push_str(&format!("  {}\n", seq.join(" → ")));
        for b in &self.blocks {
            if b.dim > 0 {
                s.push_str(&format!(
                    "  codeg {} lower {}: dim {}, homology {}\n",
                    b.codegree,
                    b.lower,
                    b.dim,
                    b.homology()
                ));
            }
        }
        s.push_str(&format!(
            "  {} through codegree {}\n",
            if self.exact { "exact" } else { "not exact" },
            self.max_codegree
        ));
        s
    }
}

/// The bigraded model of a Koszul L∞ algebra: `coCE(L)` resolving `H_0` through `max_codeg`.
pub fn bigraded_model(
    s: &InfinityStructure,
    weights: Option<&[u32]>,
    max_codeg: i64,
) -> Result<BigradedModel, Error> {
    if s.flavor != Flavor::Lie {
        return Err(Error::Domain(
            "bigraded models are built from L∞ algebras".into(),
        ));
    }
    let w = resolve_weights(s, weights)?;
    check_homogeneous(s, &w)?;
    let model = sullivan_from_linfty(s)?;
    let lower: Vec<u32> = w.iter().map(|x| x - 1).collect();
    let mut bm = BigradedModel {
        model,
        lower,
        max_codegree: max_codeg,
        blocks: vec![],
        exact: true,
    };
    let ring = bm.model.ring.clone();
    let mut groups: BTreeMap<(i64, u32), Vec<Mono>> = BTreeMap::new();
    for m in ring.monomials_upto(max_codeg + 1) {
        groups
            .entry((-ring.mono_degree(&m), bm.mono_lower(&m)))
            .or_default()
            .push(m);
    }
    let image = |m: &Mono| bm.model.differential(&Poly::basis(m.clone()));
    for (&(c, l), monos) in &groups {
        if c > max_codeg {
            continue;
        }
        let mut out: Reducer<Mono> = Reducer::new();
        let mut rank_out = 0;
        for m in monos {
            let dm = image(m);
            if dm.iter().any(|(t, _)| bm.mono_lower(t) + 1 != l) {
                return Err(Error::Domain(
                    "differential does not lower the lower degree by one".into(),
                ));
            }
            if out.insert(&dm) {
                rank_out += 1;
            }
        }
        let mut inc: Reducer<Mono> = Reducer::new();
        if let Some(prev) = groups.get(&(c - 1, l + 1)) {
            for m in prev {
                inc.insert(&image(m));
            }
        }
        let b = BigradedBlock {
            codegree: c,
            lower: l,
            dim: monos.len(),
            rank_in: inc.rank(),
            rank_out,
        };
        if l >= 1 && b.homology() > 0 {
            bm.exact = false;
        }
        bm.blocks.push(b);
    }
    Ok(bm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::linfty_from_sullivan;
    use crate::q::q;

    fn cpn(n: u32) -> InfinityStructure {
        let gens = GradedSpace::from_degrees(&[("x", -2), ("y", -(2 * n as i64 + 1))]);
        let ring = PolyRing::new(gens.clone());
        let m =
            SullivanModel::new(gens, vec![Poly::zero(), ring.pow(&ring.gen(0), n + 1)]).unwrap();
        linfty_from_sullivan(&m).unwrap()
    }

    #[test]
    fn pairing_signs() {
        // literal two-term formula on x ∧ y against [α, β]
        for (dx, dy) in [(-2, -2), (-2, -3), (-3, -2), (-3, -3), (-4, -5)] {
            let v = GradedSpace::from_degrees(&[("x", dx), ("y", dy)]);
            let w = dual_space(&v);
            let (x, y, a, b) = (dx, dy, w.deg(0), w.deg(1));
            let e = |k: i64| sign(k.rem_euclid(2) == 1);
            let ring = PolyRing::new(v.clone());
            let xy = ring.mul(&ring.gen(0), &ring.gen(1));
            let t = bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![1]), &|i| {
                w.deg(i)
            });
            assert_eq!(pairing(&v, &w, &xy, &t), e(y * a + x + a));
            let t = bracket(&Tensor::basis(vec![1]), &Tensor::basis(vec![0]), &|i| {
                w.deg(i)
            });
            assert_eq!(pairing(&v, &w, &xy, &t), -e(b * a + y * a + x + a));
        }
        let v = GradedSpace::from_degrees(&[("x", -2)]);
        let w = dual_space(&v);
        let ring = PolyRing::new(v.clone());
        let t = bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![0]), &|i| {
            w.deg(i)
        });
        assert_eq!(pairing(&v, &w, &ring.pow(&ring.gen(0), 2), &t), q(-2));
    }

    #[test]
    fn arnold_dual_is_drinfeld_kohno() {
        for n in [3, 4] {
            let a = arnold(n, 3);
            let dk = drinfeld_kohno(n, 3);
            let d = koszul_dual(&a).unwrap();
            assert!(same_presentation(&d, &dk), "n = {}", n);
            let ring = a.ring();
            let Relations::Comm(r) = &a.relations else {
                panic!()
            };
            let Relations::Lie(sr) = &dk.relations else {
                panic!()
            };
            for x in r {
                for y in sr {
                    assert!(pairing(&a.gens, &dk.gens, x, y).is_zero());
                }
            }
            assert_eq!(rank_of_lin(r) + rank_of_lin(sr), lambda2_basis(&ring).len());
            assert!(same_presentation(&koszul_dual(&d).unwrap(), &a));
        }
    }

    #[test]
    fn free_and_trivial_duals() {
        let gens = GradedSpace::from_degrees(&[("x", -2), ("y", -3)]);
        let free = WeightedPresentation::new(gens.clone(), Relations::Comm(vec![])).unwrap();
        let d = koszul_dual(&free).unwrap();
        assert_eq!(d.relations.len(), lie_basis(&d.gens, 2).len());
        let ring = PolyRing::new(gens.clone());
        let coh = WeightedPresentation::new(
            gens,
            Relations::Comm(lambda2_basis(&ring).into_iter().map(Poly::basis).collect()),
        )
        .unwrap();
        assert!(koszul_dual(&coh).unwrap().relations.is_empty());
    }

    #[test]
    fn cpn_rows() {
        for n in [2, 3] {
            let l = cpn(n);
            let c = koszul_check(&l, Some(&[1, 2]), 4, 12).unwrap();
            assert!(c.is_koszul() && c.reproduce(), "{}", c.render());
            let dual = koszul_dual_infinity(&l, Some(&[1, 2])).unwrap();
            let Relations::Comm(r) = &dual.relations else {
                panic!()
            };
            assert_eq!(r.len(), 1);
            assert_eq!(r[0].iter().next().unwrap().0, &vec![n + 1]);
            let bg = bigraded_model(&l, Some(&[1, 2]), 4 * n as i64).unwrap();
            assert!(bg.exact && bg.length() == 1);
            let h0 = bg.h0();
            for k in 1..=2 * n as i64 {
                assert_eq!(
                    h0.get(&(2 * k)).cloned().unwrap_or(0),
                    (k <= n as i64) as usize
                );
            }
        }
    }

    #[test]
    fn truncated_polynomial_is_not_koszul() {
        let gens = GradedSpace::from_degrees(&[("x", -2)]);
        let ring = PolyRing::new(gens.clone());
        let p = WeightedPresentation::new(gens, Relations::Comm(vec![ring.pow(&ring.gen(0), 3)]))
            .unwrap();
        let a = p.algebra(4).unwrap();
        assert_eq!(a.dim(), 2);
        let c = koszul_check(&a, None, 3, 0).unwrap();
        match c.verdict {
            KoszulVerdict::NotKoszul { row, .. } => assert_eq!(row, 1),
            _ => panic!("{}", c.render()),
        }
        assert!(c.reproduce());
        assert!(quadratic_presentation(&a, None, 3).is_err());
        assert!(quadratic_presentation(&a, None, 2).is_ok());
    }

    #[test]
    fn arnold_algebra_is_koszul() {
        let p = arnold(3, 3);
        let a = p.algebra(4).unwrap();
        assert_eq!(a.dim(), 5);
        let c = koszul_check(&a, None, 4, 0).unwrap();
        assert!(c.is_koszul(), "{}", c.render());
        let qp = quadratic_presentation(&a, None, 4).unwrap();
        assert!(same_presentation(&qp.presentation, &p));
        let dk = drinfeld_kohno(3, 3).algebra(4).unwrap();
        assert!(koszul_check(&dk, None, 4, 0).unwrap().is_koszul());
    }

    #[test]
    fn abelian_rows_have_zero_differential() {
        let mut s = InfinityStructure::new(
            Flavor::Lie,
            GradedSpace::from_degrees(&[("a", 1), ("b", 2)]),
        );
        s.certify_declared(2);
        let c = weight_complex(&s, Some(&[1, 1]), 6, 4).unwrap();
        assert!(c.d.is_zero() && c.space.dim() > 0);
    }
}
