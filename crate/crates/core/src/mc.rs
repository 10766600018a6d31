//! Maurer–Cartan calculus for nilpotent L∞ algebras: lower central series, curvature, twisting,
//! the Baker–Campbell–Hausdorff group and homotopy groups of the nerve, and tensor products
//! with finite dimensional cdgas.
//!
//! Curvature and twisting are computed on the bar side. An element `τ` of degree −1 suspends to
//! an even element `sτ`, and the twisted coderivation has components
//! `b^τ_n(w) = Σ_k (1/k!) b_{n+k}(sτ^k, w)`.

use crate::infinity::{Flavor, InfinityStructure};
use crate::linalg::{span_basis, GradedSpace, Reducer};
use crate::q::{factorial, Lin, Vector, Q};
use crate::Error;
use num_traits::One;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

fn require_lie(s: &InfinityStructure) -> Result<(), Error> {
    if s.flavor != Flavor::Lie {
        return Err(Error::Domain(format!(
            "expected an L-infinity algebra, got {}",
            s.flavor.name()
        )));
    }
    Ok(())
}

/// Multilinear evaluation `l_r(v_1,…,v_r)` on vectors.
pub fn eval_op(s: &InfinityStructure, vs: &[&Vector]) -> Vector {
    let mut out = Vector::zero();
    let mut word = Vec::with_capacity(vs.len());
    fn rec(s: &InfinityStructure, vs: &[&Vector], c: Q, word: &mut Vec<usize>, out: &mut Vector) {
        if word.len() == vs.len() {
            out.add_scaled(&s.op(vs.len(), word), &c);
            return;
        }
        for (i, a) in vs[word.len()].iter() {
            word.push(*i);
            rec(s, vs, &c * a, word, out);
            word.pop();
        }
    }
    rec(s, vs, Q::one(), &mut word, &mut out);
    out
}

/// `Γ^1 = L`, `Γ^k` spanned by `l_r(Γ^{a_1},…,Γ^{a_r})` with `Σ a_j ≥ k` and closed under `l_1`.
#[derive(Clone, Debug)]
pub struct LowerCentralSeries {
    /// `levels[k-1]` is a basis of `Γ^k`.
    pub levels: Vec<Vec<Vector>>,
    pub nilpotent: bool,
}

impl LowerCentralSeries {
    pub fn level(&self, k: usize) -> &[Vector] {
        assert!(k >= 1);
        match self.levels.get(k - 1) {
            Some(l) => l,
            None => self.levels.last().map(|l| l.as_slice()).unwrap_or(&[]),
        }
    }

    /// Least `c` with `Γ^{c+1} = 0`.
    pub fn class(&self) -> Option<usize> {
        if self.nilpotent {
            Some(self.levels.len() - 1)
        } else {
            None
        }
    }

    /// For each degree, the least `k` with `Γ^k` zero in that degree.
    pub fn vanishing_by_degree(&self, space: &GradedSpace) -> BTreeMap<i64, Option<usize>> {
        let mut out = BTreeMap::new();
        for d in space.degrees() {
            let hit = self
                .levels
                .iter()
                .position(|l| l.iter().all(|v| space.vec_degree(v) != Some(d)));
            out.insert(d, hit.map(|i| i + 1));
        }
        out
    }

    /// A nonzero stable term, when the series stabilizes away from zero.
    pub fn witness(&self, space: &GradedSpace) -> Option<String> {
        if self.nilpotent {
            return None;
        }
        let k = self.levels.len();
        let span: Vec<String> = self.levels[k - 1]
            .iter()
            .map(|v| space.fmt_vec(v))
            .collect();
        Some(format!(
            "Γ^{} = Γ^{} = span({}) is nonzero",
            k,
            k + 1,
            span.join(", ")
        ))
    }
}

/// Non-increasing tuples in `[1, k-1]` of length `r` with sum exactly `k`, or all ones when `r ≥ k`.
fn level_tuples(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r >= k {
        out.push(vec![1; r]);
        return out;
    }
    fn rec(rem: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in (1..=cap.min(rem)).rev() {
            if rem - a < slots - 1 {
                continue;
            }
            cur.push(a);
            rec(rem - a, slots - 1, a, cur, out);
            cur.pop();
        }
    }
    rec(k, r, k - 1, &mut Vec::new(), &mut out);
    out
}

pub fn lower_central_series(s: &InfinityStructure) -> Result<LowerCentralSeries, Error> {
    require_lie(s)?;
    let top = s.top_arity();
    let mut levels: Vec<Vec<Vector>> = vec![(0..s.dim()).map(Vector::basis).collect()];
    let mut k = 2;
    loop {
        let mut gens: Vec<Vector> = Vec::new();
        for r in 2..=top {
            if s.op_is_zero(r) {
                continue;
            }
            for tuple in level_tuples(k, r) {
                let pools: Vec<&[Vector]> =
                    tuple.iter().map(|&a| levels[a - 1].as_slice()).collect();
                let mut pick: Vec<&Vector> = Vec::with_capacity(r);
                fn rec<'a>(
                    s: &InfinityStructure,
                    pools: &[&'a [Vector]],
                    pick: &mut Vec<&'a Vector>,
                    gens: &mut Vec<Vector>,
                ) {
                    if pick.len() == pools.len() {
                        let v = eval_op(s, pick);
                        if !v.is_zero() {
                            gens.push(v);
                        }
                        return;
                    }
                    for v in pools[pick.len()] {
                        pick.push(v);
                        rec(s, pools, pick, gens);
                        pick.pop();
                    }
                }
                rec(s, &pools, &mut pick, &mut gens);
            }
        }
        let mut basis = span_basis(&gens);
        loop {
            let mut grown = basis.clone();
            for v in &basis {
                grown.push(s.d.apply(v));
            }
            let next = span_basis(&grown);
            if next.len() == basis.len() {
                break;
            }
            basis = next;
        }
        if basis.is_empty() {
            levels.push(basis);
            return Ok(LowerCentralSeries {
                levels,
                nilpotent: true,
            });
        }
        levels.push(basis);
        // Γ^{k+1} = Γ^k once Γ^j is constant for ⌈k/top⌉ ≤ j ≤ k.
        let from = k.div_ceil(top.max(2)).max(1);
        let n = levels[k - 1].len();
        if k > from && levels[from - 1..k].iter().all(|l| l.len() == n) {
            return Ok(LowerCentralSeries {
                levels,
                nilpotent: false,
            });
        }
        k += 1;
    }
}

pub fn is_nilpotent(s: &InfinityStructure) -> Result<bool, Error> {
    Ok(lower_central_series(s)?.nilpotent)
}

fn require_nilpotent(s: &InfinityStructure) -> Result<(), Error> {
    let lcs = lower_central_series(s)?;
    if let Some(w) = lcs.witness(&s.space) {
        return Err(Error::Domain(format!("not nilpotent: {}", w)));
    }
    Ok(())
}

fn require_mc_degree(s: &InfinityStructure, tau: &Vector) -> Result<(), Error> {
    for (i, _) in tau.iter() {
        if *i >= s.dim() {
            return Err(Error::Domain(format!("index {} out of range", i)));
        }
        if s.deg(*i) != -1 {
            return Err(Error::Domain(format!(
                "Maurer-Cartan elements live in degree -1, but {} has degree {}",
                s.space.name(*i),
                s.deg(*i)
            )));
        }
    }
    Ok(())
}

/// All words of length `k` in the support of `tau`, with the product of coefficients.
fn tau_words(tau: &Vector, k: usize) -> Vec<(Vec<usize>, Q)> {
    let mut out = vec![(Vec::new(), Q::one())];
    for _ in 0..k {
        let mut next = Vec::new();
        for (w, c) in &out {
            for (i, a) in tau.iter() {
                let mut w2 = w.clone();
                w2.push(*i);
                next.push((w2, c * a));
            }
        }
        out = next;
    }
    out
}

/// `Σ_k (1/k!) b_{n+k}(sτ^k, w)` in `sL`.
fn twisted_bar(s: &InfinityStructure, tau: &Vector, w: &[usize], top: usize) -> Vector {
    let mut out = Vector::zero();
    for k in 0..=top.saturating_sub(w.len()) {
        if w.len() + k == 0 {
            continue;
        }
        let inv = Q::one() / factorial(k as u64);
        for (u, c) in tau_words(tau, k) {
            let mut word = u;
            word.extend_from_slice(w);
            out.add_scaled(&s.bar_component(&word), &(&c * &inv));
        }
    }
    out
}

/// `F(τ) = dτ + Σ_{k≥2} (1/k!) l_k(τ,…,τ)`, the Maurer–Cartan curvature.
pub fn curvature(s: &InfinityStructure, tau: &Vector) -> Result<Vector, Error> {
    require_lie(s)?;
    require_mc_degree(s, tau)?;
    let b = twisted_bar(s, tau, &[], s.top_arity());
    // b_1(sτ) = −s dτ, so the curvature is the negative of the bar value.
    Ok(b.neg())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaurerCartanElement {
    pub value: Vector,
}

impl MaurerCartanElement {
    pub fn zero() -> Self {
        MaurerCartanElement {
            value: Vector::zero(),
        }
    }

    /// Validate `τ` in a nilpotent L∞ algebra.
    pub fn new(s: &InfinityStructure, value: Vector) -> Result<Self, Error> {
        require_nilpotent(s)?;
        let f = curvature(s, &value)?;
        if !f.is_zero() {
            return Err(Error::Domain(format!(
                "curvature {} is nonzero",
                s.space.fmt_vec(&f)
            )));
        }
        Ok(MaurerCartanElement { value })
    }
}

/// The twisted algebra `L^τ` with `l^τ_n(x) = Σ_k (1/k!) l_{n+k}(τ^k, x)` up to décalage signs.
pub fn twist(s: &InfinityStructure, tau: &MaurerCartanElement) -> Result<InfinityStructure, Error> {
    require_lie(s)?;
    require_mc_degree(s, &tau.value)?;
    let top = s.top_arity();
    let mut out = InfinityStructure::new(Flavor::Lie, s.space.clone());
    for i in 0..s.dim() {
        let b = twisted_bar(s, &tau.value, &[i], top);
        out.set_d(
            i,
            InfinityStructure::op_from_bar(Flavor::Lie, &s.space, &[i], &b),
        );
    }
    for n in 2..=top {
        for w in s.words_with_output(n, n as i64 - 2, true) {
            let b = twisted_bar(s, &tau.value, &w, top);
            if b.is_zero() {
                continue;
            }
            let l = InfinityStructure::op_from_bar(Flavor::Lie, &s.space, &w, &b);
            out.set_antisymmetric(n, w, l);
        }
    }
    out.arity_bound = s.arity_bound;
    out.certificate = s.certificate.clone();
    Ok(out)
}

/// Coefficients of the Baker–Campbell–Hausdorff series through the given order, as
/// `(word over {0 = X, 1 = Y}, c)` for the left-normed bracket `[…[[w_1,w_2],w_3]…,w_n]`.
pub fn bch_terms(order: usize) -> Vec<(Vec<u8>, Q)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<(Vec<u8>, Q)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&order) {
        return v.clone();
    }
    type Nc = Lin<Vec<u8>>;
    let mul = |a: &Nc, b: &Nc| -> Nc {
        let mut out = Nc::zero();
        for (u, x) in a.iter() {
            for (v, y) in b.iter() {
                if u.len() + v.len() <= order {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    out.add_term(w, x * y);
                }
            }
        }
        out
    };
    let exp = |letter: u8| -> Nc {
        let mut out = Nc::basis(vec![]);
        for k in 1..=order {
            out.add_term(vec![letter; k], Q::one() / factorial(k as u64));
        }
        out
    };
    let mut z = mul(&exp(0), &exp(1));
    z.add_term(vec![], -Q::one());
    let mut log = Nc::zero();
    let mut power = z.clone();
    for k in 1..=order {
        let c = if k % 2 == 1 { Q::one() } else { -Q::one() } / Q::from_integer(k.into());
        log.add_scaled(&power, &c);
        power = mul(&power, &z);
    }
    let terms: Vec<(Vec<u8>, Q)> = log
        .iter()
        .map(|(w, c)| (w.clone(), c / Q::from_integer(w.len().into())))
        .collect();
    cache.lock().unwrap().insert(order, terms.clone());
    terms
}

/// The Lie algebra `H_0(L^τ)` with the group law given by the Baker–Campbell–Hausdorff formula.
#[derive(Clone, Debug)]
pub struct BchGroup {
    /// Cycle representatives of a basis.
    pub basis: Vec<Vector>,
    /// `brackets[i][j]` are the coordinates of `[e_i, e_j]`.
    pub brackets: Vec<Vec<Vector>>,
    /// Nilpotency class of the bracket.
    pub class: usize,
}

impl BchGroup {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&self.brackets[*i][*j], &(a * b));
            }
        }
        out
    }

    /// `log(e^x e^y)`.
    pub fn product(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (w, c) in bch_terms(self.class.max(1)) {
            let pick = |l: u8| if l == 0 { x } else { y };
            let mut acc = pick(w[0]).clone();
            for &l in &w[1..] {
                acc = self.bracket(&acc, pick(l));
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, &c);
        }
        out
    }

    pub fn inverse(&self, x: &Vector) -> Vector {
        x.neg()
    }

    /// Nilpotency class of a Lie algebra given by structure constants.
    pub fn from_brackets(brackets: Vec<Vec<Vector>>) -> Self {
        let dim = brackets.len();
        let mut g = BchGroup {
            basis: (0..dim).map(Vector::basis).collect(),
            brackets,
            class: 1,
        };
        let mut term: Vec<Vector> = (0..dim).map(Vector::basis).collect();
        let mut class = 0;
        while !term.is_empty() {
            class += 1;
            let mut next = Vec::new();
            for i in 0..dim {
                for v in &term {
                    next.push(g.bracket(&Vector::basis(i), v));
                }
            }
            let next = span_basis(&next);
            if next.len() == term.len() {
                class = usize::MAX;
                break;
            }
            term = next;
        }
        g.class = class.max(1);
        g
    }
}

/// Homology of `(L, d)` in one degree, with cycle representatives and a coordinate map.
struct DegreeHomology {
    reps: Vec<Vector>,
    red: Reducer<usize>,
    boundaries: usize,
}

impl DegreeHomology {
    fn new(s: &InfinityStructure, degree: i64) -> Self {
        let c = s.complex();
        let h = crate::linalg::homology(&c, degree);
        let mut red = Reducer::new();
        let mut boundaries = 0;
        for j in s.space.in_degree(degree + 1) {
            if red.insert(&s.d.cols[j]) {
                boundaries += 1;
            }
        }
        for r in &h.representatives {
            red.insert(r);
        }
        DegreeHomology {
            reps: h.representatives,
            red,
            boundaries,
        }
    }

    fn coords(&self, z: &Vector) -> Vector {
        let sol = self.red.solve(z).expect("cycle outside the span");
        sol.map_keys(|i| {
            if *i >= self.boundaries {
                Some((*i - self.boundaries, Q::one()))
            } else {
                None
            }
        })
    }
}

#[derive(Clone, Debug)]
pub enum NerveGroup {
    /// `π_{k+1} ≅ H_k(L^τ)` for `k ≥ 1`.
    Abelian {
        homotopy_degree: i64,
        basis: Vec<Vector>,
    },
    /// `π_1 ≅ H_0(L^τ)` with the Baker–Campbell–Hausdorff product.
    Nilpotent(BchGroup),
}

impl NerveGroup {
    pub fn rank(&self) -> usize {
        match self {
            NerveGroup::Abelian { basis, .. } => basis.len(),
            NerveGroup::Nilpotent(g) => g.dim(),
        }
    }
}

/// `π_{k+1}(MC_•(L), τ)` computed from the twisted algebra `L^τ`.
pub fn nerve_homotopy_group(
    s: &InfinityStructure,
    tau: &MaurerCartanElement,
    k: i64,
) -> Result<NerveGroup, Error> {
    require_nilpotent(s)?;
    if k < 0 {
        return Err(Error::Usage("homotopy degree must be at least 1".into()));
    }
    let t = twist(s, tau)?;
    let h = DegreeHomology::new(&t, k);
    if k >= 1 {
        return Ok(NerveGroup::Abelian {
            homotopy_degree: k + 1,
            basis: h.reps,
        });
    }
    let mut brackets = Vec::new();
    for x in &h.reps {
        let row: Vec<Vector> = h
            .reps
            .iter()
            .map(|y| h.coords(&eval_op(&t, &[x, y])))
            .collect();
        brackets.push(row);
    }
    let mut g = BchGroup::from_brackets(brackets);
    g.basis = h.reps.clone();
    Ok(NerveGroup::Nilpotent(g))
}

/// Adjoin a unit in degree 0 to a strict commutative algebra.
pub fn with_unit(a: &InfinityStructure) -> InfinityStructure {
    let mut space = GradedSpace::new();
    space.push("1", 0);
    for i in 0..a.dim() {
        space.push(a.space.name(i), a.deg(i));
    }
    let shift = |v: &Vector| v.map_keys(|i| Some((i + 1, Q::one())));
    let mut out = InfinityStructure::new(a.flavor, space);
    for i in 0..a.dim() {
        out.set_d(i + 1, shift(&a.d.cols[i]));
    }
    out.set_raw(2, vec![0, 0], Vector::basis(0));
    for i in 0..a.dim() {
        out.set_raw(2, vec![0, i + 1], Vector::basis(i + 1));
        out.set_raw(2, vec![i + 1, 0], Vector::basis(i + 1));
    }
    if let Some(t) = a.ops.get(&2) {
        for (w, v) in t {
            out.set_raw(2, vec![w[0] + 1, w[1] + 1], shift(v));
        }
    }
    out.certify_declared(2);
    out
}

/// `A ⊗ L` for a finite dimensional strict cdga `A` and an L∞ algebra `L`, with
/// `l_n(a_1⊗x_1,…,a_n⊗x_n) = ε a_1⋯a_n ⊗ l_n(x_1,…,x_n)`.
pub fn tensor_model(
    a: &InfinityStructure,
    l: &InfinityStructure,
) -> Result<InfinityStructure, Error> {
    if a.flavor != Flavor::Comm || a.top_arity() > 2 {
        return Err(Error::Domain(
            "the first factor must be a strict commutative algebra".into(),
        ));
    }
    require_lie(l)?;
    let (na, nl) = (a.dim(), l.dim());
    let idx = |i: usize, x: usize| i * nl + x;
    let mut space = GradedSpace::new();
    for i in 0..na {
        for x in 0..nl {
            space.push(
                &format!("{}⊗{}", a.space.name(i), l.space.name(x)),
                a.deg(i) + l.deg(x),
            );
        }
    }
    let pair = |u: &Vector, v: &Vector| -> Vector {
        let mut out = Vector::zero();
        for (i, p) in u.iter() {
            for (x, c) in v.iter() {
                out.add_term(idx(*i, *x), p * c);
            }
        }
        out
    };
    let mut s = InfinityStructure::new(Flavor::Lie, space);
    for i in 0..na {
        for x in 0..nl {
            let mut v = pair(&a.d.cols[i], &Vector::basis(x));
            let dx = pair(&Vector::basis(i), &l.d.cols[x]);
            if a.deg(i).rem_euclid(2) == 1 {
                v.sub(&dx);
            } else {
                v.add(&dx);
            }
            s.set_d(idx(i, x), v);
        }
    }
    let top = l.top_arity();
    for n in 2..=top {
        let Some(table) = l.ops.get(&n) else { continue };
        for (xs, lx) in table {
            let mut prod: Vec<(Vec<usize>, Vector)> =
                (0..na).map(|i| (vec![i], Vector::basis(i))).collect();
            for _ in 1..n {
                let mut next = Vec::new();
                for (w, p) in &prod {
                    for j in 0..na {
                        let mut q = Vector::zero();
                        for (i, c) in p.iter() {
                            q.add_scaled(&a.op(2, &[*i, j]), c);
                        }
                        let mut w2 = w.clone();
                        w2.push(j);
                        next.push((w2, q));
                    }
                }
                prod = next;
            }
            for (aw, p) in prod {
                if p.is_zero() {
                    continue;
                }
                let mut odd = false;
                for i in 0..n {
                    for j in i + 1..n {
                        odd ^= (l.deg(xs[i]) * a.deg(aw[j])).rem_euclid(2) == 1;
                    }
                }
                let word: Vec<usize> = (0..n).map(|k| idx(aw[k], xs[k])).collect();
                let mut v = pair(&p, lx);
                if odd {
                    v = v.neg();
                }
                s.set_raw(n, word, v);
            }
        }
    }
    s.certify_declared(top);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{cdga_window, linfty_from_sullivan};
    use crate::poly::{Poly, PolyRing, SullivanModel};
    use crate::q::{q, qf};

    fn cp2() -> InfinityStructure {
        let gens = GradedSpace::from_degrees(&[("x", -2), ("y", -5)]);
        let ring = PolyRing::new(gens.clone());
        let m = SullivanModel::new(gens, vec![Poly::zero(), ring.pow(&ring.gen(0), 3)]).unwrap();
        linfty_from_sullivan(&m).unwrap()
    }

    fn truncated(gens: &[(&str, i64)], codeg: i64) -> InfinityStructure {
        let gens = GradedSpace::from_degrees(gens);
        let zero = vec![Poly::zero(); gens.dim()];
        let m = SullivanModel::new(gens, zero).unwrap();
        with_unit(&cdga_window(&m, codeg).0)
    }

    fn heisenberg_dgl() -> InfinityStructure {
        // a, b in degree -1, c in degree -2 with [a,b] = c, plus a strict differential.
        let space = GradedSpace::from_degrees(&[("a", -1), ("b", -1), ("c", -2), ("e", 0)]);
        let mut s = InfinityStructure::new(Flavor::Lie, space);
        s.set_antisymmetric(2, vec![0, 1], Vector::basis(2));
        s.set_d(3, Vector::basis(0));
        s
    }

    #[test]
    fn strict_curvature() {
        let s = heisenberg_dgl();
        let mut tau = Vector::basis(0);
        tau.add_term(1, q(3));
        // dτ = 0, [τ,τ] = 2·3·[a,b] since a, b are odd.
        let f = curvature(&s, &tau).unwrap();
        let mut half = Vector::zero();
        half.add_scaled(&eval_op(&s, &[&tau, &tau]), &qf(1, 2));
        assert_eq!(f, half);
        assert_eq!(f, Vector::single(2, q(3)));
        assert!(MaurerCartanElement::new(&s, Vector::basis(0)).is_ok());
        assert!(MaurerCartanElement::new(&s, tau).is_err());
        let mut s = InfinityStructure::new(
            Flavor::Lie,
            GradedSpace::from_degrees(&[("p", -1), ("r", -2)]),
        );
        s.set_d(0, Vector::single(1, q(5)));
        assert_eq!(
            curvature(&s, &Vector::single(0, q(2))).unwrap(),
            Vector::single(1, q(10))
        );
    }

    #[test]
    fn series_and_nilpotence() {
        let l = cp2();
        let lcs = lower_central_series(&l).unwrap();
        assert!(lcs.nilpotent);
        assert_eq!(lcs.class(), Some(3));
        let space = GradedSpace::from_degrees(&[("x", 0), ("y", 0)]);
        let mut s = InfinityStructure::new(Flavor::Lie, space);
        s.set_antisymmetric(2, vec![0, 1], Vector::basis(1));
        let lcs = lower_central_series(&s).unwrap();
        assert!(!lcs.nilpotent);
        assert!(lcs.witness(&s.space).is_some());
        assert_eq!(lcs.level(5).len(), 1);
    }

    #[test]
    fn twisting_on_a_tensor_model() {
        let a = truncated(&[("u", -2)], 4);
        let l = cp2();
        let t = tensor_model(&a, &l).unwrap();
        assert!(t.check_structure().unwrap().ok);
        assert!(is_nilpotent(&t).unwrap());
        let ua = (0..t.dim()).find(|&i| t.deg(i) == -1).unwrap();
        assert_eq!(t.deg(ua), -1);
        let zero = twist(&t, &MaurerCartanElement::zero()).unwrap();
        assert_eq!(zero, t);
        let tau = MaurerCartanElement::new(&t, Vector::single(ua, q(2))).unwrap();
        let sigma = MaurerCartanElement::new(&t, Vector::single(ua, qf(-1, 3))).unwrap();
        let t1 = twist(&t, &tau).unwrap();
        assert!(t1.check_structure().unwrap().ok);
        let sigma_in_t1 = MaurerCartanElement::new(&t1, sigma.value.clone()).unwrap();
        let t2 = twist(&t1, &sigma_in_t1).unwrap();
        let mut sum = tau.value.clone();
        sum.add(&sigma.value);
        let direct = twist(&t, &MaurerCartanElement::new(&t, sum).unwrap()).unwrap();
        assert_eq!(t2, direct);
        assert!(t2.ops.values().any(|t| !t.is_empty()));
    }

    #[test]
    fn odd_tensor_factor() {
        let a = truncated(&[("t", -1)], 1);
        let l = cp2();
        let t = tensor_model(&a, &l).unwrap();
        let r = t.check_structure().unwrap();
        assert!(r.ok, "{:?}", r.failures);
        let space = GradedSpace::from_degrees(&[("z", 2)]);
        let ab = InfinityStructure::new(Flavor::Lie, space);
        let t = tensor_model(&a, &ab).unwrap();
        let betti = crate::linalg::betti(&t.complex());
        assert_eq!(betti.get(&2), Some(&1));
        assert_eq!(betti.get(&1), Some(&1));
    }

    #[test]
    fn bch_low_order() {
        let terms: BTreeMap<Vec<u8>, Q> = bch_terms(3).into_iter().collect();
        assert_eq!(terms[&vec![0]], q(1));
        assert_eq!(terms[&vec![1]], q(1));
        // XY/4 and −YX/4 both map to [X,Y]/4.
        assert_eq!(terms[&vec![0, 1]], qf(1, 4));
        assert_eq!(terms[&vec![1, 0]], qf(-1, 4));
    }

    fn filiform() -> BchGroup {
        let mut br = vec![vec![Vector::zero(); 4]; 4];
        br[0][1] = Vector::basis(2);
        br[1][0] = Vector::single(2, q(-1));
        br[0][2] = Vector::basis(3);
        br[2][0] = Vector::single(3, q(-1));
        BchGroup::from_brackets(br)
    }

    #[test]
    fn bch_group_laws() {
        let g = filiform();
        assert_eq!(g.class, 3);
        let x = Vector::single(0, q(2));
        let mut y = Vector::single(1, qf(1, 2));
        y.add_term(2, q(-1));
        let mut z = Vector::single(0, q(-1));
        z.add_term(3, q(5));
        assert_eq!(
            g.product(&g.product(&x, &y), &z),
            g.product(&x, &g.product(&y, &z))
        );
        assert!(g.product(&x, &g.inverse(&x)).is_zero());
        // x * y = x + y + [x,y]/2 + ([x,[x,y]] − [y,[x,y]])/12
        let xy = g.bracket(&x, &y);
        let mut expect = x.clone();
        expect.add(&y);
        expect.add_scaled(&xy, &qf(1, 2));
        expect.add_scaled(&g.bracket(&x, &xy), &qf(1, 12));
        expect.add_scaled(&g.bracket(&y, &xy), &qf(-1, 12));
        assert_eq!(g.product(&x, &y), expect);
    }

    #[test]
    fn nerve_of_cp2() {
        let l = cp2();
        let tau = MaurerCartanElement::zero();
        let p2 = nerve_homotopy_group(&l, &tau, 1).unwrap();
        let p5 = nerve_homotopy_group(&l, &tau, 4).unwrap();
        let p3 = nerve_homotopy_group(&l, &tau, 2).unwrap();
        assert_eq!((p2.rank(), p3.rank(), p5.rank()), (1, 0, 1));
        match nerve_homotopy_group(&l, &tau, 0).unwrap() {
            NerveGroup::Nilpotent(g) => assert_eq!(g.dim(), 0),
            _ => panic!(),
        }
    }
}
