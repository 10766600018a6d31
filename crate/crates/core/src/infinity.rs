//! A∞, C∞ and L∞ structures, their bar constructions, and ∞-morphisms.
//!
//! Operations are stored in the unsuspended convention: `m_n : A^{⊗n} → A` of degree `n − 2`.
//! On the bar side the components act on the suspension `sA` and have degree −1 (structures) or
//! 0 (morphisms). The translation is
//!
//! - A∞/C∞: `b_n(sa_1…sa_n) = −(−1)^{Σ_j (n−j)|a_j|} s m_n(a_1,…,a_n)`,
//! - L∞:    `b_n(sx_1…sx_n) = −(−1)^{Σ_j (n−j)|sx_j|} s l_n(x_1,…,x_n)`,
//!
//! with `m_1 = l_1 = d`, so that `b_1` is the differential `d(sv) = −s dv` of `sA`. Morphism
//! components use the same sign without the leading minus.

use crate::free::{
    all_words, koszul_sign, reorder_sign, shuffles, sorted_words, subsets, sym_canonical, CoKind,
    ShuffleQuotient, Word,
};
use crate::linalg::{build_contraction, Complex, GradedSpace, SparseMap};
use crate::q::{Lin, Vector, Q};
use crate::Error;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    Assoc,
    Comm,
    Lie,
}

impl Flavor {
    pub fn bar_kind(self) -> CoKind {
        match self {
            Flavor::Assoc => CoKind::Tensor,
            Flavor::Comm => CoKind::LieCo,
            Flavor::Lie => CoKind::Symmetric,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Assoc => "A-infinity",
            Flavor::Comm => "C-infinity",
            Flavor::Lie => "L-infinity",
        }
    }
}

/// Values of an n-ary operation on basis tuples; absent tuples map to zero.
pub type OpTable = BTreeMap<Word, Vector>;

/// Why operations above the arity bound vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Output degrees of `n`-ary operations miss the degree support of the space for all `n` above the bound.
    DegreeSupport(usize),
    /// The operations above the bound are declared zero (strict algebras, explicit finite data).
    Declared(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityStructure {
    pub flavor: Flavor,
    pub space: GradedSpace,
    pub d: SparseMap,
    pub ops: BTreeMap<usize, OpTable>,
    pub arity_bound: usize,
    pub certificate: Option<Certificate>,
}

/// Parity sign of the décalage for a tuple of letters with the given degrees.
fn decal_neg(degs: &[i64]) -> bool {
    let n = degs.len();
    let mut e = 0i64;
    for (j, d) in degs.iter().enumerate() {
        e += (n - 1 - j) as i64 * d;
    }
    e.rem_euclid(2) == 1
}

/// Least `N ≥ 1` such that no operation of arity `> N` can hit the degree support, if one exists.
pub fn degree_support_bound(space: &GradedSpace) -> Option<usize> {
    degree_support_bound_between(space, space, -2)
}

/// Least `N ≥ 1` such that `Σ(|a_i|+1) + offset` misses the degrees of `target` for every
/// tuple of more than `N` letters of `source`. Operations have offset −2, morphism
/// components −1.
pub fn degree_support_bound_between(
    source: &GradedSpace,
    target: &GradedSpace,
    offset: i64,
) -> Option<usize> {
    let sdegs: BTreeSet<i64> = source.degrees().iter().map(|d| d + 1).collect();
    let targets = target.degrees();
    if sdegs.is_empty() || targets.is_empty() {
        return Some(1);
    }
    let (lo, hi) = (*sdegs.iter().next().unwrap(), *sdegs.iter().last().unwrap());
    let (tlo, thi) = (
        *targets.iter().next().unwrap(),
        *targets.iter().last().unwrap(),
    );
    let kmax: i64 = if lo >= 1 {
        (thi - offset) / lo
    } else if hi <= -1 {
        (offset - tlo) / (-hi)
    } else {
        return None;
    };
    let mut sums: BTreeSet<i64> = BTreeSet::from([0]);
    let mut best = 1usize;
    for k in 1..=kmax.max(1) as usize {
        sums = sums
            .iter()
            .flat_map(|a| sdegs.iter().map(move |b| a + b))
            .collect();
        if sums.iter().any(|s| targets.contains(&(s + offset))) {
            best = k;
        }
    }
    Some(best)
}

impl InfinityStructure {
    /// Structure with zero differential and no operations; the bound comes from degrees when
    /// possible and is otherwise declared as 2.
    pub fn new(flavor: Flavor, space: GradedSpace) -> Self {
        let d = SparseMap::zero(&space, &space, -1);
        let mut s = InfinityStructure {
            flavor,
            space,
            d,
            ops: BTreeMap::new(),
            arity_bound: 2,
            certificate: None,
        };
        s.certify_declared(2);
        s
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.space.deg(i)
    }

    /// Use the degree-support certificate if available, else declare the given bound.
    pub fn certify_declared(&mut self, bound: usize) {
        let top = self.ops.keys().cloned().max().unwrap_or(1).max(bound);
        match degree_support_bound(&self.space) {
            Some(n) if n <= top => {
                self.arity_bound = top;
                self.certificate = Some(Certificate::DegreeSupport(n));
            }
            _ => {
                self.arity_bound = top;
                self.certificate = Some(Certificate::Declared(top));
            }
        }
    }

    /// Certify vanishing from degrees alone; errors if degrees allow unbounded arities.
    pub fn certify_by_degrees(&mut self) -> Result<usize, Error> {
        match degree_support_bound(&self.space) {
            Some(n) => {
                let top = self.ops.keys().cloned().max().unwrap_or(1);
                if top > n.max(1) {
                    let bad = self
                        .ops
                        .iter()
                        .filter(|(k, t)| **k > n && !t.is_empty())
                        .count();
                    if bad > 0 {
                        return Err(Error::Domain(format!(
                            "operations above the degree bound {} are present",
                            n
                        )));
                    }
                }
                self.arity_bound = n.max(1);
                self.certificate = Some(Certificate::DegreeSupport(n));
                Ok(n)
            }
            None => Err(Error::Domain(
                "no finite arity bound is forced by the degree support".into(),
            )),
        }
    }

    pub fn set_d(&mut self, src: usize, v: Vector) {
        self.d.cols[src] = v;
    }

    /// Set `m_n(word) = v` without symmetrizing.
    pub fn set_raw(&mut self, n: usize, word: Word, v: Vector) {
        assert_eq!(word.len(), n);
        let t = self.ops.entry(n).or_default();
        if v.is_zero() {
            t.remove(&word);
        } else {
            t.insert(word, v);
        }
        if n > self.arity_bound {
            self.arity_bound = n;
            if let Some(Certificate::Declared(_)) = self.certificate {
                self.certificate = Some(Certificate::Declared(n));
            }
        }
    }

    /// Set `l_n(word) = v` and fill the whole orbit using graded antisymmetry.
    pub fn set_antisymmetric(&mut self, n: usize, word: Word, v: Vector) {
        let degs: Vec<i64> = word.iter().map(|&i| self.deg(i)).collect();
        for order in permutations(n) {
            let w: Word = order.iter().map(|&k| word[k]).collect();
            let s = reorder_sign(&order, &degs) * crate::free::perm_sign(&order);
            let val = if s < 0 { v.neg() } else { v.clone() };
            self.set_raw(n, w, val);
        }
    }

    /// Set a graded commutative binary product `m_2(a,b) = v`, filling `m_2(b,a)`.
    pub fn set_commutative(&mut self, a: usize, b: usize, v: Vector) {
        self.set_raw(2, vec![a, b], v.clone());
        if a != b {
            let odd = (self.deg(a) * self.deg(b)).rem_euclid(2) == 1;
            self.set_raw(2, vec![b, a], if odd { v.neg() } else { v });
        }
    }

    /// `m_n(word)`, with `m_1 = d`.
    pub fn op(&self, n: usize, word: &[usize]) -> Vector {
        if n == 1 {
            return self.d.cols[word[0]].clone();
        }
        self.ops
            .get(&n)
            .and_then(|t| t.get(word))
            .cloned()
            .unwrap_or_default()
    }

    pub fn op_is_zero(&self, n: usize) -> bool {
        if n == 1 {
            return self.d.is_zero();
        }
        self.ops.get(&n).map(|t| t.is_empty()).unwrap_or(true)
    }

    /// Highest arity with a nonzero operation (1 if none).
    pub fn top_arity(&self) -> usize {
        self.ops
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(k, _)| *k)
            .max()
            .unwrap_or(1)
    }

    /// `m_n(prefix, v, suffix)` for a vector `v` in the slot.
    fn op_slot(&self, n: usize, prefix: &[usize], v: &Vector, suffix: &[usize]) -> Vector {
        let mut out = Vector::zero();
        for (k, c) in v.iter() {
            let mut w = prefix.to_vec();
            w.push(*k);
            w.extend_from_slice(suffix);
            out.add_scaled(&self.op(n, &w), c);
        }
        out
    }

    fn word_deg(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.deg(i)).sum()
    }

    /// The A∞ relation `Σ (−1)^{r+st} m_{r+1+t}(id^r ⊗ m_s ⊗ id^t)` evaluated on a tuple.
    pub fn ainfty_relation(&self, a: &[usize]) -> Vector {
        let n = a.len();
        let mut acc = Vector::zero();
        for s in 1..=n {
            for r in 0..=n - s {
                let t = n - r - s;
                let u = r + 1 + t;
                if self.op_is_zero(s) || self.op_is_zero(u) {
                    continue;
                }
                let inner = self.op(s, &a[r..r + s]);
                if inner.is_zero() {
                    continue;
                }
                let e = (r + s * t) as i64 + (s as i64 - 2) * self.word_deg(&a[..r]);
                let outer = self.op_slot(u, &a[..r], &inner, &a[r + s..]);
                acc.add_scaled(&outer, &crate::q::sign(e.rem_euclid(2) == 1));
            }
        }
        acc
    }

    /// `∂(l_n) − Σ sgn(σ)(−1)^{p(q−1)} l_p(l_q ⊗ id)σ⁻¹` evaluated on a tuple.
    pub fn linfty_relation(&self, a: &[usize]) -> Vector {
        let n = a.len();
        let mut acc = Vector::zero();
        if !self.op_is_zero(n) {
            acc.add(&self.d.apply(&self.op(n, a)));
            let mut pre = 0i64;
            for i in 0..n {
                let dv = self.d.cols[a[i]].clone();
                if !dv.is_zero() {
                    let term = self.op_slot(n, &a[..i], &dv, &a[i + 1..]);
                    let e = n as i64 + pre;
                    acc.add_scaled(&term, &-crate::q::sign(e.rem_euclid(2) == 1));
                }
                pre += self.deg(a[i]);
            }
        }
        let degs: Vec<i64> = a.iter().map(|&i| self.deg(i)).collect();
        for q in 2..n {
            let p = n + 1 - q;
            if p < 2 || self.op_is_zero(p) || self.op_is_zero(q) {
                continue;
            }
            for (perm, sg) in shuffles(q as i64, (p - 1) as i64).unwrap().elements {
                let b: Word = perm.iter().map(|&k| a[k]).collect();
                let ks = reorder_sign(&perm, &degs);
                let inner = self.op(q, &b[..q]);
                if inner.is_zero() {
                    continue;
                }
                let outer = self.op_slot(p, &[], &inner, &b[q..]);
                let e = (p * (q - 1)) as i64;
                let s = sg * ks * if e % 2 == 1 { -1 } else { 1 };
                acc.add_scaled(&outer, &-Q::from_integer((s as i64).into()));
            }
        }
        acc
    }

    /// Words of length `n` whose degree allows a nonzero value of a degree-`shift` operation.
    pub fn words_with_output(&self, n: usize, shift: i64, sorted: bool) -> Vec<Word> {
        let targets = self.space.degrees();
        let dims: Vec<i64> = self.space.degrees().into_iter().collect();
        if dims.is_empty() {
            return vec![];
        }
        let (lo, hi) = (dims[0], *dims.last().unwrap());
        let mut out = Vec::new();
        let mut cur = Vec::new();
        #[allow(clippy::too_many_arguments)]
        fn rec(
            s: &InfinityStructure,
            n: usize,
            sorted: bool,
            sum: i64,
            shift: i64,
            lo: i64,
            hi: i64,
            targets: &BTreeSet<i64>,
            cur: &mut Word,
            out: &mut Vec<Word>,
        ) {
            let rem = (n - cur.len()) as i64;
            if rem == 0 {
                if targets.contains(&(sum + shift)) {
                    out.push(cur.clone());
                }
                return;
            }
            let tmin = *targets.iter().next().unwrap();
            let tmax = *targets.iter().last().unwrap();
            if sum + rem * lo + shift > tmax || sum + rem * hi + shift < tmin {
                return;
            }
            let start = if sorted {
                cur.last().cloned().unwrap_or(0)
            } else {
                0
            };
            for i in start..s.dim() {
                cur.push(i);
                rec(
                    s,
                    n,
                    sorted,
                    sum + s.deg(i),
                    shift,
                    lo,
                    hi,
                    targets,
                    cur,
                    out,
                );
                cur.pop();
            }
        }
        rec(
            self, n, sorted, 0, shift, lo, hi, &targets, &mut cur, &mut out,
        );
        out
    }

    /// Bar component `b_n` on a word of suspended letters (same indices), output in `sA`.
    pub fn bar_component(&self, word: &[usize]) -> Vector {
        let n = word.len();
        let v = self.op(n, word);
        if v.is_zero() {
            return v;
        }
        let degs: Vec<i64> = match self.flavor {
            Flavor::Lie => word.iter().map(|&i| self.deg(i) + 1).collect(),
            _ => word.iter().map(|&i| self.deg(i)).collect(),
        };
        if decal_neg(&degs) {
            v
        } else {
            v.neg()
        }
    }

    /// Inverse of `bar_component`: recover `m_n(word)` from `b_n(word)`.
    pub fn op_from_bar(flavor: Flavor, space: &GradedSpace, word: &[usize], b: &Vector) -> Vector {
        let degs: Vec<i64> = match flavor {
            Flavor::Lie => word.iter().map(|&i| space.deg(i) + 1).collect(),
            _ => word.iter().map(|&i| space.deg(i)).collect(),
        };
        if decal_neg(&degs) {
            b.clone()
        } else {
            b.neg()
        }
    }

    pub fn sdeg(&self, i: usize) -> i64 {
        self.deg(i) + 1
    }

    /// `(d + b)` (or `b` alone when `include_d` is false) applied to a bar word.
    /// Tensor words for A∞/C∞, sorted symmetric words for L∞.
    pub fn coderivation_apply(&self, word: &[usize], include_d: bool) -> Lin<Word> {
        let n = word.len();
        let mut out = Lin::zero();
        let lo = if include_d { 1 } else { 2 };
        match self.flavor {
            Flavor::Assoc | Flavor::Comm => {
                let mut pre = 0i64;
                for r in 0..n {
                    for k in lo..=(n - r) {
                        if self.op_is_zero(k) {
                            continue;
                        }
                        let v = self.bar_component(&word[r..r + k]);
                        let sg = crate::q::sign(pre.rem_euclid(2) == 1);
                        for (x, c) in v.iter() {
                            let mut w = word[..r].to_vec();
                            w.push(*x);
                            w.extend_from_slice(&word[r + k..]);
                            out.add_term(w, c * &sg);
                        }
                    }
                    pre += self.sdeg(word[r]);
                }
            }
            Flavor::Lie => {
                let sd: Vec<i64> = word.iter().map(|&i| self.sdeg(i)).collect();
                for k in lo..=n {
                    if self.op_is_zero(k) {
                        continue;
                    }
                    for sub in subsets(n, k) {
                        let rest: Vec<usize> = (0..n).filter(|i| !sub.contains(i)).collect();
                        let mut order = sub.clone();
                        order.extend(rest.iter().cloned());
                        let sg = reorder_sign(&order, &sd);
                        let inw: Word = sub.iter().map(|&i| word[i]).collect();
                        let v = self.bar_component(&inw);
                        for (x, c) in v.iter() {
                            let mut w = vec![*x];
                            w.extend(rest.iter().map(|&i| word[i]));
                            if let Some((cw, s2)) = sym_canonical(&w, &|i| self.sdeg(i)) {
                                let s = sg * s2;
                                out.add_term(cw, if s < 0 { -c.clone() } else { c.clone() });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Full validity report: symmetry constraints and structure equations through the bound.
    pub fn check_structure(&self) -> Result<StructureReport, Error> {
        let Some(cert) = self.certificate.clone() else {
            return Err(Error::Domain(
                "structure has no vanishing certificate".into(),
            ));
        };
        let bound = self.arity_bound;
        let mut failures = Vec::new();
        let name = |w: &[usize]| -> Vec<String> {
            w.iter().map(|&i| self.space.name(i).to_string()).collect()
        };
        // homogeneity
        if !self.d.is_homogeneous() {
            failures.push(Failure {
                identity: "d has degree -1".into(),
                inputs: vec![],
            });
        }
        for (n, t) in &self.ops {
            for (w, v) in t {
                let want = self.word_deg(w) + *n as i64 - 2;
                if v.iter().any(|(i, _)| self.deg(*i) != want) {
                    failures.push(Failure {
                        identity: format!("m{} has degree {}", n, n - 2),
                        inputs: name(w),
                    });
                }
            }
        }
        match self.flavor {
            Flavor::Lie => {
                for (n, t) in &self.ops {
                    for (w, v) in t {
                        let degs: Vec<i64> = w.iter().map(|&i| self.deg(i)).collect();
                        for i in 0..n - 1 {
                            let mut sw = w.clone();
                            sw.swap(i, i + 1);
                            let odd = (degs[i] * degs[i + 1]).rem_euclid(2) == 1;
                            let want = if odd { v.clone() } else { v.neg() };
                            if self.op(*n, &sw) != want {
                                failures.push(Failure {
                                    identity: format!("l{} antisymmetric", n),
                                    inputs: name(w),
                                });
                                break;
                            }
                        }
                    }
                }
            }
            Flavor::Comm => {
                for n in 2..=bound {
                    if self.op_is_zero(n) {
                        continue;
                    }
                    for w in self.words_with_output(n, n as i64 - 2, false) {
                        let degs: Vec<i64> = w.iter().map(|&i| self.deg(i)).collect();
                        for p in 1..n {
                            let acc = shuffle_sum(&w, p, &degs, &|x| self.op(n, x));
                            if !acc.is_zero() {
                                let id = if n == 2 {
                                    "m2 = m2∘τ".to_string()
                                } else {
                                    format!("m{}∘τ({},{}) = 0", n, p, n - p)
                                };
                                failures.push(Failure {
                                    identity: id,
                                    inputs: name(&w),
                                });
                            }
                        }
                    }
                }
            }
            Flavor::Assoc => {}
        }
        if !self.d.compose(&self.d).is_zero() {
            failures.push(Failure {
                identity: "d∘d = 0".into(),
                inputs: vec![],
            });
        }
        let top = 2 * bound;
        for n in 2..=top {
            let sorted = self.flavor == Flavor::Lie;
            for w in self.words_with_output(n, n as i64 - 3, sorted) {
                let v = match self.flavor {
                    Flavor::Lie => self.linfty_relation(&w),
                    _ => self.ainfty_relation(&w),
                };
                if !v.is_zero() {
                    failures.push(Failure {
                        identity: format!("structure equation n = {}", n),
                        inputs: name(&w),
                    });
                }
            }
        }
        Ok(StructureReport {
            ok: failures.is_empty(),
            bound,
            certificate: cert,
            failures,
        })
    }

    /// `(d + b)² = 0` on bar words up to the given weight.
    pub fn bar_squares_to_zero(&self, max_weight: usize) -> bool {
        for n in 1..=max_weight {
            let words = match self.flavor {
                Flavor::Lie => sorted_words(self.dim(), n)
                    .into_iter()
                    .filter(|w| sym_canonical(w, &|i| self.sdeg(i)).is_some())
                    .collect::<Vec<_>>(),
                _ => all_words(self.dim(), n),
            };
            for w in words {
                let once = self.coderivation_apply(&w, true);
                let twice = once.apply(|u| self.coderivation_apply(u, true));
                if !twice.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The bar construction truncated at `max_weight`: `T^c(sA)` for A∞, the Harrison complex
    /// for C∞ and the Chevalley–Eilenberg complex for L∞, with differential `d + b`.
    pub fn bar(&self, max_weight: usize) -> BarComplex {
        BarComplex::build(self, max_weight, true)
    }

    /// The coderivation `b` (operations of arity ≥ 2) on the bar space up to `max_weight`.
    pub fn coderivation(&self, max_weight: usize) -> BarComplex {
        BarComplex::build(self, max_weight, false)
    }

    /// Transport of structure along a degree-preserving isomorphism given by its matrix and inverse.
    pub fn conjugate(&self, phi: &SparseMap, phi_inv: &SparseMap) -> InfinityStructure {
        let target = phi.target.clone();
        let mut out = InfinityStructure::new(self.flavor, target.clone());
        out.d = phi.compose(&self.d).compose(phi_inv);
        out.d.source = target.clone();
        out.d.target = target.clone();
        for n in 2..=self.top_arity() {
            if self.op_is_zero(n) {
                continue;
            }
            for w in all_words(target.dim(), n) {
                // expand phi_inv on each slot
                let mut acc: Lin<Word> = Lin::basis(vec![]);
                for &x in &w {
                    let col = &phi_inv.cols[x];
                    let mut next = Lin::zero();
                    for (u, c) in acc.iter() {
                        for (y, e) in col.iter() {
                            let mut uu = u.clone();
                            uu.push(*y);
                            next.add_term(uu, c * e);
                        }
                    }
                    acc = next;
                }
                let v = acc.apply(|u| self.op(n, u));
                let img = phi.apply(&v);
                out.set_raw(n, w, img);
            }
        }
        out.arity_bound = self.arity_bound;
        out.certificate = self.certificate.clone();
        out
    }

    /// Binary part only (the strict structure with the same `d` and `m_2`).
    pub fn binary_part(&self) -> InfinityStructure {
        let mut s = self.clone();
        s.ops.retain(|k, _| *k == 2);
        s
    }

    /// The linear complex `(A, d)`.
    pub fn complex(&self) -> Complex {
        Complex::new(self.space.clone(), self.d.clone())
    }

    pub fn is_minimal(&self) -> bool {
        self.d.is_zero()
    }

    pub fn describe_ops(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (n, t) in &self.ops {
            for (w, v) in t {
                if self.flavor == Flavor::Lie && !w.windows(2).all(|p| p[0] <= p[1]) {
                    continue;
                }
                let args: Vec<&str> = w.iter().map(|&i| self.space.name(i)).collect();
                out.push(format!(
                    "{}{}({}) = {}",
                    if self.flavor == Flavor::Lie { "l" } else { "m" },
                    n,
                    args.join(","),
                    self.space.fmt_vec(v)
                ));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub identity: String,
    pub inputs: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub ok: bool,
    pub bound: usize,
    pub certificate: Certificate,
    pub failures: Vec<Failure>,
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// A bar complex with an explicit basis of words.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub kind: CoKind,
    pub words: Vec<Word>,
    pub index: BTreeMap<Word, usize>,
    pub complex: Complex,
}

impl BarComplex {
    fn build(s: &InfinityStructure, max_weight: usize, include_d: bool) -> BarComplex {
        let kind = s.flavor.bar_kind();
        let sd = |i: usize| s.sdeg(i);
        let mut words = Vec::new();
        let mut quotients = Vec::new();
        for w in 1..=max_weight {
            match kind {
                CoKind::Tensor => words.extend(all_words(s.dim(), w)),
                CoKind::Symmetric => words.extend(
                    sorted_words(s.dim(), w)
                        .into_iter()
                        .filter(|x| sym_canonical(x, &sd).is_some()),
                ),
                CoKind::LieCo => {
                    let q = ShuffleQuotient::new(s.dim(), w, &sd);
                    words.extend(q.section.iter().cloned());
                    quotients.push(q);
                }
            }
        }
        let index: BTreeMap<Word, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut space = GradedSpace::new();
        for w in &words {
            let names: Vec<&str> = w.iter().map(|&i| s.space.name(i)).collect();
            let label = match kind {
                CoKind::Symmetric => format!("({})", names.join(".")),
                _ => format!("[{}]", names.join("|")),
            };
            space.push(&label, w.iter().map(|&i| sd(i)).sum());
        }
        let mut d = SparseMap::zero(&space, &space, -1);
        for (j, w) in words.iter().enumerate() {
            let img = s.coderivation_apply(w, include_d);
            let col = match kind {
                CoKind::LieCo => {
                    let mut by_weight: BTreeMap<usize, Lin<Word>> = BTreeMap::new();
                    for (u, c) in img.iter() {
                        by_weight
                            .entry(u.len())
                            .or_default()
                            .add_term(u.clone(), c.clone());
                    }
                    let mut col = Vector::zero();
                    for (wt, t) in by_weight {
                        let q = &quotients[wt - 1];
                        for (k, c) in q.project(&t).iter() {
                            col.add_term(index[&q.section[*k]], c.clone());
                        }
                    }
                    col
                }
                _ => img.map_keys(|u| index.get(u).map(|&k| (k, Q::one()))),
            };
            d.cols[j] = col;
        }
        BarComplex {
            kind,
            words,
            index,
            complex: Complex::new(space, d),
        }
    }
}

/// Read a structure back from a coderivation on its bar space; rejects maps that are not the
/// coderivation generated by their own linear part.
pub fn ops_from_coderivation(
    flavor: Flavor,
    space: &GradedSpace,
    bar: &BarComplex,
) -> Result<InfinityStructure, Error> {
    let mut s = InfinityStructure::new(flavor, space.clone());
    let mut top = 1;
    for (j, w) in bar.words.iter().enumerate() {
        let col = &bar.complex.d.cols[j];
        let lin: Vector = col.map_keys(|k| {
            let u = &bar.words[*k];
            if u.len() == 1 {
                Some((u[0], Q::one()))
            } else {
                None
            }
        });
        if lin.is_zero() || w.len() < 2 {
            continue;
        }
        let m = InfinityStructure::op_from_bar(flavor, space, w, &lin);
        top = top.max(w.len());
        match flavor {
            Flavor::Lie => s.set_antisymmetric(w.len(), w.clone(), m),
            _ => s.set_raw(w.len(), w.clone(), m),
        }
    }
    s.certify_declared(top);
    let again = s.coderivation(bar.words.iter().map(|w| w.len()).max().unwrap_or(1));
    if flavor != Flavor::Comm && again.complex.d != bar.complex.d {
        return Err(Error::Domain(
            "map is not a coderivation determined by its linear part".into(),
        ));
    }
    Ok(s)
}

/// An ∞-morphism given by components `f_n` of degree `n − 1`.
#[derive(Clone, Debug)]
pub struct InfinityMorphism {
    pub source: InfinityStructure,
    pub target: InfinityStructure,
    pub components: BTreeMap<usize, OpTable>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismKind {
    Isomorphism,
    QuasiIsomorphism,
    Plain,
}

#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub ok: bool,
    pub bound: usize,
    pub kind: MorphismKind,
    pub failures: Vec<Failure>,
}

impl InfinityMorphism {
    pub fn identity(s: &InfinityStructure) -> Self {
        let mut c = OpTable::new();
        for i in 0..s.dim() {
            c.insert(vec![i], Vector::basis(i));
        }
        InfinityMorphism {
            source: s.clone(),
            target: s.clone(),
            components: BTreeMap::from([(1, c)]),
        }
    }

    pub fn from_linear(
        source: &InfinityStructure,
        target: &InfinityStructure,
        f1: &SparseMap,
    ) -> Self {
        let mut c = OpTable::new();
        for i in 0..source.dim() {
            if !f1.cols[i].is_zero() {
                c.insert(vec![i], f1.cols[i].clone());
            }
        }
        InfinityMorphism {
            source: source.clone(),
            target: target.clone(),
            components: BTreeMap::from([(1, c)]),
        }
    }

    pub fn component(&self, n: usize, w: &[usize]) -> Vector {
        self.components
            .get(&n)
            .and_then(|t| t.get(w))
            .cloned()
            .unwrap_or_default()
    }

    pub fn set(&mut self, n: usize, w: Word, v: Vector) {
        let t = self.components.entry(n).or_default();
        if v.is_zero() {
            t.remove(&w);
        } else {
            t.insert(w, v);
        }
    }

    pub fn top_arity(&self) -> usize {
        self.components
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(k, _)| *k)
            .max()
            .unwrap_or(1)
    }

    pub fn linear_part(&self) -> SparseMap {
        SparseMap::from_fn(&self.source.space, &self.target.space, 0, |i| {
            self.component(1, &[i])
        })
    }

    fn flavor(&self) -> Flavor {
        self.source.flavor
    }

    /// Bar component `F_n` (degree 0) on a word of suspended letters.
    pub fn bar_component(&self, w: &[usize]) -> Vector {
        let v = self.component(w.len(), w);
        if v.is_zero() {
            return v;
        }
        let degs: Vec<i64> = match self.flavor() {
            Flavor::Lie => w.iter().map(|&i| self.source.deg(i) + 1).collect(),
            _ => w.iter().map(|&i| self.source.deg(i)).collect(),
        };
        if decal_neg(&degs) {
            v.neg()
        } else {
            v
        }
    }

    pub fn from_bar_value(flavor: Flavor, source: &GradedSpace, w: &[usize], b: &Vector) -> Vector {
        let degs: Vec<i64> = match flavor {
            Flavor::Lie => w.iter().map(|&i| source.deg(i) + 1).collect(),
            _ => w.iter().map(|&i| source.deg(i)).collect(),
        };
        if decal_neg(&degs) {
            b.neg()
        } else {
            b.clone()
        }
    }

    /// The induced coalgebra map on a bar word; all weights.
    pub fn coalgebra_apply(&self, word: &[usize]) -> Lin<Word> {
        let n = word.len();
        let mut out = Lin::zero();
        match self.flavor() {
            Flavor::Assoc | Flavor::Comm => {
                for comp in compositions(n) {
                    let mut acc: Lin<Word> = Lin::basis(vec![]);
                    let mut pos = 0;
                    for &c in &comp {
                        let v = self.bar_component(&word[pos..pos + c]);
                        pos += c;
                        acc = tensor_append(&acc, &v);
                        if acc.is_zero() {
                            break;
                        }
                    }
                    out.add(&acc);
                }
            }
            Flavor::Lie => {
                let sd: Vec<i64> = word.iter().map(|&i| self.source.sdeg(i)).collect();
                let tsd = |i: usize| self.target.sdeg(i);
                for blocks in set_partitions(n) {
                    let order: Vec<usize> = blocks.iter().flatten().cloned().collect();
                    let sg = reorder_sign(&order, &sd);
                    let mut acc: Lin<Word> = Lin::basis(vec![]);
                    for b in &blocks {
                        let w: Word = b.iter().map(|&i| word[i]).collect();
                        let v = self.bar_component(&w);
                        acc = tensor_append(&acc, &v);
                        if acc.is_zero() {
                            break;
                        }
                    }
                    for (u, c) in acc.iter() {
                        if let Some((cw, s2)) = sym_canonical(u, &tsd) {
                            let s = sg * s2;
                            out.add_term(cw, if s < 0 { -c.clone() } else { c.clone() });
                        }
                    }
                }
            }
        }
        out
    }

    /// The morphism equation `F(d+b) = (d'+b')F`, projected to weight 1, on one word.
    pub fn equation(&self, word: &[usize]) -> Vector {
        let lhs = self.source.coderivation_apply(word, true);
        let mut acc = Vector::zero();
        for (u, c) in lhs.iter() {
            acc.add_scaled(&self.bar_component(u), c);
        }
        let fw = self.coalgebra_apply(word);
        for (u, c) in fw.iter() {
            acc.add_scaled(&self.target.bar_component(u), &-c.clone());
        }
        acc
    }

    pub fn check_morphism(&self) -> Result<MorphismReport, Error> {
        if self.source.flavor != self.target.flavor {
            return Err(Error::Domain("flavor mismatch".into()));
        }
        let bound = self.top_arity() + self.source.arity_bound.max(self.target.arity_bound);
        let mut failures = Vec::new();
        let sorted = self.flavor() == Flavor::Lie;
        for n in 1..=bound {
            let words = if sorted {
                sorted_words(self.source.dim(), n)
                    .into_iter()
                    .filter(|w| sym_canonical(w, &|i| self.source.sdeg(i)).is_some())
                    .collect::<Vec<_>>()
            } else {
                all_words(self.source.dim(), n)
            };
            for w in words {
                // the equation has degree n − 2 from A^{⊗n} to A'
                let d = self.source.word_deg(&w) + n as i64 - 2;
                if !self.target.space.degrees().contains(&d) {
                    continue;
                }
                if !self.equation(&w).is_zero() {
                    failures.push(Failure {
                        identity: format!("morphism equation n = {}", n),
                        inputs: w
                            .iter()
                            .map(|&i| self.source.space.name(i).to_string())
                            .collect(),
                    });
                }
            }
        }
        if self.flavor() == Flavor::Comm {
            for (&n, t) in &self.components {
                if n < 2 || t.is_empty() {
                    continue;
                }
                for w in all_words(self.source.dim(), n) {
                    let degs: Vec<i64> = w.iter().map(|&i| self.source.deg(i)).collect();
                    for p in 1..n {
                        if !shuffle_sum(&w, p, &degs, &|x| self.component(n, x)).is_zero() {
                            failures.push(Failure {
                                identity: format!("f{}∘τ({},{}) = 0", n, p, n - p),
                                inputs: w
                                    .iter()
                                    .map(|&i| self.source.space.name(i).to_string())
                                    .collect(),
                            });
                        }
                    }
                }
            }
        }
        let kind = classify_linear(
            &self.linear_part(),
            &self.source.complex(),
            &self.target.complex(),
        );
        Ok(MorphismReport {
            ok: failures.is_empty(),
            bound,
            kind,
            failures,
        })
    }
}

/// `Σ_{σ ∈ Sh(p, n−p)} ±g(σ·w)`, with the Koszul sign of the shuffle on `degs`.
pub fn shuffle_sum(w: &[usize], p: usize, degs: &[i64], g: &dyn Fn(&[usize]) -> Vector) -> Vector {
    let n = w.len();
    let mut acc = Vector::zero();
    for (perm, sg) in shuffles(p as i64, (n - p) as i64).unwrap().elements {
        let mut x = vec![0; n];
        for (i, &pi) in perm.iter().enumerate() {
            x[pi] = w[i];
        }
        let s = sg * koszul_sign(&perm, degs);
        acc.add_scaled(&g(&x), &crate::q::q(s as i64));
    }
    acc
}

fn tensor_append(acc: &Lin<Word>, v: &Vector) -> Lin<Word> {
    let mut out = Lin::zero();
    for (u, c) in acc.iter() {
        for (x, e) in v.iter() {
            let mut w = u.clone();
            w.push(*x);
            out.add_term(w, c * e);
        }
    }
    out
}

/// Compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

/// Set partitions of `0..n`; blocks increasing and ordered by their least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// Whether a chain map is an isomorphism, a quasi-isomorphism, or neither.
pub fn classify_linear(f: &SparseMap, src: &Complex, tgt: &Complex) -> MorphismKind {
    let n = src.space.dim();
    if n == tgt.space.dim() && crate::linalg::rank_of(&f.cols) == n {
        return MorphismKind::Isomorphism;
    }
    let cs = build_contraction(src);
    let ct = build_contraction(tgt);
    // induced map on homology: f_t ∘ f ∘ g_s
    let hm = ct.f.compose(f).compose(&cs.g);
    let k = hm.source.dim();
    if k == hm.target.dim() && crate::linalg::rank_of(&hm.cols) == k {
        MorphismKind::QuasiIsomorphism
    } else {
        MorphismKind::Plain
    }
}

/// Composite `f ∘ g` (apply `g` first).
pub fn compose_morphisms(
    f: &InfinityMorphism,
    g: &InfinityMorphism,
) -> Result<InfinityMorphism, Error> {
    if f.source.flavor != g.source.flavor {
        return Err(Error::Domain("flavor mismatch".into()));
    }
    if f.source.space != g.target.space {
        return Err(Error::Domain("morphisms are not composable".into()));
    }
    let flavor = g.source.flavor;
    let top = f.top_arity() * g.top_arity();
    let mut out = InfinityMorphism {
        source: g.source.clone(),
        target: f.target.clone(),
        components: BTreeMap::new(),
    };
    for n in 1..=top {
        let words = if flavor == Flavor::Lie {
            sorted_words(g.source.dim(), n)
                .into_iter()
                .filter(|w| sym_canonical(w, &|i| g.source.sdeg(i)).is_some())
                .collect::<Vec<_>>()
        } else {
            all_words(g.source.dim(), n)
        };
        for w in words {
            let gw = g.coalgebra_apply(&w);
            let mut v = Vector::zero();
            for (u, c) in gw.iter() {
                v.add_scaled(&f.bar_component(u), c);
            }
            if v.is_zero() {
                continue;
            }
            let comp = InfinityMorphism::from_bar_value(flavor, &g.source.space, &w, &v);
            if flavor == Flavor::Lie {
                set_antisymmetric_component(&mut out, n, w, comp);
            } else {
                out.set(n, w, comp);
            }
        }
    }
    Ok(out)
}

/// Fill an antisymmetric morphism component over the orbit of a word.
pub fn set_antisymmetric_component(f: &mut InfinityMorphism, n: usize, word: Word, v: Vector) {
    let degs: Vec<i64> = word.iter().map(|&i| f.source.deg(i)).collect();
    for order in permutations(n) {
        let w: Word = order.iter().map(|&k| word[k]).collect();
        let s = reorder_sign(&order, &degs) * crate::free::perm_sign(&order);
        f.set(n, w, if s < 0 { v.neg() } else { v.clone() });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    /// Abelian dg Lie algebra on three generators with a Jacobi-satisfying bracket.
    fn heisenberg() -> InfinityStructure {
        let sp = GradedSpace::from_degrees(&[("a", 0), ("b", 0), ("c", 0)]);
        let mut s = InfinityStructure::new(Flavor::Lie, sp);
        s.set_antisymmetric(2, vec![0, 1], Vector::basis(2));
        s
    }

    #[test]
    fn strict_lie_passes() {
        let s = heisenberg();
        let r = s.check_structure().unwrap();
        assert!(r.ok, "{:?}", r.failures);
        assert!(s.bar_squares_to_zero(3));
    }

    #[test]
    fn jacobi_failure_detected() {
        // sl2-like bracket missing one relation
        let sp = GradedSpace::from_degrees(&[("e", 0), ("f", 0), ("h", 0)]);
        let mut s = InfinityStructure::new(Flavor::Lie, sp);
        s.set_antisymmetric(2, vec![0, 1], Vector::basis(2));
        s.set_antisymmetric(2, vec![2, 0], Vector::basis(0).scaled(&q(2)));
        s.set_antisymmetric(2, vec![2, 1], Vector::basis(1).scaled(&q(-3)));
        assert!(!s.check_structure().unwrap().ok);
        assert!(!s.bar_squares_to_zero(3));
    }

    #[test]
    fn noncommutative_product_fails_cinfty() {
        let sp = GradedSpace::from_degrees(&[("x", 0), ("y", 0)]);
        let mut s = InfinityStructure::new(Flavor::Comm, sp);
        s.set_raw(2, vec![0, 1], Vector::basis(1));
        let r = s.check_structure().unwrap();
        assert!(r.failures.iter().any(|f| f.identity == "m2 = m2∘τ"));
    }

    #[test]
    fn partitions_and_compositions() {
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(compositions(4).len(), 8);
    }

    #[test]
    fn degree_bounds() {
        let sp = GradedSpace::from_degrees(&[("a", 1), ("b", 4)]);
        assert_eq!(degree_support_bound(&sp), Some(3));
        let sp =
            GradedSpace::from_degrees(&[("x", -3), ("y", -3), ("u", -8), ("v", -8), ("w", -11)]);
        assert_eq!(degree_support_bound(&sp), Some(3));
        let sp = GradedSpace::from_degrees(&[("t", -1), ("x", 2)]);
        assert_eq!(degree_support_bound(&sp), None);
    }
}

#[cfg(test)]
mod sign_tests {
    use super::*;
    use crate::q::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_structure(
        flavor: Flavor,
        degs: &[i64],
        top: usize,
        rng: &mut ChaCha8Rng,
    ) -> InfinityStructure {
        let items: Vec<(String, i64)> = degs
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("e{}", i), *d))
            .collect();
        let refs: Vec<(&str, i64)> = items.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        let sp = GradedSpace::from_degrees(&refs);
        let mut s = InfinityStructure::new(flavor, sp.clone());
        let rand_in = |deg: i64, rng: &mut ChaCha8Rng| {
            let mut v = Vector::zero();
            for i in sp.in_degree(deg) {
                v.add_term(i, q(rng.gen_range(-2..=2)));
            }
            v
        };
        for i in 0..sp.dim() {
            let v = rand_in(sp.deg(i) - 1, rng);
            s.set_d(i, v);
        }
        for n in 2..=top {
            let sorted = flavor == Flavor::Lie;
            let words = if sorted {
                sorted_words(sp.dim(), n)
            } else {
                all_words(sp.dim(), n)
            };
            for w in words {
                if sorted && sym_canonical(&w, &|i| sp.deg(i) + 1).is_none() {
                    continue;
                }
                let od: i64 = w.iter().map(|&i| sp.deg(i)).sum::<i64>() + n as i64 - 2;
                let v = rand_in(od, rng);
                if sorted {
                    s.set_antisymmetric(n, w, v);
                } else {
                    s.set_raw(n, w, v);
                }
            }
        }
        s
    }

    /// The weight-one part of `(d+b)²` is the suspended structure equation, up to a sign that
    /// depends only on the arity and the décalage of the inputs.
    fn check_proportional(s: &InfinityStructure, nmax: usize) {
        for n in 1..=nmax {
            let mut ratio: Option<Q> = None;
            let words = if s.flavor == Flavor::Lie {
                sorted_words(s.dim(), n)
                    .into_iter()
                    .filter(|w| sym_canonical(w, &|i| s.sdeg(i)).is_some())
                    .collect::<Vec<_>>()
            } else {
                all_words(s.dim(), n)
            };
            for w in words {
                let once = s.coderivation_apply(&w, true);
                let mut sq = Vector::zero();
                for (u, c) in once.iter() {
                    sq.add_scaled(&s.bar_component(u), c);
                }
                let rel = match s.flavor {
                    Flavor::Lie if n == 1 => s.d.apply(&s.d.cols[w[0]]),
                    Flavor::Lie => s.linfty_relation(&w),
                    _ => s.ainfty_relation(&w),
                };
                let degs: Vec<i64> = match s.flavor {
                    Flavor::Lie => w.iter().map(|&i| s.sdeg(i)).collect(),
                    _ => w.iter().map(|&i| s.deg(i)).collect(),
                };
                let rel = if decal_neg(&degs) { rel.neg() } else { rel };
                assert_eq!(
                    sq.is_zero(),
                    rel.is_zero(),
                    "n={} w={:?} sq={:?} rel={:?}",
                    n,
                    w,
                    sq,
                    rel
                );
                if rel.is_zero() {
                    continue;
                }
                let (k, c) = rel.iter().next().unwrap();
                let r = sq.get(k) / c;
                assert_eq!(sq, rel.scaled(&r), "n={} w={:?}", n, w);
                match &ratio {
                    None => ratio = Some(r),
                    Some(r0) => assert_eq!(*r0, r, "n={} w={:?}", n, w),
                }
            }
        }
    }

    #[test]
    fn bar_square_matches_ainfty_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for degs in [vec![0, 1, 1, 2], vec![0, 0, 1, -1], vec![1, 2, 2, 3, 3]] {
            for _ in 0..3 {
                let s = random_structure(Flavor::Assoc, &degs, 3, &mut rng);
                check_proportional(&s, 4);
            }
        }
    }

    #[test]
    fn bar_square_matches_linfty_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for degs in [vec![0, 1, 1, 2], vec![0, 0, -1, 1], vec![-1, 0, 0, 1, 2]] {
            for _ in 0..3 {
                let s = random_structure(Flavor::Lie, &degs, 3, &mut rng);
                check_proportional(&s, 4);
            }
        }
    }
}
