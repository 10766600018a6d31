//! Shuffles, Koszul signs, and bases of free (co)algebras.

use crate::linalg::{GradedSpace, Reducer};
use crate::q::{Lin, Vector, Q};
use crate::Error;
use num_traits::One;
use std::fmt;

pub type Word = Vec<usize>;
pub type Tensor = Lin<Word>;

/// Permutation in one-line notation on `0..n`: position `i` is sent to `perm[i]`.
pub type Perm = Vec<usize>;

pub fn perm_sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Koszul sign of moving the element at position `i` (degree `degrees[i]`) to position `σ(i)`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> i32 {
    assert_eq!(perm.len(), degrees.len());
    let mut s = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && degrees[i].rem_euclid(2) == 1 && degrees[j].rem_euclid(2) == 1 {
                s = -s;
            }
        }
    }
    s
}

/// Koszul sign of rearranging a sequence of degrees into the order `order` (`order[k]` = old
/// position of the element that ends up at position `k`).
pub fn reorder_sign(order: &[usize], degrees: &[i64]) -> i32 {
    let mut s = 1;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b]
                && degrees[order[a]].rem_euclid(2) == 1
                && degrees[order[b]].rem_euclid(2) == 1
            {
                s = -s;
            }
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutationSet {
    pub p: usize,
    pub q: usize,
    pub elements: Vec<(Perm, i32)>,
}

/// All `(p,q)`-shuffles: `σ(0) < … < σ(p−1)` and `σ(p) < … < σ(p+q−1)`, with their signs.
pub fn shuffles(p: i64, q: i64) -> Result<SignedPermutationSet, Error> {
    if p <= 0 || q <= 0 {
        return Err(Error::Domain(format!(
            "shuffles need p, q ≥ 1, got ({}, {})",
            p, q
        )));
    }
    let (p, q) = (p as usize, q as usize);
    let n = p + q;
    let mut elements = Vec::new();
    for first in subsets(n, p) {
        let mut perm = vec![0; n];
        let mut rest = (0..n).filter(|i| !first.contains(i));
        for (i, &f) in first.iter().enumerate() {
            perm[i] = f;
        }
        for i in p..n {
            perm[i] = rest.next().unwrap();
        }
        let s = perm_sign(&perm);
        elements.push((perm, s));
    }
    Ok(SignedPermutationSet { p, q, elements })
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn all_words(dim: usize, len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * dim);
        for w in &out {
            for i in 0..dim {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Non-decreasing words of length `len` over `0..dim`.
pub fn sorted_words(dim: usize, len: usize) -> Vec<Word> {
    fn rec(start: usize, dim: usize, len: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i, dim, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, len, &mut Vec::new(), &mut out);
    out
}

pub fn word_degree(w: &[usize], deg: &dyn Fn(usize) -> i64) -> i64 {
    w.iter().map(|&i| deg(i)).sum()
}

/// Shuffle product of two words with Koszul signs for the given letter degrees.
pub fn shuffle_product(u: &[usize], v: &[usize], deg: &dyn Fn(usize) -> i64) -> Tensor {
    let p = u.len();
    let q = v.len();
    let mut out = Tensor::zero();
    if p == 0 || q == 0 {
        let mut w = u.to_vec();
        w.extend_from_slice(v);
        out.add_term(w, Q::one());
        return out;
    }
    let letters: Vec<usize> = u.iter().chain(v.iter()).cloned().collect();
    let degs: Vec<i64> = letters.iter().map(|&i| deg(i)).collect();
    for (perm, _) in shuffles(p as i64, q as i64).unwrap().elements {
        let mut w = vec![0; p + q];
        for (i, &pi) in perm.iter().enumerate() {
            w[pi] = letters[i];
        }
        let s = koszul_sign(&perm, &degs);
        out.add_term(w, Q::from_integer((s as i64).into()));
    }
    out
}

/// Lyndon words of length `n` over `0..k`, in lexicographic order (Duval's algorithm).
pub fn lyndon_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    let mut w: Vec<isize> = vec![-1];
    while !w.is_empty() {
        let last = w.len() - 1;
        w[last] += 1;
        if w.len() == n {
            out.push(w.iter().map(|&x| x as usize).collect());
        }
        let m = w.len();
        while w.len() < n {
            let x = w[w.len() - m];
            w.push(x);
        }
        while !w.is_empty() && *w.last().unwrap() == k as isize - 1 {
            w.pop();
        }
    }
    out
}

pub fn is_lyndon(w: &[usize]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w[i..] > *w && w[..] < w[i..])
}

/// A bracketing of generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieTree {
    Leaf(usize),
    Br(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn br(a: LieTree, b: LieTree) -> LieTree {
        LieTree::Br(Box::new(a), Box::new(b))
    }

    pub fn letters(&self) -> Word {
        match self {
            LieTree::Leaf(i) => vec![*i],
            LieTree::Br(a, b) => {
                let mut w = a.letters();
                w.extend(b.letters());
                w
            }
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            LieTree::Leaf(_) => 1,
            LieTree::Br(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn degree(&self, deg: &dyn Fn(usize) -> i64) -> i64 {
        word_degree(&self.letters(), deg)
    }

    /// Expansion in the tensor algebra, brackets as graded commutators.
    pub fn to_tensor(&self, deg: &dyn Fn(usize) -> i64) -> Tensor {
        match self {
            LieTree::Leaf(i) => Tensor::basis(vec![*i]),
            LieTree::Br(a, b) => bracket(&a.to_tensor(deg), &b.to_tensor(deg), deg),
        }
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        match self {
            LieTree::Leaf(i) => names(*i),
            LieTree::Br(a, b) => format!("[{},{}]", a.render(names), b.render(names)),
        }
    }
}

impl fmt::Debug for LieTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|i| format!("g{}", i)))
    }
}

/// Concatenation product in the tensor algebra.
pub fn tensor_mul(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (u, c) in a.iter() {
        for (v, e) in b.iter() {
            let mut w = u.clone();
            w.extend_from_slice(v);
            out.add_term(w, c * e);
        }
    }
    out
}

/// Graded commutator `[a,b] = ab − (−1)^{|a||b|} ba`, extended bilinearly over homogeneous words.
pub fn bracket(a: &Tensor, b: &Tensor, deg: &dyn Fn(usize) -> i64) -> Tensor {
    let mut out = Tensor::zero();
    for (u, c) in a.iter() {
        let du = word_degree(u, deg);
        for (v, e) in b.iter() {
            let dv = word_degree(v, deg);
            let ce = c * e;
            let mut w = u.clone();
            w.extend_from_slice(v);
            out.add_term(w, ce.clone());
            let mut w2 = v.clone();
            w2.extend_from_slice(u);
            if (du * dv).rem_euclid(2) == 1 {
                out.add_term(w2, ce);
            } else {
                out.add_term(w2, -ce);
            }
        }
    }
    out
}

/// Standard bracketing of a Lyndon word (split at the longest proper Lyndon suffix).
pub fn standard_bracketing(w: &[usize]) -> LieTree {
    if w.len() == 1 {
        return LieTree::Leaf(w[0]);
    }
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            return LieTree::br(standard_bracketing(&w[..i]), standard_bracketing(&w[i..]));
        }
    }
    unreachable!("not a Lyndon word")
}

/// Basis of the weight-`weight` part of the free graded Lie algebra on `gens`:
/// standard bracketings of Lyndon words and `[P(w),P(w)]` for odd Lyndon words of half weight.
pub fn lie_basis(gens: &GradedSpace, weight: usize) -> Vec<LieTree> {
    let deg = |i: usize| gens.deg(i);
    let mut out: Vec<LieTree> = lyndon_words(gens.dim(), weight)
        .iter()
        .map(|w| standard_bracketing(w))
        .collect();
    if weight.is_multiple_of(2) {
        for w in lyndon_words(gens.dim(), weight / 2) {
            if word_degree(&w, &deg).rem_euclid(2) == 1 {
                let p = standard_bracketing(&w);
                out.push(LieTree::br(p.clone(), p));
            }
        }
    }
    out
}

/// Coordinates of Lie elements in the super-Lyndon basis of a fixed weight.
pub struct LieCoords {
    pub basis: Vec<LieTree>,
    red: Reducer<Word>,
}

impl LieCoords {
    pub fn new(gens: &GradedSpace, weight: usize) -> Self {
        let basis = lie_basis(gens, weight);
        let deg = |i: usize| gens.deg(i);
        let mut red = Reducer::new();
        for b in &basis {
            let ok = red.insert(&b.to_tensor(&deg));
            debug_assert!(ok, "Lie basis elements are independent");
        }
        LieCoords { basis, red }
    }

    /// Coordinates of a tensor that is a Lie element of this weight.
    pub fn coords(&self, t: &Tensor) -> Option<Vector> {
        self.red.solve(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoKind {
    Tensor,
    Symmetric,
    LieCo,
}

/// A basis element of a cofree coalgebra on the suspension of a space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoWord {
    pub kind: CoKind,
    pub letters: Word,
}

impl CoWord {
    pub fn weight(&self) -> usize {
        self.letters.len()
    }
}

/// Suspended degree `|sa| = |a| + 1`.
pub fn sdeg(space: &GradedSpace, i: usize) -> i64 {
    space.deg(i) + 1
}

/// Canonical form of a symmetric word in the suspended space: letters sorted, with the Koszul
/// sign of the sort; `None` if an odd letter repeats.
pub fn sym_canonical(w: &[usize], deg: &dyn Fn(usize) -> i64) -> Option<(Word, i32)> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&k| (w[k], k));
    let degs: Vec<i64> = w.iter().map(|&i| deg(i)).collect();
    let s = reorder_sign(&order, &degs);
    let sorted: Word = order.iter().map(|&k| w[k]).collect();
    for k in 1..sorted.len() {
        if sorted[k] == sorted[k - 1] && deg(sorted[k]).rem_euclid(2) == 1 {
            return None;
        }
    }
    Some((sorted, s))
}

/// Span of shuffle products in a given weight of `T^c` on letters with degrees `deg`.
pub fn shuffle_span(dim: usize, weight: usize, deg: &dyn Fn(usize) -> i64) -> Vec<Tensor> {
    let mut out = Vec::new();
    for p in 1..weight {
        for u in all_words(dim, p) {
            for v in all_words(dim, weight - p) {
                out.push(shuffle_product(&u, &v, deg));
            }
        }
    }
    out
}

/// Representatives of `T^c / (shuffle products)` in one weight: Lyndon words and `ww` for odd
/// Lyndon `w`.
pub fn lie_co_section(dim: usize, weight: usize, deg: &dyn Fn(usize) -> i64) -> Vec<Word> {
    let mut out = lyndon_words(dim, weight);
    if weight.is_multiple_of(2) {
        for w in lyndon_words(dim, weight / 2) {
            if word_degree(&w, deg).rem_euclid(2) == 1 {
                let mut ww = w.clone();
                ww.extend(w);
                out.push(ww);
            }
        }
    }
    out
}

/// Projection of tensors onto the shuffle-indecomposable quotient in one weight,
/// in coordinates of `lie_co_section`.
pub struct ShuffleQuotient {
    pub section: Vec<Word>,
    red: Reducer<Word>,
    nshuf: usize,
}

impl ShuffleQuotient {
    pub fn new(dim: usize, weight: usize, deg: &dyn Fn(usize) -> i64) -> Self {
        let mut red = Reducer::new();
        let shuf = shuffle_span(dim, weight, deg);
        let nshuf = shuf.len();
        for s in &shuf {
            red.insert(s);
        }
        let section = lie_co_section(dim, weight, deg);
        for w in &section {
            red.insert(&Tensor::basis(w.clone()));
        }
        ShuffleQuotient {
            section,
            red,
            nshuf,
        }
    }

    /// Coordinates in the section basis of the class of `t`.
    pub fn project(&self, t: &Tensor) -> Vector {
        let c = self
            .red
            .solve(t)
            .expect("section and shuffles span the weight");
        c.map_keys(|k| {
            if *k >= self.nshuf {
                Some((*k - self.nshuf, Q::one()))
            } else {
                None
            }
        })
    }

    pub fn is_shuffle_decomposable(&self, t: &Tensor) -> bool {
        self.project(t).is_zero()
    }
}

/// Basis of the weight-`weight` part of `T^c(sA)`, `Λ^c(sA)` or the cofree Lie coalgebra on `sA`.
pub fn coword_basis(kind: CoKind, space: &GradedSpace, weight: usize) -> Vec<CoWord> {
    let sd = |i: usize| sdeg(space, i);
    let words = match kind {
        CoKind::Tensor => all_words(space.dim(), weight),
        CoKind::Symmetric => sorted_words(space.dim(), weight)
            .into_iter()
            .filter(|w| sym_canonical(w, &sd).is_some())
            .collect(),
        CoKind::LieCo => lie_co_section(space.dim(), weight, &sd),
    };
    words
        .into_iter()
        .map(|letters| CoWord { kind, letters })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffle_counts() {
        let s = shuffles(1, 1).unwrap();
        assert_eq!(s.elements, vec![(vec![0, 1], 1), (vec![1, 0], -1)]);
        assert_eq!(shuffles(2, 1).unwrap().elements.len(), 3);
        assert_eq!(shuffles(2, 2).unwrap().elements.len(), 6);
        assert!(shuffles(0, 2).is_err());
    }

    #[test]
    fn koszul_signs() {
        assert_eq!(koszul_sign(&[0, 1], &[1, 1]), 1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]), 1);
    }

    #[test]
    fn lyndon() {
        assert_eq!(lyndon_words(2, 3), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(lyndon_words(1, 2).len(), 0);
        assert!(is_lyndon(&[0, 1, 1]));
        assert!(!is_lyndon(&[1, 0]));
    }

    #[test]
    fn small_lie_bases() {
        let even = GradedSpace::from_degrees(&[("x", 2), ("y", 2)]);
        assert_eq!(lie_basis(&even, 2).len(), 1);
        let odd = GradedSpace::from_degrees(&[("x", 1)]);
        assert_eq!(lie_basis(&odd, 2).len(), 1);
        assert_eq!(lie_basis(&odd, 3).len(), 0);
    }

    #[test]
    fn coword_counts() {
        let one = GradedSpace::from_degrees(&[("x", 0)]);
        assert_eq!(coword_basis(CoKind::Tensor, &one, 3).len(), 1);
        // x of degree 0 suspends to an odd letter: no symmetric square
        assert_eq!(coword_basis(CoKind::Symmetric, &one, 2).len(), 0);
        let odd = GradedSpace::from_degrees(&[("x", 1)]);
        assert_eq!(coword_basis(CoKind::Symmetric, &odd, 2).len(), 1);
    }
}
