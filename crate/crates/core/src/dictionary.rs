//! Sullivan and Quillen models and their dictionaries with L∞ and C∞ algebras.
//!
//! `ΛV` is paired with `Λ^c(sL)` and `T(W)` with `T^c(sA)`, where a generator pairs with the
//! suspended basis letter of the same index. On words the pairing carries the sign
//! `(−1)^{Σ_{i<j} p_i p_j}` of reversing the letters, and on symmetric words additionally the
//! multiplicity factor `Π m!`. A differential `D` is dual to a coderivation `b` via
//! `D(φ) = (−1)^{|φ|} φ ∘ b`.

use crate::free::{all_words, word_degree, LieCoords, LieTree, Tensor, Word};
use crate::infinity::{Flavor, InfinityStructure};
use crate::linalg::{GradedSpace, Reducer};
use crate::poly::{Mono, Poly, PolyRing, SullivanModel};
use crate::q::{factorial, sign, Lin, Vector, Q};
use crate::Error;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};

/// Name of the dual basis element: toggles a trailing `^`.
pub fn dual_name(n: &str) -> String {
    match n.strip_suffix('^') {
        Some(s) => s.to_string(),
        None => format!("{}^", n),
    }
}

fn pair_sign(ps: &[i64]) -> bool {
    let mut e = 0i64;
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            e += ps[i] * ps[j];
        }
    }
    e.rem_euclid(2) == 1
}

/// `⟨M, w_M⟩` for a monomial and its sorted letter word.
pub fn sym_pairing(ring: &PolyRing, m: &Mono) -> Q {
    let letters = PolyRing::letters(m);
    let ps: Vec<i64> = letters.iter().map(|&i| ring.gens.deg(i)).collect();
    let mut c = Q::one();
    for &e in m {
        c *= factorial(e as u64);
    }
    if pair_sign(&ps) {
        -c
    } else {
        c
    }
}

/// The L∞ algebra whose Chevalley–Eilenberg cochains are the given Sullivan algebra.
pub fn linfty_from_sullivan(m: &SullivanModel) -> Result<InfinityStructure, Error> {
    if let Err(cycle) = m.nilpotence_order() {
        let names: Vec<&str> = cycle.iter().map(|&i| m.ring.gens.name(i)).collect();
        return Err(Error::Domain(format!(
            "differential is not nilpotent: cycle {}",
            names.join(" -> ")
        )));
    }
    let mut space = GradedSpace::new();
    for b in &m.ring.gens.basis {
        space.push_weighted(&dual_name(&b.name), -b.degree - 1, b.weight);
    }
    let mut s = InfinityStructure::new(Flavor::Lie, space.clone());
    let mut bvals: BTreeMap<Word, Vector> = BTreeMap::new();
    for (i, p) in m.d.iter().enumerate() {
        let odd = m.ring.odd(i);
        for (mono, c) in p.iter() {
            let w = PolyRing::letters(mono);
            if w.is_empty() {
                return Err(Error::Domain("differential has a constant term".into()));
            }
            let v = c * sym_pairing(&m.ring, mono) * sign(odd);
            bvals.entry(w).or_default().add_term(i, v);
        }
    }
    let mut top = 1;
    for (w, b) in bvals {
        let op = InfinityStructure::op_from_bar(Flavor::Lie, &space, &w, &b);
        if w.len() == 1 {
            s.set_d(w[0], op);
        } else {
            top = top.max(w.len());
            s.set_antisymmetric(w.len(), w, op);
        }
    }
    s.certify_declared(top.max(2));
    Ok(s)
}

/// Chevalley–Eilenberg cochains of a finite-dimensional L∞ algebra concentrated in degrees ≥ 0.
pub fn sullivan_from_linfty(s: &InfinityStructure) -> Result<SullivanModel, Error> {
    if s.flavor != Flavor::Lie {
        return Err(Error::Domain("expected an L-infinity algebra".into()));
    }
    let mut gens = GradedSpace::new();
    for b in &s.space.basis {
        if b.degree < 0 {
            return Err(Error::Domain(format!(
                "{} has negative degree; cochains are not a Sullivan algebra",
                b.name
            )));
        }
        gens.push_weighted(&dual_name(&b.name), -b.degree - 1, b.weight);
    }
    let ring = PolyRing::new(gens.clone());
    let mut d = vec![Poly::zero(); s.dim()];
    for n in 1..=s.arity_bound {
        if s.op_is_zero(n) {
            continue;
        }
        for w in crate::free::sorted_words(s.dim(), n) {
            let mut mono = ring.one();
            for &i in &w {
                mono[i] += 1;
            }
            if w.windows(2).any(|p| p[0] == p[1] && ring.odd(p[0])) {
                continue;
            }
            let b = s.bar_component(&w);
            let pair = sym_pairing(&ring, &mono);
            for (i, c) in b.iter() {
                let v = c / &pair * sign(ring.odd(*i));
                d[*i].add_term(mono.clone(), v);
            }
        }
    }
    let m = SullivanModel::new(gens, d)?;
    if let Err(cycle) = m.nilpotence_order() {
        let names: Vec<&str> = cycle.iter().map(|&i| m.ring.gens.name(i)).collect();
        return Err(Error::Domain(format!(
            "cochains are not nilpotent: cycle {}",
            names.join(" -> ")
        )));
    }
    Ok(m)
}

/// Coordinates of Lie elements of the free graded Lie algebra in all weights.
pub struct FreeLie {
    pub gens: GradedSpace,
    coords: Vec<LieCoords>,
}

impl FreeLie {
    pub fn new(gens: &GradedSpace) -> Self {
        FreeLie {
            gens: gens.clone(),
            coords: vec![],
        }
    }

    fn ensure(&mut self, w: usize) {
        while self.coords.len() < w {
            let k = self.coords.len() + 1;
            self.coords.push(LieCoords::new(&self.gens, k));
        }
    }

    pub fn basis(&mut self, weight: usize) -> Vec<LieTree> {
        self.ensure(weight);
        self.coords[weight - 1].basis.clone()
    }

    /// Coordinates keyed by (weight, index in the weight basis); `None` if `t` is not a Lie element.
    pub fn coords(&mut self, t: &Tensor) -> Option<Lin<(usize, usize)>> {
        let mut by_w: BTreeMap<usize, Tensor> = BTreeMap::new();
        for (u, c) in t.iter() {
            if u.is_empty() {
                return None;
            }
            by_w.entry(u.len())
                .or_default()
                .add_term(u.clone(), c.clone());
        }
        let mut out = Lin::zero();
        for (w, part) in by_w {
            self.ensure(w);
            let v = self.coords[w - 1].coords(&part)?;
            for (k, c) in v.iter() {
                out.add_term((w, *k), c.clone());
            }
        }
        Some(out)
    }

    pub fn is_lie(&mut self, t: &Tensor) -> bool {
        self.coords(t).is_some()
    }
}

/// A free dg Lie algebra `(𝕃W, δ)` with `δ` stored on generators as elements of `T(W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuillenModel {
    pub gens: GradedSpace,
    pub delta: Vec<Tensor>,
}

impl QuillenModel {
    pub fn new(gens: GradedSpace, delta: Vec<Tensor>) -> Result<Self, Error> {
        for b in &gens.basis {
            if b.degree < 1 {
                return Err(Error::Domain(format!(
                    "generator {} must have degree ≥ 1",
                    b.name
                )));
            }
        }
        let q = QuillenModel { gens, delta };
        let deg = |i: usize| q.gens.deg(i);
        let mut fl = FreeLie::new(&q.gens);
        for (i, t) in q.delta.iter().enumerate() {
            for (u, _) in t.iter() {
                if word_degree(u, &deg) != q.gens.deg(i) - 1 {
                    return Err(Error::Domain(format!(
                        "δ {} is not homogeneous of degree {}",
                        q.gens.name(i),
                        q.gens.deg(i) - 1
                    )));
                }
            }
            if !fl.is_lie(t) {
                return Err(Error::Domain(format!(
                    "δ {} is not a Lie element",
                    q.gens.name(i)
                )));
            }
        }
        Ok(q)
    }

    /// Extend `δ` as a derivation of `T(W)`.
    pub fn apply(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (u, c) in t.iter() {
            let mut pre = 0i64;
            for k in 0..u.len() {
                let img = &self.delta[u[k]];
                let s = if pre.rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                for (v, e) in img.iter() {
                    let mut w = u[..k].to_vec();
                    w.extend_from_slice(v);
                    w.extend_from_slice(&u[k + 1..]);
                    out.add_term(w, &s * e);
                }
                pre += self.gens.deg(u[k]);
            }
        }
        out
    }

    pub fn d_squared_zero(&self) -> bool {
        self.delta.iter().all(|t| self.apply(t).is_zero())
    }

    pub fn is_minimal(&self) -> bool {
        self.delta
            .iter()
            .all(|t| t.iter().all(|(u, _)| u.len() >= 2))
    }

    pub fn is_quadratic(&self) -> bool {
        self.delta
            .iter()
            .all(|t| t.iter().all(|(u, _)| u.len() == 2))
    }

    /// Render a Lie element in the super-Lyndon basis.
    pub fn fmt_lie(&self, t: &Tensor) -> String {
        let mut fl = FreeLie::new(&self.gens);
        match fl.coords(t) {
            None => format!("{:?}", t),
            Some(c) => {
                let names = |i: usize| self.gens.name(i).to_string();
                let items: Vec<(String, Q)> = c
                    .iter()
                    .map(|((w, k), q)| (fl.basis(*w)[*k].render(&names), q.clone()))
                    .collect();
                fmt_combination(&items)
            }
        }
    }

    /// The dg Lie algebra `𝕃W` in degrees `≤ max_degree`, as a strict L∞ algebra.
    pub fn truncation(&self, max_degree: i64) -> Result<LieTruncation, Error> {
        LieTruncation::new(self, max_degree)
    }
}

/// Format `Σ c·label` with exact coefficients.
pub fn fmt_combination(items: &[(String, Q)]) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (label, c)) in items.iter().enumerate() {
        let cs = crate::q::fmt_q(c);
        let neg = cs.starts_with('-');
        let a = cs.trim_start_matches('-');
        if k > 0 {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push('-');
        }
        if a != "1" {
            s.push_str(a);
            s.push('*');
        }
        s.push_str(label);
    }
    s
}

/// The dg Lie algebra `𝕃W / (𝕃W_{>N} + δ𝕃W_{N+1})`; its homology agrees with that of `𝕃W`
/// through degree `N`.
pub struct LieTruncation {
    pub structure: InfinityStructure,
    pub basis: Vec<(usize, usize)>,
    pub trees: Vec<LieTree>,
    pub tensors: Vec<Tensor>,
    pub free: FreeLie,
    index: BTreeMap<(usize, usize), usize>,
    boundaries: Reducer<(usize, usize)>,
}

impl LieTruncation {
    fn new(q: &QuillenModel, max_degree: i64) -> Result<Self, Error> {
        let deg = |i: usize| q.gens.deg(i);
        let mut free = FreeLie::new(&q.gens);
        let names = |i: usize| q.gens.name(i).to_string();
        let low = q.gens.degrees().iter().next().cloned().unwrap_or(1);
        // degree ≤ N+1 part of the free Lie algebra
        let mut kept: Vec<((usize, usize), LieTree)> = Vec::new();
        let mut top: Vec<Tensor> = Vec::new();
        let mut w = 1;
        while q.gens.dim() > 0 && (w as i64) * low <= max_degree + 1 {
            for (k, t) in free.basis(w).into_iter().enumerate() {
                let dg = t.degree(&deg);
                if dg <= max_degree {
                    kept.push(((w, k), t));
                } else if dg == max_degree + 1 {
                    top.push(t.to_tensor(&deg));
                }
            }
            w += 1;
        }
        let mut boundaries = Reducer::new();
        for t in &top {
            let c = free
                .coords(&q.apply(t))
                .ok_or_else(|| Error::Domain("differential is not a Lie element".into()))?;
            boundaries.insert(&c);
        }
        let pivots: BTreeSet<(usize, usize)> = boundaries.leading_keys().into_iter().collect();
        let mut basis = Vec::new();
        let mut trees = Vec::new();
        let mut tensors = Vec::new();
        let mut space = GradedSpace::new();
        for (k, t) in kept {
            if pivots.contains(&k) {
                continue;
            }
            basis.push(k);
            space.push(&t.render(&names), t.degree(&deg));
            tensors.push(t.to_tensor(&deg));
            trees.push(t);
        }
        let index: BTreeMap<(usize, usize), usize> =
            basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut s = InfinityStructure::new(Flavor::Lie, space.clone());
        let mut tr = LieTruncation {
            structure: s.clone(),
            basis,
            trees,
            tensors,
            free,
            index,
            boundaries,
        };
        for i in 0..space.dim() {
            let img = q.apply(&tr.tensors[i]);
            let v = tr.to_vector(&img)?;
            s.set_d(i, v);
        }
        for i in 0..space.dim() {
            for j in i..space.dim() {
                if space.deg(i) + space.deg(j) > max_degree {
                    continue;
                }
                let b = crate::free::bracket(&tr.tensors[i], &tr.tensors[j], &deg);
                let v = tr.to_vector(&b)?;
                if !v.is_zero() {
                    s.set_antisymmetric(2, vec![i, j], v);
                }
            }
        }
        s.certify_declared(2);
        tr.structure = s;
        Ok(tr)
    }

    /// Coordinates of a Lie element in the quotient.
    pub fn to_vector(&mut self, t: &Tensor) -> Result<Vector, Error> {
        let mut c = self
            .free
            .coords(t)
            .ok_or_else(|| Error::Domain("not a Lie element".into()))?;
        loop {
            let (rem, _) = self.boundaries.reduce(&c);
            if rem == c {
                break;
            }
            c = rem;
        }
        let mut v = Vector::zero();
        for (k, x) in c.iter() {
            if let Some(&i) = self.index.get(k) {
                v.add_term(i, x.clone());
            }
        }
        Ok(v)
    }

    pub fn to_tensor(&self, v: &Vector) -> Tensor {
        let mut t = Tensor::zero();
        for (i, c) in v.iter() {
            t.add_scaled(&self.tensors[*i], c);
        }
        t
    }
}

fn word_sign(ps: &[i64]) -> Q {
    sign(pair_sign(ps))
}

/// The C∞ algebra whose Harrison cochains are the given Quillen model.
pub fn cinfty_from_quillen(q: &QuillenModel) -> Result<InfinityStructure, Error> {
    let mut space = GradedSpace::new();
    for b in &q.gens.basis {
        space.push_weighted(&dual_name(&b.name), -b.degree - 1, b.weight);
    }
    let mut bvals: BTreeMap<Word, Vector> = BTreeMap::new();
    for (i, t) in q.delta.iter().enumerate() {
        let odd = q.gens.deg(i).rem_euclid(2) == 1;
        for (u, c) in t.iter() {
            let ps: Vec<i64> = u.iter().map(|&j| q.gens.deg(j)).collect();
            let v = c * word_sign(&ps) * sign(odd);
            bvals.entry(u.clone()).or_default().add_term(i, v);
        }
    }
    let mut s = InfinityStructure::new(Flavor::Comm, space.clone());
    let mut top = 2;
    for (u, b) in bvals {
        let op = InfinityStructure::op_from_bar(Flavor::Comm, &space, &u, &b);
        if u.len() == 1 {
            s.set_d(u[0], op);
        } else {
            top = top.max(u.len());
            s.set_raw(u.len(), u, op);
        }
    }
    s.certify_declared(top);
    Ok(s)
}

/// Harrison cochains of a finite-dimensional C∞ algebra in cohomological degrees ≥ 2.
pub fn quillen_from_cinfty(s: &InfinityStructure) -> Result<QuillenModel, Error> {
    if s.flavor != Flavor::Comm {
        return Err(Error::Domain("expected a C-infinity algebra".into()));
    }
    let mut gens = GradedSpace::new();
    for b in &s.space.basis {
        if b.degree > -2 {
            return Err(Error::Domain(format!(
                "{} has cohomological degree {}; Harrison cochains need degrees ≥ 2",
                b.name, -b.degree
            )));
        }
        gens.push_weighted(&dual_name(&b.name), -b.degree - 1, b.weight);
    }
    let mut delta = vec![Tensor::zero(); s.dim()];
    for n in 1..=s.arity_bound {
        if s.op_is_zero(n) {
            continue;
        }
        for u in all_words(s.dim(), n) {
            let b = s.bar_component(&u);
            if b.is_zero() {
                continue;
            }
            let ps: Vec<i64> = u.iter().map(|&j| gens.deg(j)).collect();
            let ws = word_sign(&ps);
            for (i, c) in b.iter() {
                let odd = gens.deg(*i).rem_euclid(2) == 1;
                delta[*i].add_term(u.clone(), c * &ws * sign(odd));
            }
        }
    }
    QuillenModel::new(gens, delta)
}

/// The strict C∞ algebra `ΛV/(ΛV)^{>N}` (augmentation ideal, cohomological degrees `≤ N`).
/// Its cohomology agrees with that of `ΛV` below degree `N`.
pub fn cdga_window(m: &SullivanModel, max_codeg: i64) -> (InfinityStructure, Vec<Mono>) {
    let monos = m.ring.monomials_upto(max_codeg);
    let mut monos: Vec<Mono> = monos;
    monos.sort_by(|a, b| {
        (m.ring.mono_degree(b), PolyRing::mono_len(a), b.clone()).cmp(&(
            m.ring.mono_degree(a),
            PolyRing::mono_len(b),
            a.clone(),
        ))
    });
    let index: BTreeMap<Mono, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), i))
        .collect();
    let mut space = GradedSpace::new();
    for x in &monos {
        space.push(&m.ring.fmt_mono(x), m.ring.mono_degree(x));
    }
    let to_vec = |p: &Poly| -> Vector { p.map_keys(|x| index.get(x).map(|&i| (i, Q::one()))) };
    let mut s = InfinityStructure::new(Flavor::Comm, space);
    for (i, x) in monos.iter().enumerate() {
        let dx = m.differential(&Poly::basis(x.clone()));
        s.set_d(i, to_vec(&dx));
    }
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            if let Some((c, neg)) = m.ring.mul_mono(a, b) {
                if let Some(&k) = index.get(&c) {
                    s.set_raw(2, vec![i, j], Vector::single(k, sign(neg)));
                }
            }
        }
    }
    s.certify_declared(2);
    (s, monos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    fn cpn(n: u32) -> SullivanModel {
        let gens = GradedSpace::from_degrees(&[("x", -2), ("y", -(2 * n as i64 + 1))]);
        let r = PolyRing::new(gens.clone());
        let dy = r.pow(&r.gen(0), n + 1);
        SullivanModel::new(gens, vec![Poly::zero(), dy]).unwrap()
    }

    #[test]
    fn cpn_bracket() {
        for n in 2..=3u32 {
            let l = linfty_from_sullivan(&cpn(n)).unwrap();
            let ops: Vec<_> = l.ops.iter().filter(|(_, t)| !t.is_empty()).collect();
            assert_eq!(ops.len(), 1);
            let w = vec![0; n as usize + 1];
            assert_eq!(
                l.op(n as usize + 1, &w),
                Vector::single(1, factorial(n as u64 + 1))
            );
            assert!(l.check_structure().unwrap().ok);
            assert_eq!(sullivan_from_linfty(&l).unwrap(), cpn(n));
        }
    }

    #[test]
    fn wedge_quillen() {
        let gens = GradedSpace::from_degrees(&[("a", 1), ("b", 1), ("c", 2), ("x", 4)]);
        let deg = |i: usize| gens.deg(i);
        let ac = crate::free::bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![2]), &deg);
        let ab = crate::free::bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![1]), &deg);
        let aab = crate::free::bracket(&Tensor::basis(vec![0]), &ab, &deg);
        let z = Tensor::zero();
        let q1 = QuillenModel::new(
            gens.clone(),
            vec![z.clone(), z.clone(), z.clone(), ac.clone()],
        )
        .unwrap();
        let mut d2 = ac.clone();
        d2.add(&aab);
        let q2 = QuillenModel::new(gens.clone(), vec![z.clone(), z.clone(), z, d2]).unwrap();
        assert!(q1.d_squared_zero() && q2.d_squared_zero());
        let c1 = cinfty_from_quillen(&q1).unwrap();
        let c2 = cinfty_from_quillen(&q2).unwrap();
        assert!(c1.check_structure().unwrap().ok);
        let r2 = c2.check_structure().unwrap();
        assert!(r2.ok, "{:?}", r2.failures);
        assert!(c1.op_is_zero(3));
        assert!(!c2.op_is_zero(3));
        assert_eq!(quillen_from_cinfty(&c2).unwrap(), q2);
        assert_eq!(quillen_from_cinfty(&c1).unwrap(), q1);
    }

    #[test]
    fn sphere_bundle_cdga() {
        let gens = GradedSpace::from_degrees(&[("x", -3), ("y", -3), ("z", -5)]);
        let r = PolyRing::new(gens.clone());
        let dz = r.mul(&r.gen(0), &r.gen(1));
        let m = SullivanModel::new(gens, vec![Poly::zero(), Poly::zero(), dz]).unwrap();
        let (a, monos) = cdga_window(&m, 11);
        assert_eq!(monos.len(), 7);
        assert!(a.check_structure().unwrap().ok);
        let l = linfty_from_sullivan(&m).unwrap();
        assert!(l.check_structure().unwrap().ok);
        assert_eq!(l.op(2, &[0, 1]).len(), 1);
        let _ = q(0);
    }
}
