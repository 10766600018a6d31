//! The dg Lie algebra of derivations of a free dg Lie algebra, its ω-stabilizer, and the
//! positive truncation as a finite strict L∞ algebra.

use crate::dictionary::{FreeLie, QuillenModel};
use crate::free::{word_degree, Tensor};
use crate::infinity::{Flavor, InfinityStructure};
use crate::linalg::{rank_kernel_cols, GradedSpace, Reducer};
use crate::q::{Lin, Vector, Q};
use crate::Error;
use num_traits::One;
use std::collections::BTreeMap;

/// A derivation of `𝕃W`, determined by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub degree: i64,
    pub values: Vec<Tensor>,
}

/// Coordinates of a derivation: `(generator, (weight, index in the Lie basis))`.
pub type DerKey = (usize, (usize, usize));

impl Derivation {
    pub fn zero(degree: i64, n: usize) -> Self {
        Derivation {
            degree,
            values: vec![Tensor::zero(); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|t| t.is_zero())
    }

    /// Extend to `T(W)` by the Leibniz rule.
    pub fn apply(&self, gens: &GradedSpace, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        let odd = self.degree.rem_euclid(2) == 1;
        for (u, c) in t.iter() {
            let mut pre = 0i64;
            for k in 0..u.len() {
                let s = if odd && pre.rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                for (v, e) in self.values[u[k]].iter() {
                    let mut w = u[..k].to_vec();
                    w.extend_from_slice(v);
                    w.extend_from_slice(&u[k + 1..]);
                    out.add_term(w, &s * e);
                }
                pre += gens.deg(u[k]);
            }
        }
        out
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Derivation {
            degree: self.degree,
            values: self.values.iter().map(|t| t.scaled(c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Derivation, c: &Q) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            a.add_scaled(b, c);
        }
    }
}

pub struct DerivationAlgebra {
    pub model: QuillenModel,
    pub omega: Option<Tensor>,
    free: FreeLie,
}

/// `Der 𝕃W`, or `Der_ω 𝕃W = {θ : θ(ω) = 0}` when `ω` is given.
pub fn derivation_algebra(
    q: &QuillenModel,
    omega: Option<Tensor>,
) -> Result<DerivationAlgebra, Error> {
    let mut free = FreeLie::new(&q.gens);
    if let Some(w) = &omega {
        if w.is_zero() || !free.is_lie(w) {
            return Err(Error::Domain("ω must be a nonzero Lie element".into()));
        }
        let deg = |i: usize| q.gens.deg(i);
        let degs: Vec<i64> = w.iter().map(|(u, _)| word_degree(u, &deg)).collect();
        if degs.iter().any(|d| *d != degs[0]) {
            return Err(Error::Domain("ω is not homogeneous".into()));
        }
        let dw = q.apply(w);
        if !dw.is_zero() {
            return Err(Error::Domain(format!(
                "ω is not a cycle: δω = {}",
                q.fmt_lie(&dw)
            )));
        }
    }
    Ok(DerivationAlgebra {
        model: q.clone(),
        omega,
        free,
    })
}

impl DerivationAlgebra {
    fn gens(&self) -> &GradedSpace {
        &self.model.gens
    }

    pub fn bracket(&self, a: &Derivation, b: &Derivation) -> Derivation {
        let g = self.gens();
        let odd = (a.degree * b.degree).rem_euclid(2) == 1;
        let values = (0..g.dim())
            .map(|i| {
                let mut v = a.apply(g, &b.values[i]);
                let w = b.apply(g, &a.values[i]);
                if odd {
                    v.add(&w);
                } else {
                    v.sub(&w);
                }
                v
            })
            .collect();
        Derivation {
            degree: a.degree + b.degree,
            values,
        }
    }

    /// `[δ, θ]`.
    pub fn differential(&self, t: &Derivation) -> Derivation {
        let delta = Derivation {
            degree: -1,
            values: self.model.delta.clone(),
        };
        self.bracket(&delta, t)
    }

    /// Coordinates on the standard basis of `Hom(W, 𝕃W)`.
    pub fn coords(&mut self, t: &Derivation) -> Lin<DerKey> {
        let mut out = Lin::zero();
        for (i, v) in t.values.iter().enumerate() {
            let c = self
                .free
                .coords(v)
                .expect("derivation values are Lie elements");
            for (k, x) in c.iter() {
                out.add_term((i, *k), x.clone());
            }
        }
        out
    }

    fn from_coords(&mut self, degree: i64, c: &Lin<DerKey>) -> Derivation {
        let g = self.gens().clone();
        let deg = |i: usize| g.deg(i);
        let mut out = Derivation::zero(degree, g.dim());
        for ((i, (w, k)), x) in c.iter() {
            let t = self.free.basis(*w)[*k].to_tensor(&deg);
            out.values[*i].add_scaled(&t, x);
        }
        out
    }

    /// The standard basis of `Hom(W, 𝕃W)_k`.
    fn ambient(&mut self, k: i64) -> Vec<DerKey> {
        let g = self.gens().clone();
        let deg = |i: usize| g.deg(i);
        let low = g.degrees().iter().next().cloned().unwrap_or(1).max(1);
        let mut out = Vec::new();
        for i in 0..g.dim() {
            let target = g.deg(i) + k;
            let mut w = 1;
            while (w as i64) * low <= target {
                for (j, t) in self.free.basis(w).iter().enumerate() {
                    if t.degree(&deg) == target {
                        out.push((i, (w, j)));
                    }
                }
                w += 1;
            }
        }
        out
    }

    /// A basis of `Der_k` (or `Der_{ω,k}`).
    pub fn basis(&mut self, k: i64) -> Vec<Derivation> {
        let keys = self.ambient(k);
        let units: Vec<Derivation> = keys
            .iter()
            .map(|key| self.from_coords(k, &Lin::basis(*key)))
            .collect();
        let Some(omega) = self.omega.clone() else {
            return units;
        };
        let g = self.gens().clone();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let cols: Vec<Vector> = units
            .iter()
            .map(|t| {
                let img = self.free.coords(&t.apply(&g, &omega)).expect("Lie element");
                img.map_keys(|key| {
                    let m = index.len();
                    let at = *index.entry(*key).or_insert(m);
                    Some((at, Q::one()))
                })
            })
            .collect();
        rank_kernel_cols(&cols)
            .kernel
            .iter()
            .map(|v| {
                let mut t = Derivation::zero(k, g.dim());
                for (j, c) in v.iter() {
                    t.add_scaled(&units[*j], c);
                }
                t
            })
            .collect()
    }

    pub fn dim(&mut self, k: i64) -> usize {
        self.basis(k).len()
    }

    /// Lowest degree in which derivations can be nonzero.
    pub fn min_degree(&self) -> i64 {
        let g = self.gens();
        let low = g.degrees().iter().next().cloned().unwrap_or(1);
        let high = g.degrees().iter().last().cloned().unwrap_or(1);
        low - high
    }

    /// `dim H_k` for `k` in the window.
    pub fn homology_dims(&mut self, lo: i64, hi: i64) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for k in lo..=hi {
            let (z, _) = self.cycles(k);
            let b = self.boundary_rank(k);
            out.insert(k, z.len() - b);
        }
        out
    }

    fn cycles(&mut self, k: i64) -> (Vec<Derivation>, usize) {
        let basis = self.basis(k);
        let mut index: BTreeMap<DerKey, usize> = BTreeMap::new();
        let cols: Vec<Vector> = basis
            .iter()
            .map(|t| {
                let d = self.differential(t);
                let c = self.coords(&d);
                c.map_keys(|key| {
                    let m = index.len();
                    Some((*index.entry(*key).or_insert(m), Q::one()))
                })
            })
            .collect();
        let rk = rank_kernel_cols(&cols);
        let z = rk
            .kernel
            .iter()
            .map(|v| {
                let mut t = Derivation::zero(k, self.gens().dim());
                for (j, c) in v.iter() {
                    t.add_scaled(&basis[*j], c);
                }
                t
            })
            .collect();
        (z, rk.rank)
    }

    fn boundary_rank(&mut self, k: i64) -> usize {
        self.cycles(k + 1).1
    }

    /// The positive truncation in degrees `1..=max_degree`, as the quotient by degrees above the
    /// window and the boundaries of degree `max_degree + 1`.
    pub fn truncate_1(&mut self, max_degree: i64) -> Result<DerTruncation, Error> {
        if max_degree < 1 {
            return Err(Error::Usage("truncation window must reach degree 1".into()));
        }
        let mut space = GradedSpace::new();
        let mut elements: Vec<Derivation> = Vec::new();
        let mut solvers: BTreeMap<i64, (Reducer<DerKey>, usize, usize)> = BTreeMap::new();
        for k in 1..=max_degree {
            let candidates = if k == 1 {
                self.cycles(1).0
            } else {
                self.basis(k)
            };
            let mut red = Reducer::new();
            let mut nb = 0;
            if k == max_degree {
                for t in self.basis(k + 1) {
                    let d = self.differential(&t);
                    if red.insert(&self.coords(&d)) {
                        nb += 1;
                    }
                }
            }
            let start = elements.len();
            let mut j = 0;
            for t in candidates {
                if red.insert(&self.coords(&t)) {
                    space.push(&format!("θ{}_{}", k, j), k);
                    elements.push(t);
                    j += 1;
                }
            }
            solvers.insert(k, (red, nb, start));
        }
        let mut tr = DerTruncation {
            structure: InfinityStructure::new(Flavor::Lie, space.clone()),
            elements,
            max_degree,
        };
        let to_vec = |alg: &mut Self, t: &Derivation| -> Result<Vector, Error> {
            if t.degree < 1 || t.degree > max_degree || t.is_zero() {
                return Ok(Vector::zero());
            }
            let (red, nb, start) = &solvers[&t.degree];
            let sol = red
                .solve(&alg.coords(t))
                .ok_or_else(|| Error::Domain("derivation outside the truncation".into()))?;
            Ok(sol.map_keys(|i| {
                if *i >= *nb {
                    Some((start + *i - nb, Q::one()))
                } else {
                    None
                }
            }))
        };
        let mut s = InfinityStructure::new(Flavor::Lie, space.clone());
        for i in 0..space.dim() {
            let d = self.differential(&tr.elements[i]);
            s.set_d(i, to_vec(self, &d)?);
        }
        for i in 0..space.dim() {
            for j in i..space.dim() {
                if space.deg(i) + space.deg(j) > max_degree {
                    continue;
                }
                let b = self.bracket(&tr.elements[i], &tr.elements[j]);
                let v = to_vec(self, &b)?;
                if !v.is_zero() {
                    s.set_antisymmetric(2, vec![i, j], v);
                }
            }
        }
        s.certify_declared(2);
        tr.structure = s;
        Ok(tr)
    }

    pub fn fmt_derivation(&self, t: &Derivation) -> String {
        let g = self.gens();
        let parts: Vec<String> = (0..g.dim())
            .filter(|i| !t.values[*i].is_zero())
            .map(|i| format!("{} ↦ {}", g.name(i), self.model.fmt_lie(&t.values[i])))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(", ")
        }
    }
}

/// `τ_{≥1} Der` cut off above `max_degree`.
pub struct DerTruncation {
    pub structure: InfinityStructure,
    pub elements: Vec<Derivation>,
    pub max_degree: i64,
}

/// `W_{g,1}`: the free Lie algebra on `α_1, β_1, …, α_g, β_g` in degree `d − 1` with
/// `ω = Σ [α_i, β_i]`.
pub fn w_g1(g: usize, d: i64) -> Result<(QuillenModel, Tensor), Error> {
    if d < 2 || g == 0 {
        return Err(Error::Domain("W_{g,1} needs g ≥ 1 and d ≥ 2".into()));
    }
    let mut gens = GradedSpace::new();
    for i in 1..=g {
        gens.push(&format!("α{}", i), d - 1);
        gens.push(&format!("β{}", i), d - 1);
    }
    let deg = |_: usize| d - 1;
    let mut omega = Tensor::zero();
    for i in 0..g {
        omega.add(&crate::free::bracket(
            &Tensor::basis(vec![2 * i]),
            &Tensor::basis(vec![2 * i + 1]),
            &deg,
        ));
    }
    let q = QuillenModel::new(gens, vec![Tensor::zero(); 2 * g])?;
    Ok((q, omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::bracket;
    use crate::linalg::rank_of_lin;

    #[test]
    fn degree_zero_is_endomorphisms() {
        let gens = GradedSpace::from_degrees(&[("a", 2), ("b", 2), ("c", 3)]);
        let q = QuillenModel::new(gens, vec![Tensor::zero(); 3]).unwrap();
        let mut der = derivation_algebra(&q, None).unwrap();
        assert_eq!(der.dim(0), 5);
        assert_eq!(der.min_degree(), -1);
        assert_eq!(der.dim(-1), 2);
    }

    /// Lie elements of `T(V)` of a given weight, spanned by left-normed brackets of all words.
    fn brute_lie(deg: &dyn Fn(usize) -> i64, n: usize, w: usize) -> Vec<Tensor> {
        let mut out: Vec<Tensor> = (0..n).map(|i| Tensor::basis(vec![i])).collect();
        for _ in 1..w {
            let mut next = Vec::new();
            for t in &out {
                for i in 0..n {
                    next.push(bracket(t, &Tensor::basis(vec![i]), deg));
                }
            }
            out = crate::linalg::span_basis(&next);
        }
        out
    }

    #[test]
    fn w11_against_brute_force() {
        for d in [2i64, 3] {
            let (q, omega) = w_g1(1, d).unwrap();
            let mut der = derivation_algebra(&q, Some(omega)).unwrap();
            let n = d - 1;
            let deg = move |_: usize| n;
            for w in 1..=5usize {
                let k = (w as i64 - 1) * n;
                let lie = brute_lie(&deg, 2, w);
                let mut images = Vec::new();
                for (gen, other) in [(0usize, 1usize), (1, 0)] {
                    for t in &lie {
                        // θ(ω) = [θα,β] + (−1)^{k|α|}[α,θβ]
                        let img = if gen == 0 {
                            bracket(t, &Tensor::basis(vec![other]), &deg)
                        } else {
                            let s = if (k * n).rem_euclid(2) == 1 {
                                -Q::one()
                            } else {
                                Q::one()
                            };
                            bracket(&Tensor::basis(vec![other]), t, &deg).scaled(&s)
                        };
                        images.push(img);
                    }
                }
                let expect = 2 * lie.len() - rank_of_lin(&images);
                assert_eq!(der.dim(k), expect, "d = {}, weight {}", d, w);
            }
        }
    }

    #[test]
    fn truncation_is_a_dgl() {
        let (q, omega) = w_g1(1, 2).unwrap();
        let mut der = derivation_algebra(&q, Some(omega)).unwrap();
        let tr = der.truncate_1(4).unwrap();
        let r = tr.structure.check_structure().unwrap();
        assert!(r.ok, "{:?}", r.failures);
        assert!(tr.structure.is_minimal());
        assert_eq!(tr.structure.space.dim_in_degree(2), der.dim(2));
        assert!(!tr.structure.op_is_zero(2));
    }

    #[test]
    fn differential_and_cycles() {
        // 𝕃(a, b, c) with δc = [a,b], |a| = |b| = 2.
        let gens = GradedSpace::from_degrees(&[("a", 2), ("b", 2), ("c", 5)]);
        let deg = |i: usize| [2, 2, 5][i];
        let ab = bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![1]), &deg);
        let q = QuillenModel::new(gens, vec![Tensor::zero(), Tensor::zero(), ab.clone()]).unwrap();
        let mut der = derivation_algebra(&q, None).unwrap();
        for k in -3..=4 {
            for t in der.basis(k) {
                let dd = der.differential(&der.differential(&t));
                assert!(dd.is_zero());
            }
        }
        let tr = der.truncate_1(4).unwrap();
        assert!(tr.structure.check_structure().unwrap().ok);
        let ac = bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![2]), &deg);
        assert!(derivation_algebra(&q, Some(ac)).is_err());
        assert!(derivation_algebra(&q, Some(ab)).is_ok());
    }
}
