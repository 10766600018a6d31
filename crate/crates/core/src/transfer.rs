//! Homotopy transfer through the basic perturbation lemma.
//!
//! The contraction `(f, g, h)` of `A` onto `B` is extended to the bar constructions by
//! `F = f^{⊗n}`, `G = g^{⊗n}` and `H = h_n^Σ`, and the coderivation `b` of the structure on `A`
//! is the perturbation. On `sA` the homotopy acts as `s h s^{-1}` with a sign, `h_{sA}(sa) = −s h(a)`.

use crate::free::{all_words, sorted_words, sym_canonical, Word};
use crate::infinity::{
    degree_support_bound_between, set_antisymmetric_component, Certificate, Flavor,
    InfinityMorphism, InfinityStructure,
};
use crate::linalg::{build_contraction, Complex, Contraction, GradedSpace, SparseMap};
use crate::q::{binomial, q, Lin, Vector, Q};
use crate::Error;
use num_traits::One;
use std::collections::BTreeMap;

/// `a_{n,k} = 1/(C(n,k)·k)`.
pub fn leibniz(n: u64, k: u64) -> Q {
    Q::one() / (binomial(n, k) * q(k as i64))
}

/// Rows `1..=nmax` of the harmonic triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizTriangle {
    pub rows: Vec<Vec<Q>>,
}

impl LeibnizTriangle {
    /// From `a_{n,1} = 1/n` and `a_{n,k} = a_{n−1,k−1} − a_{n,k−1}`.
    pub fn recursive(nmax: usize) -> Self {
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for n in 1..=nmax {
            let mut row = vec![Q::one() / q(n as i64)];
            for k in 2..=n {
                let v = &rows[n - 2][k - 2] - &row[k - 2];
                row.push(v);
            }
            rows.push(row);
        }
        LeibnizTriangle { rows }
    }

    pub fn closed(nmax: usize) -> Self {
        let rows = (1..=nmax)
            .map(|n| (1..=n).map(|k| leibniz(n as u64, k as u64)).collect())
            .collect();
        LeibnizTriangle { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> Q {
        self.rows[n - 1][k - 1].clone()
    }
}

/// `h_n^Σ` on a word, with the Koszul sign of moving `h` past earlier letters.
/// `hcols`/`picols` give `h` and `π = gf` on letters; `deg` is the letter degree used for signs.
fn hsigma_word(
    hcols: &[Vector],
    picols: &[Vector],
    deg: &dyn Fn(usize) -> i64,
    w: &[usize],
) -> Lin<Word> {
    let n = w.len();
    let mut out = Lin::zero();
    let mut pre = 0i64;
    for j in 0..n {
        let hj = &hcols[w[j]];
        if !hj.is_zero() {
            let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            for mask in 0u64..(1u64 << others.len()) {
                let ones = mask.count_ones() as u64;
                let coef = leibniz(n as u64, ones + 1);
                let mut acc: Lin<Word> = Lin::basis(vec![]);
                for i in 0..n {
                    let img: Vector = if i == j {
                        hj.clone()
                    } else {
                        let k = others.iter().position(|&o| o == i).unwrap();
                        if mask >> k & 1 == 1 {
                            picols[w[i]].clone()
                        } else {
                            Vector::basis(w[i])
                        }
                    };
                    acc = append(&acc, &img);
                    if acc.is_zero() {
                        break;
                    }
                }
                let s = if pre.rem_euclid(2) == 1 { -coef } else { coef };
                out.add_scaled(&acc, &s);
            }
        }
        pre += deg(w[j]);
    }
    out
}

fn append(acc: &Lin<Word>, v: &Vector) -> Lin<Word> {
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

/// The symmetrized homotopy `h_n^Σ` on `A^{⊗n}` (unsuspended), as a map on the basis of words.
pub fn symmetrized_homotopy(c: &Contraction, n: usize) -> SparseMap {
    let sp = &c.big.space;
    let pi = c.g.compose(&c.f);
    let words = all_words(sp.dim(), n);
    let index: BTreeMap<Word, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let mut tsp = GradedSpace::new();
    for w in &words {
        let names: Vec<&str> = w.iter().map(|&i| sp.name(i)).collect();
        tsp.push(&names.join("|"), w.iter().map(|&i| sp.deg(i)).sum());
    }
    let deg = |i: usize| sp.deg(i);
    SparseMap::from_fn(&tsp, &tsp, 1, |j| {
        hsigma_word(&c.h.cols, &pi.cols, &deg, &words[j])
            .map_keys(|u| index.get(u).map(|&k| (k, Q::one())))
    })
}

/// The contraction of bar constructions induced by a contraction of `A` onto `B`.
struct BarData<'a> {
    flavor: Flavor,
    a: &'a InfinityStructure,
    c: &'a Contraction,
    hs: Vec<Vector>,
    pi: Vec<Vector>,
}

impl<'a> BarData<'a> {
    fn new(a: &'a InfinityStructure, c: &'a Contraction) -> Self {
        let hs = c.h.cols.iter().map(|v| v.neg()).collect();
        let pi = c.g.compose(&c.f).cols;
        BarData {
            flavor: a.flavor,
            a,
            c,
            hs,
            pi,
        }
    }

    fn sdeg_a(&self, i: usize) -> i64 {
        self.c.big.space.deg(i) + 1
    }

    fn sdeg_b(&self, i: usize) -> i64 {
        self.c.small.space.deg(i) + 1
    }

    fn canon_a(&self, t: Lin<Word>) -> Lin<Word> {
        if self.flavor != Flavor::Lie {
            return t;
        }
        canon(t, &|i| self.sdeg_a(i))
    }

    fn canon_b(&self, t: Lin<Word>) -> Lin<Word> {
        if self.flavor != Flavor::Lie {
            return t;
        }
        canon(t, &|i| self.sdeg_b(i))
    }

    fn letterwise(cols: &[Vector], w: &[usize]) -> Lin<Word> {
        let mut acc: Lin<Word> = Lin::basis(vec![]);
        for &x in w {
            acc = append(&acc, &cols[x]);
        }
        acc
    }

    fn big_g(&self, t: &Lin<Word>) -> Lin<Word> {
        self.canon_a(t.apply(|w| Self::letterwise(&self.c.g.cols, w)))
    }

    fn big_f(&self, t: &Lin<Word>) -> Lin<Word> {
        self.canon_b(t.apply(|w| Self::letterwise(&self.c.f.cols, w)))
    }

    fn big_h(&self, t: &Lin<Word>) -> Lin<Word> {
        let deg = |i: usize| self.sdeg_a(i);
        self.canon_a(t.apply(|w| hsigma_word(&self.hs, &self.pi, &deg, w)))
    }

    fn b(&self, t: &Lin<Word>) -> Lin<Word> {
        t.apply(|w| self.a.coderivation_apply(w, false))
    }

    /// `Σ x = Σ_k b (H b)^k x`.
    fn sigma(&self, x: &Lin<Word>) -> Lin<Word> {
        let mut total = Lin::zero();
        let mut y = self.b(x);
        while !y.is_zero() {
            total.add(&y);
            y = self.b(&self.big_h(&y));
        }
        total
    }
}

fn canon(t: Lin<Word>, deg: &dyn Fn(usize) -> i64) -> Lin<Word> {
    let mut out = Lin::zero();
    for (w, c) in t.iter() {
        if let Some((cw, s)) = sym_canonical(w, deg) {
            out.add_term(cw, if s < 0 { -c.clone() } else { c.clone() });
        }
    }
    out
}

fn weight_one(t: &Lin<Word>) -> Vector {
    t.map_keys(|w| {
        if w.len() == 1 {
            Some((w[0], Q::one()))
        } else {
            None
        }
    })
}

/// Result of transferring a structure along a contraction.
#[derive(Clone, Debug)]
pub struct Transferred {
    pub structure: InfinityStructure,
    /// Extension of `f` to an ∞-quasi-isomorphism `A → B`.
    pub f: InfinityMorphism,
    /// Extension of `g` to an ∞-quasi-isomorphism `B → A`.
    pub g: InfinityMorphism,
    pub contraction: Contraction,
}

/// Words on which an arity-`n` map of the given output offset can be nonzero.
fn candidate_words(
    flavor: Flavor,
    src: &GradedSpace,
    tgt: &GradedSpace,
    n: usize,
    offset: i64,
) -> Vec<Word> {
    let tdegs = tgt.degrees();
    let words = if flavor == Flavor::Lie {
        sorted_words(src.dim(), n)
            .into_iter()
            .filter(|w| sym_canonical(w, &|i| src.deg(i) + 1).is_some())
            .collect::<Vec<_>>()
    } else {
        all_words(src.dim(), n)
    };
    words
        .into_iter()
        .filter(|w| tdegs.contains(&(w.iter().map(|&i| src.deg(i) + 1).sum::<i64>() + offset)))
        .collect()
}

/// Transfer `s` along `c`. The arity bound of the output comes from degrees when possible, and
/// otherwise from `max_arity`, recorded as a declared truncation.
pub fn transfer(
    s: &InfinityStructure,
    c: &Contraction,
    max_arity: Option<usize>,
) -> Result<Transferred, Error> {
    if s.space != c.big.space || s.d != c.big.d {
        return Err(Error::Domain(
            "contraction does not start at the complex of the structure".into(),
        ));
    }
    let bad = c.violations();
    if !bad.is_empty() {
        return Err(Error::Domain(format!(
            "not a contraction: {}",
            bad.join(", ")
        )));
    }
    let flavor = s.flavor;
    let a_sp = &c.big.space;
    let b_sp = &c.small.space;
    let bd = BarData::new(s, c);
    let (nb, cert) = match degree_support_bound_between(b_sp, b_sp, -2) {
        Some(n) => (n, true),
        None => match max_arity {
            Some(n) => (n, false),
            None => return Err(Error::Domain(
                "degrees do not bound the arity of the transferred structure; give an arity bound"
                    .into(),
            )),
        },
    };
    let mut out = InfinityStructure::new(flavor, b_sp.clone());
    out.d = c.small.d.clone();
    let mut gm = InfinityMorphism::from_linear(&out, s, &c.g);
    for n in 2..=nb {
        for w in candidate_words(flavor, b_sp, b_sp, n, -2) {
            let gw = bd.big_g(&Lin::basis(w.clone()));
            let total = bd.sigma(&gw);
            let bv = weight_one(&bd.big_f(&total));
            let op = InfinityStructure::op_from_bar(flavor, b_sp, &w, &bv);
            if !op.is_zero() {
                if flavor == Flavor::Lie {
                    out.set_antisymmetric(n, w.clone(), op);
                } else {
                    out.set_raw(n, w.clone(), op);
                }
            }
        }
    }
    let ng = degree_support_bound_between(b_sp, a_sp, -1).unwrap_or(nb);
    for n in 2..=ng {
        for w in candidate_words(flavor, b_sp, a_sp, n, -1) {
            let gw = bd.big_g(&Lin::basis(w.clone()));
            let total = bd.sigma(&gw);
            let hv: Vector = weight_one(&total)
                .iter()
                .fold(Vector::zero(), |mut acc, (k, x)| {
                    acc.add_scaled(&bd.hs[*k], x);
                    acc
                });
            let comp = InfinityMorphism::from_bar_value(flavor, b_sp, &w, &hv);
            if flavor == Flavor::Lie {
                set_antisymmetric_component(&mut gm, n, w, comp);
            } else {
                gm.set(n, w, comp);
            }
        }
    }
    if cert {
        out.arity_bound = nb.max(out.top_arity()).max(2);
        out.certificate = Some(Certificate::DegreeSupport(nb));
    } else {
        out.arity_bound = nb.max(2);
        out.certificate = Some(Certificate::Declared(nb.max(2)));
    }
    gm.target = s.clone();
    gm.source = out.clone();
    let mut fm = InfinityMorphism::from_linear(s, &out, &c.f);
    let nf = degree_support_bound_between(a_sp, b_sp, -1).unwrap_or(nb);
    for n in 2..=nf {
        for w in candidate_words(flavor, a_sp, b_sp, n, -1) {
            let hx = bd.big_h(&Lin::basis(w.clone()));
            let total = bd.sigma(&hx);
            let fv = weight_one(&bd.big_f(&total));
            let comp = InfinityMorphism::from_bar_value(flavor, a_sp, &w, &fv);
            if flavor == Flavor::Lie {
                set_antisymmetric_component(&mut fm, n, w, comp);
            } else {
                fm.set(n, w, comp);
            }
        }
    }
    Ok(Transferred {
        structure: out,
        f: fm,
        g: gm,
        contraction: c.clone(),
    })
}

/// Transfer onto homology along the canonical contraction.
pub fn minimal_model(
    s: &InfinityStructure,
    max_arity: Option<usize>,
) -> Result<Transferred, Error> {
    let c = build_contraction(&s.complex());
    transfer(s, &c, max_arity)
}

/// The perturbed contraction of bar constructions, truncated at a weight.
#[derive(Clone, Debug)]
pub struct PerturbedContraction {
    pub big: Complex,
    pub small: Complex,
    pub f: SparseMap,
    pub g: SparseMap,
    pub h: SparseMap,
    /// `b' = FΣG` as a map on the small bar space.
    pub b_small: SparseMap,
    pub big_words: Vec<Word>,
    pub small_words: Vec<Word>,
}

impl PerturbedContraction {
    pub fn contraction(&self) -> Contraction {
        Contraction {
            big: self.big.clone(),
            small: self.small.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
            h: self.h.clone(),
        }
    }
}

fn bar_words(flavor: Flavor, sp: &GradedSpace, max_weight: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for n in 1..=max_weight {
        if flavor == Flavor::Lie {
            out.extend(
                sorted_words(sp.dim(), n)
                    .into_iter()
                    .filter(|w| sym_canonical(w, &|i| sp.deg(i) + 1).is_some()),
            );
        } else {
            out.extend(all_words(sp.dim(), n));
        }
    }
    out
}

fn bar_space(sp: &GradedSpace, words: &[Word]) -> GradedSpace {
    let mut g = GradedSpace::new();
    for w in words {
        let names: Vec<&str> = w.iter().map(|&i| sp.name(i)).collect();
        g.push(
            &format!("[{}]", names.join("|")),
            w.iter().map(|&i| sp.deg(i) + 1).sum(),
        );
    }
    g
}

/// The basic perturbation lemma on bar constructions (tensor coalgebras for A∞ and C∞,
/// symmetric coalgebras for L∞) up to `max_weight`.
pub fn perturb(
    s: &InfinityStructure,
    c: &Contraction,
    max_weight: usize,
) -> Result<PerturbedContraction, Error> {
    if s.space != c.big.space || s.d != c.big.d {
        return Err(Error::Domain(
            "contraction does not start at the complex of the structure".into(),
        ));
    }
    let flavor = s.flavor;
    let bd = BarData::new(s, c);
    let bw = bar_words(flavor, &c.big.space, max_weight);
    let sw = bar_words(flavor, &c.small.space, max_weight);
    let bsp = bar_space(&c.big.space, &bw);
    let ssp = bar_space(&c.small.space, &sw);
    let bidx: BTreeMap<Word, usize> = bw.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let sidx: BTreeMap<Word, usize> = sw.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let to_b = |t: &Lin<Word>| -> Vector { t.map_keys(|w| bidx.get(w).map(|&k| (k, Q::one()))) };
    let to_s = |t: &Lin<Word>| -> Vector { t.map_keys(|w| sidx.get(w).map(|&k| (k, Q::one()))) };
    // internal differentials: d on letters with d_{sA} = −s d s^{-1}
    let small_d_struct = {
        let mut x = InfinityStructure::new(flavor, c.small.space.clone());
        x.d = c.small.d.clone();
        x
    };
    let big_d = SparseMap::from_fn(&bsp, &bsp, -1, |j| {
        to_b(&s.coderivation_apply(&bw[j], true))
    });
    let bprime_cols: Vec<Vector> = sw
        .iter()
        .map(|w| to_s(&bd.big_f(&bd.sigma(&bd.big_g(&Lin::basis(w.clone()))))))
        .collect();
    let b_small = SparseMap {
        source: ssp.clone(),
        target: ssp.clone(),
        degree: -1,
        cols: bprime_cols,
    };
    let small_int = SparseMap::from_fn(&ssp, &ssp, -1, |j| {
        to_s(&small_d_struct.coderivation_apply(&sw[j], true))
    });
    let small_d = small_int.plus(&b_small);
    let f = SparseMap::from_fn(&bsp, &ssp, 0, |j| {
        let x = Lin::basis(bw[j].clone());
        let mut t = x.clone();
        t.add(&bd.sigma(&bd.big_h(&x)));
        to_s(&bd.big_f(&t))
    });
    let g = SparseMap::from_fn(&ssp, &bsp, 0, |j| {
        let gx = bd.big_g(&Lin::basis(sw[j].clone()));
        let mut t = gx.clone();
        t.add(&bd.big_h(&bd.sigma(&gx)));
        to_b(&t)
    });
    let h = SparseMap::from_fn(&bsp, &bsp, 1, |j| {
        let x = Lin::basis(bw[j].clone());
        let mut t = x.clone();
        t.add(&bd.sigma(&bd.big_h(&x)));
        to_b(&bd.big_h(&t))
    });
    Ok(PerturbedContraction {
        big: Complex::new(bsp.clone(), big_d),
        small: Complex::new(ssp, small_d),
        f,
        g,
        h,
        b_small,
        big_words: bw,
        small_words: sw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::cdga_window;
    use crate::poly::{Poly, PolyRing, SullivanModel};
    use crate::q::qf;

    #[test]
    fn triangle_rows() {
        let r = LeibnizTriangle::recursive(10);
        assert_eq!(r, LeibnizTriangle::closed(10));
        assert_eq!(r.get(3, 2), qf(1, 6));
        assert_eq!(r.get(7, 4), qf(1, 140));
    }

    fn sphere_bundle() -> InfinityStructure {
        let gens = GradedSpace::from_degrees(&[("x", -3), ("y", -3), ("z", -5)]);
        let r = PolyRing::new(gens.clone());
        let dz = r.mul(&r.gen(0), &r.gen(1));
        let m = SullivanModel::new(gens, vec![Poly::zero(), Poly::zero(), dz]).unwrap();
        cdga_window(&m, 11).0
    }

    #[test]
    fn sphere_bundle_transfer() {
        let a = sphere_bundle();
        let t = minimal_model(&a, None).unwrap();
        let s = &t.structure;
        assert_eq!(s.dim(), 5);
        let r = s.check_structure().unwrap();
        assert!(r.ok, "{:?}", r.failures);
        assert!(!s.op_is_zero(3));
        let rf = t.f.check_morphism().unwrap();
        assert!(rf.ok, "{:?}", rf.failures);
        let rg = t.g.check_morphism().unwrap();
        assert!(rg.ok, "{:?}", rg.failures);
    }

    #[test]
    fn perturbed_side_conditions() {
        let a = sphere_bundle();
        let c = build_contraction(&a.complex());
        let p = perturb(&a, &c, 3).unwrap();
        let pc = p.contraction();
        assert!(pc.big.d_squared_zero());
        assert!(pc.small.d_squared_zero());
        assert!(pc.violations().is_empty(), "{:?}", pc.violations());
    }

    #[test]
    fn cp2_has_no_higher_products() {
        let gens = GradedSpace::from_degrees(&[("x", -2), ("y", -5)]);
        let r = PolyRing::new(gens.clone());
        let dy = r.pow(&r.gen(0), 3);
        let m = SullivanModel::new(gens, vec![Poly::zero(), dy]).unwrap();
        let a = cdga_window(&m, 8).0;
        let t = minimal_model(&a, None).unwrap();
        let s = &t.structure;
        assert_eq!(s.dim(), 2);
        assert!(s.check_structure().unwrap().ok);
        for n in 3..=s.arity_bound {
            assert!(s.op_is_zero(n));
        }
        let x = s.space.index_of("x").unwrap();
        assert!(!s.op(2, &[x, x]).is_zero());
    }

    #[test]
    fn identity_contraction_is_identity() {
        let a = sphere_bundle();
        let c = Contraction::identity(&a.complex());
        let t = transfer(&a, &c, None).unwrap();
        for n in 2..=3 {
            for w in all_words(a.dim(), n) {
                assert_eq!(t.structure.op(n, &w), a.op(n, &w));
            }
        }
    }

    #[test]
    fn lie_transfer_is_valid() {
        use crate::dictionary::QuillenModel;
        use crate::free::{bracket, Tensor};
        let gens = GradedSpace::from_degrees(&[("a", 1), ("b", 1), ("c", 2), ("x", 4)]);
        let deg = |i: usize| gens.deg(i);
        let g = |i: usize| Tensor::basis(vec![i]);
        let mut dx = bracket(&g(0), &g(2), &deg);
        dx.add(&bracket(&g(0), &bracket(&g(0), &g(1), &deg), &deg));
        let qm = QuillenModel::new(
            gens.clone(),
            vec![Tensor::zero(), Tensor::zero(), Tensor::zero(), dx],
        )
        .unwrap();
        let l = qm.truncation(4).unwrap().structure;
        let r0 = l.check_structure().unwrap();
        assert!(r0.ok, "{:?}", r0.failures);
        let t = minimal_model(&l, Some(4)).unwrap();
        assert!(t.structure.is_minimal());
        let r = t.structure.check_structure().unwrap();
        assert!(r.ok, "{:?}", r.failures);
        assert!(t.g.check_morphism().unwrap().ok);
    }
}
