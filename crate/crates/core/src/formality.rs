//! ∞-isomorphism search and formality / coformality certificates.
//!
//! Between minimal structures the morphism equation in arity `n + 1` is affine in `f_n` once
//! `f_1, …, f_{n−1}` are fixed, so an ∞-isomorphism with prescribed `f_1` is searched stage by
//! stage with exact linear solves. Each stage keeps one particular solution.

use crate::free::{all_words, sorted_words, sym_canonical, Word};
use crate::infinity::{
    degree_support_bound_between, set_antisymmetric_component, Flavor, InfinityMorphism,
    InfinityStructure,
};
use crate::koszul::{
    check_homogeneous, koszul_check, quadratic_presentation, KoszulCertificate, KoszulVerdict,
};
use crate::linalg::{rank_of, span_basis, GradedSpace, Reducer, SparseMap};
use crate::q::{q, Vector, Q};
use crate::Error;
use num_traits::One;
use std::collections::BTreeMap;

/// Failure of a stage: the equation in `arity` has no solution for `f_{arity−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub arity: usize,
    pub inputs: Vec<String>,
    /// The residual of the equation on `inputs` after the best partial solve.
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct IsoSearch {
    pub morphism: InfinityMorphism,
    /// Morphism equations hold in every arity `≤ solved_through`.
    pub solved_through: usize,
    pub obstruction: Option<Obstruction>,
    /// No equation of arity above `solved_through` can be nonzero for degree reasons.
    pub complete: bool,
}

impl IsoSearch {
    pub fn found(&self) -> bool {
        self.obstruction.is_none()
    }
}

fn words_of(s: &InfinityStructure, n: usize) -> Vec<Word> {
    if s.flavor == Flavor::Lie {
        sorted_words(s.dim(), n)
            .into_iter()
            .filter(|w| sym_canonical(w, &|i| s.sdeg(i)).is_some())
            .collect()
    } else {
        all_words(s.dim(), n)
    }
}

fn word_deg(s: &InfinityStructure, w: &[usize]) -> i64 {
    w.iter().map(|&i| s.deg(i)).sum()
}

/// Letters shared with multiplicity.
fn overlap(a: &[usize], b: &[usize]) -> usize {
    let mut count: BTreeMap<usize, i64> = BTreeMap::new();
    for &x in a {
        *count.entry(x).or_default() += 1;
    }
    let mut k = 0;
    for &x in b {
        let c = count.entry(x).or_default();
        if *c > 0 {
            *c -= 1;
            k += 1;
        }
    }
    k
}

fn set_component(f: &mut InfinityMorphism, n: usize, u: &Word, v: Vector) {
    if f.source.flavor == Flavor::Lie {
        set_antisymmetric_component(f, n, u.clone(), v);
    } else {
        f.set(n, u.clone(), v);
    }
}

/// Solve the arity-`n + 1` equations for `f_n`; on failure return the obstruction.
fn solve_stage(f: &mut InfinityMorphism, n: usize) -> Option<Obstruction> {
    let src = f.source.clone();
    let tgt = f.target.clone();
    let tdegs = tgt.space.degrees();
    let eq_words: Vec<Word> = words_of(&src, n + 1)
        .into_iter()
        .filter(|w| tdegs.contains(&(word_deg(&src, w) + n as i64 - 1)))
        .collect();
    let name =
        |w: &[usize]| -> Vec<String> { w.iter().map(|&i| src.space.name(i).to_string()).collect() };
    let mut base: Vector2 = Vector2::zero();
    for (k, w) in eq_words.iter().enumerate() {
        for (t, c) in f.equation(w).iter() {
            base.add_term((k, *t), c.clone());
        }
    }
    if n == 1 {
        return base.iter().next().map(|((k, _), _)| Obstruction {
            arity: 2,
            inputs: name(&eq_words[*k]),
            residual: tgt.space.fmt_vec(&f.equation(&eq_words[*k])),
        });
    }
    if base.is_zero() {
        return None;
    }
    let mut unknowns: Vec<(Word, usize)> = Vec::new();
    for u in words_of(&src, n) {
        let want = word_deg(&src, &u) + n as i64 - 1;
        for t in tgt.space.in_degree(want) {
            unknowns.push((u.clone(), t));
        }
    }
    // shuffle constraints for C∞ components: word x -> (constraint, sign)
    let mut shuffle_rows: BTreeMap<Word, Vec<(usize, i32)>> = BTreeMap::new();
    let offset = eq_words.len();
    if src.flavor == Flavor::Comm {
        let mut c = 0;
        for u in words_of(&src, n) {
            let degs: Vec<i64> = u.iter().map(|&i| src.deg(i)).collect();
            for p in 1..n {
                for (perm, sg) in crate::free::shuffles(p as i64, (n - p) as i64)
                    .unwrap()
                    .elements
                {
                    let mut x = vec![0; n];
                    for (i, &pi) in perm.iter().enumerate() {
                        x[pi] = u[i];
                    }
                    let s = sg * crate::free::koszul_sign(&perm, &degs);
                    shuffle_rows.entry(x).or_default().push((offset + c, s));
                }
                c += 1;
            }
        }
    }
    let mut red: Reducer<(usize, usize)> = Reducer::new();
    for (u, t) in &unknowns {
        set_component(f, n, u, Vector::basis(*t));
        let mut col = Vector2::zero();
        for (k, w) in eq_words.iter().enumerate() {
            if overlap(u, w) + 1 < n {
                continue;
            }
            let mut e = f.equation(w);
            for (x, c) in base.iter() {
                if x.0 == k {
                    e.add_term(x.1, -c.clone());
                }
            }
            for (x, c) in e.iter() {
                col.add_term((k, *x), c.clone());
            }
        }
        if let Some(rows) = shuffle_rows.get(u) {
            for &(r, s) in rows {
                col.add_term((r, *t), q(s as i64));
            }
        }
        set_component(f, n, u, Vector::zero());
        red.insert(&col);
    }
    match red.solve(&base.neg()) {
        Some(sol) => {
            let mut comps: BTreeMap<Word, Vector> = BTreeMap::new();
            for (k, c) in sol.iter() {
                let (u, t) = &unknowns[*k];
                comps.entry(u.clone()).or_default().add_term(*t, c.clone());
            }
            for (u, v) in comps {
                set_component(f, n, &u, v);
            }
            None
        }
        None => {
            let (rem, _) = red.reduce(&base.neg());
            let (k, _) = *rem.iter().next().unwrap().0;
            let k = if k >= offset { 0 } else { k };
            let mut e = Vector::zero();
            for ((j, t), c) in rem.iter() {
                if *j == k {
                    e.add_term(*t, -c.clone());
                }
            }
            Some(Obstruction {
                arity: n + 1,
                inputs: name(&eq_words[k]),
                residual: tgt.space.fmt_vec(&e),
            })
        }
    }
}

type Vector2 = crate::q::Lin<(usize, usize)>;

/// Search for an ∞-morphism `source → target` between minimal structures with linear part
/// `f1`, solving the equations through arity `max_arity`.
pub fn find_infinity_iso(
    source: &InfinityStructure,
    target: &InfinityStructure,
    f1: &SparseMap,
    max_arity: usize,
) -> Result<IsoSearch, Error> {
    if source.flavor != target.flavor {
        return Err(Error::Domain("flavor mismatch".into()));
    }
    if !source.is_minimal() || !target.is_minimal() {
        return Err(Error::Domain(
            "the staged search needs minimal source and target".into(),
        ));
    }
    if source.dim() != target.dim() || rank_of(&f1.cols) != source.dim() {
        return Err(Error::Domain("f1 is not invertible".into()));
    }
    if (0..source.dim()).any(|i| {
        f1.cols[i]
            .iter()
            .any(|(t, _)| target.deg(*t) != source.deg(i))
    }) {
        return Err(Error::Domain("f1 does not preserve degrees".into()));
    }
    let mut f = InfinityMorphism::from_linear(source, target, f1);
    let bound = degree_support_bound_between(&source.space, &target.space, -2);
    let mut solved = 1;
    for k in 2..=max_arity.max(2) {
        if let Some(ob) = solve_stage(&mut f, k - 1) {
            return Ok(IsoSearch {
                morphism: f,
                solved_through: solved,
                obstruction: Some(ob),
                complete: false,
            });
        }
        solved = k;
    }
    let complete = bound.map(|b| b <= solved).unwrap_or(false);
    Ok(IsoSearch {
        morphism: f,
        solved_through: solved,
        obstruction: None,
        complete,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Formality,
    Coformality,
}

impl Property {
    fn word(self) -> &'static str {
        match self {
            Property::Formality => "formal",
            Property::Coformality => "coformal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Formal,
    NotFormal,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct FormalityCertificate {
    pub property: Property,
    pub verdict: Verdict,
    /// How the verdict was reached, with its bounds.
    pub reason: String,
    pub search: Option<IsoSearch>,
    pub koszul: Option<KoszulCertificate>,
    pub weights: Option<Vec<u32>>,
}

impl FormalityCertificate {
    pub fn label(&self) -> String {
        match self.verdict {
            Verdict::Formal => self.property.word().to_string(),
            Verdict::NotFormal => format!("not {}", self.property.word()),
            Verdict::Inconclusive => "inconclusive".to_string(),
        }
    }

    pub fn render(&self) -> String {
        format!("{}: {}", self.label(), self.reason)
    }
}

/// Formality of the space modelled by a minimal structure. C∞ and A∞ inputs are compared with
/// their binary part by an ∞-isomorphism with `f_1 = id`; L∞ inputs go through Koszulness.
pub fn formality_check(
    s: &InfinityStructure,
    max_weight: usize,
    weights: Option<&[u32]>,
    window: i64,
) -> Result<FormalityCertificate, Error> {
    check(Property::Formality, s, max_weight, weights, window)
}

/// Coformality: L∞ inputs are compared with their binary part, C∞ inputs go through Koszulness.
pub fn coformality_check(
    s: &InfinityStructure,
    max_weight: usize,
    weights: Option<&[u32]>,
    window: i64,
) -> Result<FormalityCertificate, Error> {
    if s.flavor == Flavor::Assoc {
        return Err(Error::Domain(
            "coformality is defined for C∞ and L∞ models".into(),
        ));
    }
    check(Property::Coformality, s, max_weight, weights, window)
}

fn check(
    property: Property,
    s: &InfinityStructure,
    max_weight: usize,
    weights: Option<&[u32]>,
    window: i64,
) -> Result<FormalityCertificate, Error> {
    if !s.is_minimal() {
        return Err(Error::Domain(
            "formality checks need a minimal model".into(),
        ));
    }
    let staged = match property {
        Property::Formality => s.flavor != Flavor::Lie,
        Property::Coformality => s.flavor == Flavor::Lie,
    };
    if staged {
        staged_route(property, s, max_weight)
    } else {
        koszul_route(property, s, max_weight, weights, window)
    }
}

fn cert(property: Property, verdict: Verdict, reason: String) -> FormalityCertificate {
    FormalityCertificate {
        property,
        verdict,
        reason,
        search: None,
        koszul: None,
        weights: None,
    }
}

fn staged_route(
    property: Property,
    s: &InfinityStructure,
    max_weight: usize,
) -> Result<FormalityCertificate, Error> {
    if s.top_arity() <= 2 {
        return Ok(cert(
            property,
            Verdict::Formal,
            "only binary operations".into(),
        ));
    }
    let id = SparseMap::identity(&s.space);
    let search = find_infinity_iso(s, &s.binary_part(), &id, max_weight.max(3))?;
    let (verdict, reason) = match &search.obstruction {
        None if search.complete => (
            Verdict::Formal,
            format!("∞-isomorphism with f1 = id onto the binary part, all arities (degree bound {})", search.solved_through),
        ),
        None => (
            Verdict::Formal,
            format!("∞-isomorphism with f1 = id onto the binary part through arity {}", search.solved_through),
        ),
        Some(ob) if ob.arity == 3 || (s.op_is_zero(2) && Some(ob.arity) == first_higher(s)) => (
            Verdict::NotFormal,
            format!(
                "m{} is not a coboundary: no f{} solves the arity-{} equation on ({}), residual {}",
                ob.arity,
                ob.arity - 1,
                ob.arity,
                ob.inputs.join(","),
                ob.residual
            ),
        ),
        Some(ob) => (
            Verdict::Inconclusive,
            format!(
                "staged solve with f1 = id stopped at arity {} on ({}); earlier stages fixed particular solutions",
                ob.arity,
                ob.inputs.join(",")
            ),
        ),
    };
    Ok(FormalityCertificate {
        property,
        verdict,
        reason,
        search: Some(search),
        koszul: None,
        weights: None,
    })
}

fn koszul_route(
    property: Property,
    s: &InfinityStructure,
    max_weight: usize,
    weights: Option<&[u32]>,
    window: i64,
) -> Result<FormalityCertificate, Error> {
    if s.top_arity() <= 2 {
        return strict_koszul_route(property, s, max_weight, window);
    }
    let w =
        match weights {
            Some(w) => w.to_vec(),
            None => match recursive_weights(s) {
                Some(w) => w,
                None => return Ok(cert(
                    property,
                    Verdict::Inconclusive,
                    "no weight grading with operations of weight 2 − n found in the given basis"
                        .into(),
                )),
            },
        };
    if let Err(e) = check_homogeneous(s, &w) {
        return Ok(cert(
            property,
            Verdict::Inconclusive,
            format!("given weights are not admissible: {}", e),
        ));
    }
    let k = koszul_check(s, Some(&w), max_weight, window)?;
    let (verdict, reason) = match &k.verdict {
        KoszulVerdict::KoszulUpTo(n) => (
            Verdict::Formal,
            format!("Koszul up to weight {} with weights {:?}", n, w),
        ),
        KoszulVerdict::NotKoszul { row, .. } => (
            Verdict::Inconclusive,
            format!(
                "not Koszul for weights {:?} (row {}); other gradings are not searched",
                w, row
            ),
        ),
    };
    Ok(FormalityCertificate {
        property,
        verdict,
        reason,
        search: None,
        koszul: Some(k),
        weights: Some(w),
    })
}

fn first_higher(s: &InfinityStructure) -> Option<usize> {
    s.ops
        .iter()
        .filter(|(n, t)| **n > 2 && !t.is_empty())
        .map(|(n, _)| *n)
        .min()
}

/// Weight 1 on basis elements outside the image of the operations, then propagated along
/// `w(m_n(a_1..a_n)) = Σ w(a_i) + 2 − n`.
fn recursive_weights(s: &InfinityStructure) -> Option<Vec<u32>> {
    let mut red: Reducer<usize> = Reducer::new();
    let mut outputs = Vec::new();
    for t in s.ops.values() {
        for v in t.values() {
            red.insert(v);
            outputs.push(v.clone());
        }
    }
    let w1: Vec<usize> = (0..s.dim())
        .filter(|&i| !red.contains(&Vector::basis(i)))
        .collect();
    if red.rank() + w1.len() != s.dim()
        || outputs
            .iter()
            .any(|v| v.iter().any(|(i, _)| w1.contains(i)))
    {
        return None;
    }
    let mut w: Vec<Option<i64>> = (0..s.dim()).map(|i| w1.contains(&i).then_some(1)).collect();
    loop {
        let mut changed = false;
        for (n, t) in &s.ops {
            for (word, v) in t {
                let Some(tot) = word.iter().map(|&i| w[i]).sum::<Option<i64>>() else {
                    continue;
                };
                let out = tot + 2 - *n as i64;
                for (j, _) in v.iter() {
                    match w[*j] {
                        None => {
                            if out < 1 {
                                return None;
                            }
                            w[*j] = Some(out);
                            changed = true;
                        }
                        Some(x) if x != out => return None,
                        _ => {}
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    w.into_iter().map(|x| x.map(|x| x as u32)).collect()
}

/// Strict algebras: the filtration by powers (lower central series) is intrinsic, so a
/// non-Koszul associated graded rules out any Koszul grading.
fn strict_koszul_route(
    property: Property,
    s: &InfinityStructure,
    max_weight: usize,
    window: i64,
) -> Result<FormalityCertificate, Error> {
    let Some(g) = associated_graded(s) else {
        return Ok(cert(
            property,
            Verdict::Inconclusive,
            "the filtration by powers does not terminate".into(),
        ));
    };
    let w = g.weights.clone();
    let top = *w.iter().max().unwrap_or(&1) as usize;
    let bound = max_weight.max(top + 1);
    if let Err(e) = quadratic_presentation(&g.graded, Some(&w), bound) {
        let mut c = cert(
            property,
            Verdict::NotFormal,
            format!("associated graded algebra: {}", e),
        );
        c.weights = Some(w);
        return Ok(c);
    }
    let k = koszul_check(&g.graded, Some(&w), max_weight, window)?;
    let (verdict, reason) = match (&k.verdict, g.split) {
        (KoszulVerdict::NotKoszul { row, rendered, .. }, _) => (
            Verdict::NotFormal,
            format!("associated graded algebra is not Koszul: row {} has homology {}", row, rendered),
        ),
        (KoszulVerdict::KoszulUpTo(n), true) => (Verdict::Formal, format!("Koszul up to weight {}", n)),
        (KoszulVerdict::KoszulUpTo(n), false) => (
            Verdict::Inconclusive,
            format!("associated graded is Koszul up to weight {} but the filtration does not split in this basis", n),
        ),
    };
    Ok(FormalityCertificate {
        property,
        verdict,
        reason,
        search: None,
        koszul: Some(k),
        weights: Some(w),
    })
}

/// The associated graded of the filtration by powers `Γ¹ = A`, `Γ^{k+1} = m_2(A, Γ^k)`, on a
/// basis adapted to it.
pub struct AssociatedGraded {
    pub graded: InfinityStructure,
    pub weights: Vec<u32>,
    /// Columns: the adapted basis in the original coordinates.
    pub basis: SparseMap,
    /// The original structure is already graded in the adapted basis.
    pub split: bool,
}

pub fn associated_graded(s: &InfinityStructure) -> Option<AssociatedGraded> {
    let dim = s.dim();
    let mut gamma: Vec<Vec<Vector>> = vec![(0..dim).map(Vector::basis).collect()];
    while !gamma.last().unwrap().is_empty() {
        if gamma.len() > dim + 1 {
            return None;
        }
        let prev = gamma.last().unwrap();
        let mut images = Vec::new();
        for i in 0..dim {
            for b in prev {
                let mut v = Vector::zero();
                for (j, c) in b.iter() {
                    v.add_scaled(&s.op(2, &[i, *j]), c);
                }
                images.push(v);
            }
        }
        let next = span_basis(&images);
        if next.len() == prev.len() {
            return None;
        }
        gamma.push(next);
    }
    let top = gamma.len() - 1;
    let mut red: Reducer<usize> = Reducer::new();
    let mut layers: Vec<Vec<Vector>> = vec![vec![]; top + 1];
    for k in (1..=top).rev() {
        let layer = &gamma[k - 1];
        let mut inside: Reducer<usize> = Reducer::new();
        for v in layer {
            inside.insert(v);
        }
        let mut cands: Vec<Vector> = (0..dim)
            .map(Vector::basis)
            .filter(|e| inside.contains(e))
            .collect();
        cands.extend(layer.iter().cloned());
        for v in cands {
            if red.rank() == layer.len() {
                break;
            }
            if red.insert(&v) {
                layers[k].push(v);
            }
        }
    }
    let mut space = GradedSpace::new();
    let mut cols = Vec::new();
    let mut weights = Vec::new();
    for (k, layer) in layers.iter().enumerate() {
        for v in layer {
            let name = if v.len() == 1 && v.iter().next().unwrap().1.is_one() {
                s.space.name(*v.iter().next().unwrap().0).to_string()
            } else {
                format!("({})", s.space.fmt_vec(v))
            };
            space.push_weighted(&name, s.space.vec_degree(v).unwrap_or(0), Some(k as u32));
            cols.push(v.clone());
            weights.push(k as u32);
        }
    }
    let p = SparseMap::from_fn(&space, &s.space, 0, |j| cols[j].clone());
    let mut inv_red: Reducer<usize> = Reducer::new();
    for c in &cols {
        inv_red.insert(c);
    }
    let p_inv = SparseMap::from_fn(&s.space, &space, 0, |i| {
        inv_red.solve(&Vector::basis(i)).expect("adapted basis")
    });
    let conj = s.conjugate(&p_inv, &p);
    let mut graded = conj.clone();
    let mut split = true;
    for t in graded.ops.values_mut() {
        for (word, v) in t.iter_mut() {
            let want: u32 = word.iter().map(|&i| weights[i]).sum();
            let kept = v.map_keys(|j| (weights[*j] == want).then(|| (*j, Q::one())));
            if kept != *v {
                split = false;
                *v = kept;
            }
        }
        t.retain(|_, v| !v.is_zero());
    }
    for i in 0..graded.dim() {
        graded.space.basis[i].weight = Some(weights[i]);
    }
    Some(AssociatedGraded {
        graded,
        weights,
        basis: p,
        split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{cdga_window, linfty_from_sullivan};
    use crate::poly::{Poly, PolyRing, SullivanModel};
    use crate::transfer::minimal_model;

    fn sphere_bundle() -> SullivanModel {
        let gens = GradedSpace::from_degrees(&[("x", -3), ("y", -3), ("z", -5)]);
        let ring = PolyRing::new(gens.clone());
        let xy = ring.mul(&ring.gen(0), &ring.gen(1));
        SullivanModel::new(gens, vec![Poly::zero(), Poly::zero(), xy]).unwrap()
    }

    #[test]
    fn sphere_bundle_is_not_formal() {
        let (w, _) = cdga_window(&sphere_bundle(), 12);
        let m = minimal_model(&w, Some(4)).unwrap().structure;
        let c = formality_check(&m, 4, None, 0).unwrap();
        assert_eq!(c.verdict, Verdict::NotFormal, "{}", c.render());
        let l = linfty_from_sullivan(&sphere_bundle()).unwrap();
        let c = formality_check(&l, 4, None, 0).unwrap();
        assert_eq!(c.verdict, Verdict::NotFormal, "{}", c.render());
        let c = coformality_check(&l, 4, None, 0).unwrap();
        assert_eq!(c.verdict, Verdict::Formal, "{}", c.render());
    }

    #[test]
    fn cpn_is_formal_not_coformal() {
        let gens = GradedSpace::from_degrees(&[("x", -2), ("y", -7)]);
        let ring = PolyRing::new(gens.clone());
        let m = SullivanModel::new(gens, vec![Poly::zero(), ring.pow(&ring.gen(0), 4)]).unwrap();
        let l = linfty_from_sullivan(&m).unwrap();
        let c = formality_check(&l, 4, None, 12).unwrap();
        assert_eq!(c.verdict, Verdict::Formal, "{}", c.render());
        assert_eq!(c.weights, Some(vec![1, 2]));
        let c = coformality_check(&l, 4, None, 12).unwrap();
        assert_eq!(c.verdict, Verdict::NotFormal, "{}", c.render());
        let (w, _) = cdga_window(&m, 6);
        let h = minimal_model(&w, Some(3)).unwrap().structure;
        let c = coformality_check(&h, 4, None, 0).unwrap();
        assert_eq!(c.verdict, Verdict::NotFormal, "{}", c.render());
        assert_eq!(
            formality_check(&h, 4, None, 0).unwrap().verdict,
            Verdict::Formal
        );
    }

    #[test]
    fn wedge_models_are_isomorphic() {
        use crate::dictionary::{cinfty_from_quillen, QuillenModel};
        use crate::free::{bracket, Tensor};
        let gens = GradedSpace::from_degrees(&[("a", 1), ("b", 1), ("c", 2), ("x", 4)]);
        let deg = |i: usize| gens.deg(i);
        let ac = bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![2]), &deg);
        let ab = bracket(&Tensor::basis(vec![0]), &Tensor::basis(vec![1]), &deg);
        let mut d2 = ac.clone();
        d2.add(&bracket(&Tensor::basis(vec![0]), &ab, &deg));
        let z = Tensor::zero();
        let c1 = cinfty_from_quillen(
            &QuillenModel::new(gens.clone(), vec![z.clone(), z.clone(), z.clone(), ac]).unwrap(),
        )
        .unwrap();
        let c2 = cinfty_from_quillen(
            &QuillenModel::new(gens, vec![z.clone(), z.clone(), z, d2]).unwrap(),
        )
        .unwrap();
        let id = SparseMap::identity(&c1.space);
        let found = find_infinity_iso(&c1, &c2, &id, 4).unwrap();
        assert!(found.found() && found.complete);
        let r = found.morphism.check_morphism().unwrap();
        assert!(r.ok, "{:?}", r.failures);
        assert!(found.morphism.top_arity() >= 2);
        let c = formality_check(&c2, 4, None, 0).unwrap();
        assert_eq!(c.verdict, Verdict::Formal, "{}", c.render());
    }
}
