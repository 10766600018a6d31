//! Massey products and Lie–Massey products through defining systems, and their comparison
//! with the operations of a transferred minimal structure.
//!
//! Associative case: chains `a_{i,j}` with `d a_{i,j} = Σ_{i<k<j} ā_{i,k} a_{k,j}`, `ā = (−1)^{|a|+1} a`.
//! Lie case: chains `u_S` with `d u_S = Σ (−1)^{e_{V,W}} [u_V, u_W]` over `S = V ⊔ W`, `min S ∈ V`.

use crate::free::reorder_sign;
use crate::infinity::{Flavor, InfinityStructure};
use crate::linalg::{build_contraction, Contraction, Reducer};
use crate::q::{sign, Vector, Q};
use crate::Error;
use std::collections::BTreeMap;

/// Strict dg algebra view: `d` and the binary operation of a structure.
struct Strict<'a> {
    s: &'a InfinityStructure,
    boundaries: BTreeMap<i64, (Reducer<usize>, Vec<usize>)>,
}

impl<'a> Strict<'a> {
    fn new(s: &'a InfinityStructure) -> Result<Self, Error> {
        if s.top_arity() > 2 {
            return Err(Error::Domain(
                "Massey products need a strict dg algebra (m_n = 0 for n ≥ 3)".into(),
            ));
        }
        Ok(Strict {
            s,
            boundaries: BTreeMap::new(),
        })
    }

    /// A chain `a` of degree `deg` with `d a = c`, if one exists.
    fn primitive(&mut self, c: &Vector, deg: i64) -> Option<Vector> {
        if c.is_zero() {
            return Some(Vector::zero());
        }
        let s = self.s;
        let (red, src) = self.boundaries.entry(deg).or_insert_with(|| {
            let src = s.space.in_degree(deg);
            let mut red = Reducer::new();
            for &i in &src {
                red.insert(&s.d.cols[i]);
            }
            (red, src)
        });
        let combo = red.solve(c)?;
        let mut a = Vector::zero();
        for (k, x) in combo.iter() {
            a.add_term(src[*k], x.clone());
        }
        Some(a)
    }

    fn cycles(&self, deg: i64) -> Vec<Vector> {
        let src = self.s.space.in_degree(deg);
        let cols: Vec<Vector> = src.iter().map(|&i| self.s.d.cols[i].clone()).collect();
        crate::linalg::rank_kernel_cols(&cols)
            .kernel
            .iter()
            .map(|v| v.map_keys(|k| Some((src[*k], Q::from_integer(1.into())))))
            .collect()
    }
}

fn bar(v: &Vector, deg: i64) -> Vector {
    v.scaled(&sign(deg.rem_euclid(2) == 0))
}

/// Outcome of a Massey product computation.
#[derive(Clone, Debug)]
pub enum MasseyProduct {
    Defined {
        /// Degree of the product.
        degree: i64,
        /// A cycle representing one element of the product.
        representative: Vector,
        /// The same element in homology coordinates.
        class: Vector,
        /// Homology classes spanning the indeterminacy found by varying the last-solved chains.
        indeterminacy: Vec<Vector>,
        /// The chains of the defining system, keyed by index.
        chains: BTreeMap<Vec<usize>, Vector>,
    },
    Undefined {
        /// The equation that has no solution.
        equation: String,
    },
}

impl MasseyProduct {
    pub fn is_defined(&self) -> bool {
        matches!(self, MasseyProduct::Defined { .. })
    }

    /// Whether the homology class `x` lies in the product.
    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            MasseyProduct::Undefined { .. } => false,
            MasseyProduct::Defined {
                class,
                indeterminacy,
                ..
            } => {
                let mut red = Reducer::new();
                for v in indeterminacy {
                    red.insert(v);
                }
                let mut diff = x.clone();
                diff.sub(class);
                red.contains(&diff)
            }
        }
    }

    /// Whether the product contains zero.
    pub fn contains_zero(&self) -> bool {
        self.contains(&Vector::zero())
    }
}

fn check_cycles(s: &InfinityStructure, reps: &[Vector]) -> Result<Vec<i64>, Error> {
    let mut degs = Vec::new();
    for (k, r) in reps.iter().enumerate() {
        if !s.d.apply(r).is_zero() {
            return Err(Error::Domain(format!(
                "class {} is not represented by a cycle",
                k + 1
            )));
        }
        degs.push(
            s.space
                .vec_degree(r)
                .ok_or_else(|| Error::Domain(format!("class {} is not homogeneous", k + 1)))?,
        );
    }
    Ok(degs)
}

fn homology_coords(c: &Contraction, v: &Vector) -> Vector {
    c.f.apply(v)
}

/// The Massey product `⟨x₁,…,x_n⟩` of classes represented by the cycles `reps` in a strict dg algebra.
pub fn massey_product(s: &InfinityStructure, reps: &[Vector]) -> Result<MasseyProduct, Error> {
    if s.flavor == Flavor::Lie {
        return Err(Error::Domain(
            "use lie_massey_product for dg Lie algebras".into(),
        ));
    }
    let n = reps.len();
    if n < 2 {
        return Err(Error::Usage(
            "a Massey product needs at least two classes".into(),
        ));
    }
    let degs = check_cycles(s, reps)?;
    let mut a = Strict::new(s)?;
    let c = build_contraction(&s.complex());
    let mut chains: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    let mut cdeg: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for i in 0..n {
        chains.insert((i, i + 1), reps[i].clone());
        cdeg.insert((i, i + 1), degs[i]);
    }
    let rhs = |chains: &BTreeMap<(usize, usize), Vector>,
               cdeg: &BTreeMap<(usize, usize), i64>,
               i: usize,
               j: usize| {
        let mut t = Vector::zero();
        for k in i + 1..j {
            t.add(&op2(
                s,
                &bar(&chains[&(i, k)], cdeg[&(i, k)]),
                &chains[&(k, j)],
            ));
        }
        t
    };
    for len in 2..n {
        for i in 0..=n - len {
            let j = i + len;
            let t = rhs(&chains, &cdeg, i, j);
            let deg = (i..j).map(|k| degs[k]).sum::<i64>() + len as i64 - 1;
            match a.primitive(&t, deg) {
                Some(x) => {
                    chains.insert((i, j), x);
                    cdeg.insert((i, j), deg);
                }
                None => {
                    return Ok(MasseyProduct::Undefined {
                        equation: format!("d a({},{}) = Σ ā a has no solution", i, j),
                    })
                }
            }
        }
    }
    let rep = rhs(&chains, &cdeg, 0, n);
    let degree = degs.iter().sum::<i64>() + n as i64 - 2;
    let mut indeterminacy = Vec::new();
    if n >= 3 {
        for z in a.cycles(cdeg[&(0, n - 1)]) {
            let v = op2(s, &bar(&z, cdeg[&(0, n - 1)]), &chains[&(n - 1, n)]);
            indeterminacy.push(homology_coords(&c, &v));
        }
        for z in a.cycles(cdeg[&(1, n)]) {
            let v = op2(s, &bar(&chains[&(0, 1)], degs[0]), &z);
            indeterminacy.push(homology_coords(&c, &v));
        }
    }
    indeterminacy.retain(|v| !v.is_zero());
    Ok(MasseyProduct::Defined {
        degree,
        class: homology_coords(&c, &rep),
        representative: rep,
        indeterminacy,
        chains: chains
            .into_iter()
            .map(|((i, j), v)| (vec![i, j], v))
            .collect(),
    })
}

/// Bilinear extension of the binary operation.
fn op2(s: &InfinityStructure, u: &Vector, v: &Vector) -> Vector {
    let mut out = Vector::zero();
    for (i, a) in u.iter() {
        for (j, b) in v.iter() {
            out.add_scaled(&s.op(2, &[*i, *j]), &(a * b));
        }
    }
    out
}

/// Ordered partitions `S = V ⊔ W` with `min S ∈ V`, both nonempty, and the sign `(−1)^{e_{V,W}}`.
fn lie_splits(set: &[usize], degs: &[i64]) -> Vec<(Vec<usize>, Vec<usize>, i32)> {
    let m = set.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (m - 1)) {
        let mut v = vec![set[0]];
        let mut w = Vec::new();
        for (k, &x) in set.iter().enumerate().skip(1) {
            if mask >> (k - 1) & 1 == 1 {
                v.push(x);
            } else {
                w.push(x);
            }
        }
        if w.is_empty() {
            continue;
        }
        let sd: Vec<i64> = set.iter().map(|&x| degs[x] + 1).collect();
        let order: Vec<usize> = v
            .iter()
            .chain(w.iter())
            .map(|x| set.iter().position(|y| y == x).unwrap())
            .collect();
        let mut sg = reorder_sign(&order, &sd);
        let ev: i64 = v.iter().map(|&x| degs[x] + 1).sum();
        if ev.rem_euclid(2) == 1 {
            sg = -sg;
        }
        out.push((v, w, sg));
    }
    out
}

/// The Lie–Massey product `⟨α₁,…,α_n⟩` of classes represented by cycles in a dg Lie algebra.
pub fn lie_massey_product(s: &InfinityStructure, reps: &[Vector]) -> Result<MasseyProduct, Error> {
    if s.flavor != Flavor::Lie {
        return Err(Error::Domain(
            "lie_massey_product needs a dg Lie algebra".into(),
        ));
    }
    let n = reps.len();
    if n < 2 {
        return Err(Error::Usage(
            "a Lie–Massey product needs at least two classes".into(),
        ));
    }
    let degs = check_cycles(s, reps)?;
    let mut a = Strict::new(s)?;
    let c = build_contraction(&s.complex());
    let mut chains: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();
    for i in 0..n {
        chains.insert(vec![i], reps[i].clone());
    }
    let rhs = |chains: &BTreeMap<Vec<usize>, Vector>, set: &[usize]| {
        let mut t = Vector::zero();
        for (v, w, sg) in lie_splits(set, &degs) {
            t.add_scaled(
                &op2(s, &chains[&v], &chains[&w]),
                &Q::from_integer(sg.into()),
            );
        }
        t
    };
    let full: Vec<usize> = (0..n).collect();
    for size in 2..n {
        for set in crate::free::subsets(n, size) {
            let t = rhs(&chains, &set);
            let deg = set.iter().map(|&k| degs[k]).sum::<i64>() + size as i64 - 1;
            match a.primitive(&t, deg) {
                Some(x) => {
                    chains.insert(set, x);
                }
                None => {
                    return Ok(MasseyProduct::Undefined {
                        equation: format!("d u{:?} = Σ ±[u_V, u_W] has no solution", set),
                    })
                }
            }
        }
    }
    let rep = rhs(&chains, &full);
    let degree = degs.iter().sum::<i64>() + n as i64 - 2;
    let mut indeterminacy = Vec::new();
    if n >= 3 {
        for (v, w, sg) in lie_splits(&full, &degs) {
            let sg = Q::from_integer(sg.into());
            if v.len() == n - 1 {
                let deg = v.iter().map(|&k| degs[k]).sum::<i64>() + v.len() as i64 - 1;
                for z in a.cycles(deg) {
                    indeterminacy.push(homology_coords(&c, &op2(s, &z, &chains[&w]).scaled(&sg)));
                }
            }
            if w.len() == n - 1 {
                let deg = w.iter().map(|&k| degs[k]).sum::<i64>() + w.len() as i64 - 1;
                for z in a.cycles(deg) {
                    indeterminacy.push(homology_coords(&c, &op2(s, &chains[&v], &z).scaled(&sg)));
                }
            }
        }
    }
    indeterminacy.retain(|v| !v.is_zero());
    Ok(MasseyProduct::Defined {
        degree,
        class: homology_coords(&c, &rep),
        representative: rep,
        indeterminacy,
        chains,
    })
}

/// Result of comparing a Massey product with the operation `m_n` (or `l_n`) of a minimal model.
#[derive(Clone, Debug)]
pub struct Comparison {
    /// `e = Σ (n − i)|x_i|`.
    pub e: i64,
    /// `(−1)^e m_n(x₁,…,x_n)` in homology coordinates.
    pub signed_operation: Vector,
    /// Whether `(−1)^e m_n(x₁,…,x_n)` lies in the product.
    pub member: bool,
    /// Whether `−(−1)^e m_n(x₁,…,x_n)` lies in the product.
    pub opposite_member: bool,
    /// Whether `m_k = 0` for all `k ≤ n − 2`, which makes membership meaningful.
    pub hypotheses_hold: bool,
    /// Quotient-level agreement modulo the images of `m_k`, `k < n`.
    pub agrees_modulo_lower: bool,
}

/// Compare `⟨x₁,…,x_n⟩` with `m_n` of the minimal structure `minimal` on the homology of `s`,
/// whose coordinates are those of `build_contraction(s.complex())`.
pub fn compare_products(
    s: &InfinityStructure,
    minimal: &InfinityStructure,
    reps: &[Vector],
    product: &MasseyProduct,
) -> Result<Comparison, Error> {
    let n = reps.len();
    let c = build_contraction(&s.complex());
    let degs = check_cycles(s, reps)?;
    let classes: Vec<usize> = reps
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let v = c.f.apply(r);
            if v.len() == 1 && v.iter().next().unwrap().1 == &Q::from_integer(1.into()) {
                Ok(*v.iter().next().unwrap().0)
            } else {
                Err(Error::Domain(format!(
                    "class {} is not a homology basis element",
                    k + 1
                )))
            }
        })
        .collect::<Result<_, _>>()?;
    let e: i64 = degs
        .iter()
        .enumerate()
        .map(|(i, d)| (n - 1 - i) as i64 * d)
        .sum();
    let op = minimal.op(n, &classes).scaled(&sign(e.rem_euclid(2) == 1));
    let hypotheses_hold = (1..=n.saturating_sub(2)).all(|k| minimal.op_is_zero(k));
    let member = product.contains(&op);
    let opposite_member = product.contains(&op.neg());
    // images of lower operations in the degree of the product
    let mut lower = Reducer::new();
    if let MasseyProduct::Defined {
        degree,
        indeterminacy,
        ..
    } = product
    {
        for v in indeterminacy {
            lower.insert(v);
        }
        for k in 2..n {
            for w in minimal.words_with_output(k, 0, false) {
                let v = minimal.op(k, &w);
                if !v.is_zero() && minimal.space.vec_degree(&v) == Some(*degree) {
                    lower.insert(&v);
                }
            }
        }
    }
    let agrees_modulo_lower = match product {
        MasseyProduct::Defined { class, .. } => {
            let mut diff = class.clone();
            diff.sub(&op);
            lower.contains(&diff)
        }
        MasseyProduct::Undefined { .. } => false,
    };
    Ok(Comparison {
        e,
        signed_operation: op,
        member,
        opposite_member,
        hypotheses_hold,
        agrees_modulo_lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::cdga_window;
    use crate::linalg::GradedSpace;
    use crate::poly::{Poly, PolyRing, SullivanModel};
    use crate::transfer::minimal_model;

    fn sphere_bundle() -> (InfinityStructure, Vec<crate::poly::Mono>) {
        let gens = GradedSpace::from_degrees(&[("x", -3), ("y", -3), ("z", -5)]);
        let r = PolyRing::new(gens.clone());
        let dz = r.mul(&r.gen(0), &r.gen(1));
        let m = SullivanModel::new(gens, vec![Poly::zero(), Poly::zero(), dz]).unwrap();
        cdga_window(&m, 11)
    }

    #[test]
    fn triple_product_on_sphere_bundle() {
        let (a, _) = sphere_bundle();
        let x = Vector::basis(a.space.index_of("x").unwrap());
        let y = Vector::basis(a.space.index_of("y").unwrap());
        let p = massey_product(&a, &[x.clone(), x.clone(), y.clone()]).unwrap();
        let MasseyProduct::Defined {
            representative,
            indeterminacy,
            ..
        } = &p
        else {
            panic!()
        };
        let xz = a.space.index_of("x*z").unwrap();
        assert_eq!(representative, &Vector::basis(xz));
        assert!(indeterminacy.is_empty());
        assert!(!p.contains_zero());
        let t = minimal_model(&a, None).unwrap();
        let cmp = compare_products(&a, &t.structure, &[x.clone(), x, y], &p).unwrap();
        assert!(cmp.hypotheses_hold);
        assert!(cmp.member || cmp.opposite_member);
        eprintln!("{:?}", cmp);
    }

    #[test]
    fn binary_sign() {
        let (a, _) = sphere_bundle();
        let x = Vector::basis(a.space.index_of("x").unwrap());
        let yz = Vector::basis(a.space.index_of("y*z").unwrap());
        let p = massey_product(&a, &[x.clone(), yz.clone()]).unwrap();
        let MasseyProduct::Defined { representative, .. } = &p else {
            panic!()
        };
        // |x| = −3 is odd, so the sign (−1)^{|x|+1} is +1
        assert_eq!(
            representative,
            &a.op(
                2,
                &[
                    a.space.index_of("x").unwrap(),
                    a.space.index_of("y*z").unwrap()
                ]
            )
        );
    }
}
