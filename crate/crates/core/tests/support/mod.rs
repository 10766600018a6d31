//! Seeded random inputs and the property checks shared by `properties` and `acceptance`.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rhtkit::dictionary::{cdga_window, linfty_from_sullivan, QuillenModel};
use rhtkit::free::{bracket, Tensor};
use rhtkit::graph::{DecoratedGraph, GraphComplex, Port};
use rhtkit::infinity::{shuffle_sum, Flavor, InfinityStructure};
use rhtkit::koszul::{
    koszul_dual, lambda2_basis, same_presentation, Relations, WeightedPresentation,
};
use rhtkit::linalg::{build_contraction, GradedSpace, SparseMap};
use rhtkit::mc::{twist, BchGroup, MaurerCartanElement};
use rhtkit::poly::{Poly, PolyRing, SullivanModel};
use rhtkit::q::{q, qf, Vector, Q};
use rhtkit::transfer::{minimal_model, perturb};
use std::collections::BTreeMap;

pub const CASES: u32 = 200;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_q(r: &mut ChaCha8Rng) -> Q {
    let mut n = 0;
    while n == 0 {
        n = r.gen_range(-3..=3);
    }
    qf(n, r.gen_range(1..=2))
}

/// `(Λ(closed gens, z), dz = random combination of monomials of one degree)`.
pub fn random_sullivan(r: &mut ChaCha8Rng) -> SullivanModel {
    let mut gens = GradedSpace::new();
    let k = r.gen_range(1..=2);
    gens.push("a", -2);
    if k == 2 {
        gens.push("b", *[-2, -3].choose(r).unwrap());
    }
    let ring = PolyRing::new(gens.clone());
    // candidate targets: monomials of word length 2 or 3 in the closed generators
    let monos: Vec<_> = ring
        .monomials_upto(9)
        .into_iter()
        .filter(|m| (2..=3).contains(&PolyRing::mono_len(m)))
        .collect();
    let pick = monos.choose(r).unwrap().clone();
    let deg = ring.mono_degree(&pick);
    let mut dz = Poly::zero();
    for m in monos.iter().filter(|m| ring.mono_degree(m) == deg) {
        let c = if *m == pick {
            small_q(r)
        } else {
            q(r.gen_range(-1..=1))
        };
        dz.add_term(m.clone(), c);
    }
    if dz.is_zero() {
        dz.add_term(pick, q(1));
    }
    gens.push("z", deg + 1);
    let mut d = vec![Poly::zero(); k];
    d.push(dz.map_keys(|m| {
        let mut m = m.clone();
        m.push(0);
        Some((m, q(1)))
    }));
    SullivanModel::new(gens, d).expect("closed targets")
}

/// `𝕃(a, b, c, x)` with `|a| = |b| = 1`, `|c| = 2`, `|x| = 4` and a random `δx`.
pub fn random_quillen(r: &mut ChaCha8Rng) -> QuillenModel {
    let gens = GradedSpace::from_degrees(&[("a", 1), ("b", 1), ("c", 2), ("x", 4)]);
    let deg = |i: usize| gens.deg(i);
    let g = |i: usize| Tensor::basis(vec![i]);
    let ab = bracket(&g(0), &g(1), &deg);
    let words = [
        bracket(&g(0), &g(2), &deg),
        bracket(&g(1), &g(2), &deg),
        bracket(&g(0), &ab, &deg),
        bracket(&g(1), &ab, &deg),
    ];
    let mut dx = Tensor::zero();
    for w in &words {
        dx.add_scaled(w, &q(r.gen_range(-2..=2)));
    }
    if dx.is_zero() {
        dx = words[0].clone();
    }
    QuillenModel::new(
        gens,
        vec![Tensor::zero(), Tensor::zero(), Tensor::zero(), dx],
    )
    .expect("δ² = 0")
}

/// A product of elementary same-degree shears and its inverse.
pub fn random_automorphism(space: &GradedSpace, r: &mut ChaCha8Rng) -> (SparseMap, SparseMap) {
    let mut phi = SparseMap::identity(space);
    let mut inv = SparseMap::identity(space);
    for _ in 0..4 {
        let i = r.gen_range(0..space.dim());
        let same: Vec<usize> = space
            .in_degree(space.deg(i))
            .into_iter()
            .filter(|&j| j != i)
            .collect();
        let Some(&j) = same.choose(r) else { continue };
        let c = small_q(r);
        let mut e = SparseMap::identity(space);
        e.set(i, j, c.clone());
        let mut e_inv = SparseMap::identity(space);
        e_inv.set(i, j, -c);
        phi = e.compose(&phi);
        inv = inv.compose(&e_inv);
    }
    (phi, inv)
}

pub fn random_cdga(r: &mut ChaCha8Rng) -> InfinityStructure {
    let m = random_sullivan(r);
    let window = r.gen_range(5..=6);
    let a = cdga_window(&m, window).0;
    let (phi, inv) = random_automorphism(&a.space, r);
    a.conjugate(&phi, &inv)
}

pub fn random_dgl(r: &mut ChaCha8Rng) -> InfinityStructure {
    let l = random_quillen(r)
        .truncation(4)
        .expect("truncation")
        .structure;
    let (phi, inv) = random_automorphism(&l.space, r);
    l.conjugate(&phi, &inv)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn transfer_is_valid(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (s, bound) = if r.gen_bool(0.7) {
        (random_cdga(&mut r), None)
    } else {
        (random_dgl(&mut r), Some(4))
    };
    let t = minimal_model(&s, bound).map_err(|e| e.to_string())?;
    ensure(t.structure.is_minimal(), || {
        "transferred structure is not minimal".into()
    })?;
    let rep = t.structure.check_structure().map_err(|e| e.to_string())?;
    ensure(rep.ok, || format!("{:?}", rep.failures))
}

pub fn perturbed_side_conditions(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let s = if r.gen_bool(0.7) {
        random_cdga(&mut r)
    } else {
        random_dgl(&mut r)
    };
    let c = build_contraction(&s.complex());
    let pc = perturb(&s, &c, 2).map_err(|e| e.to_string())?.contraction();
    ensure(pc.big.d_squared_zero() && pc.small.d_squared_zero(), || {
        "perturbed differential squares to nonzero".into()
    })?;
    let v = pc.violations();
    ensure(v.is_empty(), || format!("{:?}", v))
}

/// Every `m_n` kills the signed `(p, n − p)` shuffles.
pub fn shuffles_vanish(s: &InfinityStructure) -> Result<(), String> {
    for n in 2..=s.top_arity() {
        for w in s.words_with_output(n, n as i64 - 2, false) {
            let degs: Vec<i64> = w.iter().map(|&i| s.deg(i)).collect();
            for p in 1..n {
                ensure(shuffle_sum(&w, p, &degs, &|x| s.op(n, x)).is_zero(), || {
                    format!("m{} on {:?}, p = {}", n, w, p)
                })?;
            }
        }
    }
    Ok(())
}

pub fn transfer_keeps_shuffles(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let s = random_cdga(&mut r);
    shuffles_vanish(&s)?;
    let t = minimal_model(&s, None).map_err(|e| e.to_string())?;
    ensure(t.structure.flavor == Flavor::Comm, || {
        "flavor changed".into()
    })?;
    shuffles_vanish(&t.structure)
}

pub fn random_presentation(r: &mut ChaCha8Rng) -> WeightedPresentation {
    let k = r.gen_range(2..=3);
    let mut gens = GradedSpace::new();
    for i in 0..k {
        gens.push_weighted(["u", "v", "w"][i], r.gen_range(-3..=-1), Some(1));
    }
    let ring = PolyRing::new(gens.clone());
    let monos = lambda2_basis(&ring);
    let mut by_deg: BTreeMap<i64, Vec<_>> = BTreeMap::new();
    for m in monos {
        by_deg.entry(ring.mono_degree(&m)).or_default().push(m);
    }
    let mut rels = Vec::new();
    for ms in by_deg.values() {
        for _ in 0..r.gen_range(0..=ms.len()) {
            let mut p = Poly::zero();
            for m in ms {
                p.add_term(m.clone(), q(r.gen_range(-2..=2)));
            }
            rels.push(p);
        }
    }
    let comm = WeightedPresentation::new(gens, Relations::Comm(rels)).expect("homogeneous");
    if r.gen_bool(0.5) {
        comm
    } else {
        koszul_dual(&comm).expect("dual")
    }
}

pub fn koszul_involutive(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let p = random_presentation(&mut r);
    let d = koszul_dual(&p).map_err(|e| e.to_string())?;
    let (c, l) = if let Relations::Comm(_) = p.relations {
        (&p, &d)
    } else {
        (&d, &p)
    };
    let total = lambda2_basis(&c.ring()).len();
    let rank = |x: &WeightedPresentation| match &x.relations {
        Relations::Comm(v) => rhtkit::linalg::rank_of_lin(v),
        Relations::Lie(v) => rhtkit::linalg::rank_of_lin(v),
    };
    ensure(rank(c) + rank(l) == total, || {
        format!("{} + {} ≠ {}", rank(c), rank(l), total)
    })?;
    let dd = koszul_dual(&d).map_err(|e| e.to_string())?;
    ensure(same_presentation(&dd, &p), || {
        format!("{}\n{}", p.render(), dd.render())
    })
}

pub fn twist_by_zero(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let l = if r.gen_bool(0.5) {
        linfty_from_sullivan(&random_sullivan(&mut r)).map_err(|e| e.to_string())?
    } else {
        random_dgl(&mut r)
    };
    let t = twist(&l, &MaurerCartanElement::zero()).map_err(|e| e.to_string())?;
    ensure(t == l, || "twist by zero changed the structure".into())
}

/// Free 3-step nilpotent on two generators, the filiform algebra and the Heisenberg algebra.
fn nilpotent_brackets(which: usize) -> Vec<Vec<Vector>> {
    let (dim, table): (usize, &[(usize, usize, usize)]) = match which {
        0 => (5, &[(0, 1, 2), (0, 2, 3), (1, 2, 4)]),
        1 => (4, &[(0, 1, 2), (0, 2, 3)]),
        _ => (3, &[(0, 1, 2)]),
    };
    let mut br = vec![vec![Vector::zero(); dim]; dim];
    for &(i, j, k) in table {
        br[i][j] = Vector::basis(k);
        br[j][i] = Vector::single(k, q(-1));
    }
    br
}

pub fn bch_associative(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let br = nilpotent_brackets(r.gen_range(0..3));
    let dim = br.len();
    let g = BchGroup::from_brackets(br);
    ensure(g.class <= 3, || format!("class {}", g.class))?;
    let mut elt = || -> Vector {
        let mut v = Vector::zero();
        for i in 0..dim {
            if r.gen_bool(0.7) {
                v.add_term(i, small_q(&mut r));
            }
        }
        v
    };
    let (x, y, z) = (elt(), elt(), elt());
    let left = g.product(&g.product(&x, &y), &z);
    let right = g.product(&x, &g.product(&y, &z));
    ensure(left == right, || "(xy)z ≠ x(yz)".into())?;
    ensure(g.product(&x, &g.inverse(&x)).is_zero(), || {
        "x x⁻¹ ≠ 0".into()
    })
}

/// Relabel edges, reorder vertices and rotate vertex lists; the class changes by the documented signs.
pub fn graph_relabel_invariance(gc: &mut GraphComplex, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (g, n) = *[(0, 4), (0, 5), (0, 6), (1, 2), (1, 3), (2, 1)]
        .choose(&mut r)
        .unwrap();
    let d = r.gen_range(0..=(3 * g as i64 + n as i64 - 3).min(3));
    let basis = gc.basis(g, n, d);
    let Some(key) = basis.choose(&mut r) else {
        return Ok(());
    };
    let rep = gc.representative(key);
    let before = gc.normalize(&rep).map_err(|e| e.to_string())?;

    let edges = rep
        .vertices
        .iter()
        .flatten()
        .filter_map(|p| {
            if let Port::Edge(e) = p {
                Some(*e)
            } else {
                None
            }
        })
        .max();
    let mut rename: Vec<usize> = (0..edges.map_or(0, |e| e + 1)).collect();
    rename.shuffle(&mut r);
    let mut vertices: Vec<Vec<Port>> = rep
        .vertices
        .iter()
        .map(|v| {
            v.iter()
                .map(|p| {
                    if let Port::Edge(e) = p {
                        Port::Edge(rename[*e])
                    } else {
                        *p
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = q(1);
    for v in vertices.iter_mut() {
        let k = v.len() - 1;
        for _ in 0..r.gen_range(0..v.len()) {
            v.rotate_left(1);
            if k % 2 == 1 {
                sign = -sign;
            }
        }
    }
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.shuffle(&mut r);
    // Koszul sign of the vertex permutation on degrees |v| − 3
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (da, db) = (vertices[order[a]].len() - 3, vertices[order[b]].len() - 3);
            if order[a] > order[b] && da % 2 == 1 && db % 2 == 1 {
                sign = -sign;
            }
        }
    }
    let moved = DecoratedGraph {
        vertices: order.iter().map(|&i| vertices[i].clone()).collect(),
    };
    let after = gc.normalize(&moved).map_err(|e| e.to_string())?;
    ensure(after == before.scaled(&sign), || {
        format!("{} vs {}", rep, moved)
    })
}
