//! One line per acceptance criterion; exits nonzero if any fails.

mod support;

use rhtkit::dictionary::{cdga_window, linfty_from_sullivan};
use rhtkit::formality::{find_infinity_iso, formality_check, Verdict};
use rhtkit::graph::{DecoratedGraph, GraphComplex, Port};
use rhtkit::infinity::{Flavor, InfinityStructure};
use rhtkit::koszul::{
    arnold, drinfeld_kohno, koszul_check, koszul_dual, lambda2_basis, same_presentation, Relations,
};
use rhtkit::linalg::{betti, rank_of_lin, GradedSpace, SparseMap};
use rhtkit::massey::{compare_products, massey_product};
use rhtkit::mc::{tensor_model, with_unit};
use rhtkit::poly::{Poly, SullivanModel};
use rhtkit::q::{factorial, parse_q, q, Vector};
use rhtkit::registry::{cpn_model, lookup, sphere_bundle_model, sphere_bundle_table};
use rhtkit::transfer::{minimal_model, LeibnizTriangle};
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);
type Suite<'a> = (&'static str, Box<dyn FnMut(u64) -> Result<(), String> + 'a>);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: rhtkit::Error) -> String {
    e.to_string()
}

/// Runs registry entries and demands that every stored expectation reproduces.
fn registry_entries(entries: &[(&str, &[(&str, i64)])]) -> Result<usize, String> {
    let mut count = 0;
    for (name, params) in entries {
        let params: BTreeMap<String, i64> =
            params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for o in lookup(name, &params).map_err(err)?.run().map_err(err)? {
            ensure(o.pass(), || {
                format!(
                    "{}: {}: expected {}, got {}",
                    name, o.label, o.expected, o.actual
                )
            })?;
            count += 1;
        }
    }
    Ok(count)
}

const TRIANGLE_ROWS: [&str; 7] = [
    "1",
    "1/2 1/2",
    "1/3 1/6 1/3",
    "1/4 1/12 1/12 1/4",
    "1/5 1/20 1/30 1/20 1/5",
    "1/6 1/30 1/60 1/60 1/30 1/6",
    "1/7 1/42 1/105 1/140 1/105 1/42 1/7",
];

fn leibniz() -> Check {
    let rec = LeibnizTriangle::recursive(10);
    for (i, row) in TRIANGLE_ROWS.iter().enumerate() {
        let n = i + 1;
        let want: Vec<_> = row.split(' ').map(|s| parse_q(s).unwrap()).collect();
        let got: Vec<_> = (1..=n).map(|k| rec.get(n, k)).collect();
        ensure(want == got, || format!("row {}", n))?;
    }
    ensure(rec == LeibnizTriangle::closed(10), || {
        "recursion and closed form differ".into()
    })?;
    Ok("rows 1–7 literal, recursion = closed form through 10".into())
}

fn cpn() -> Check {
    for n in [2usize, 3] {
        let l = linfty_from_sullivan(&cpn_model(n)).map_err(err)?;
        let nonzero: Vec<usize> = l
            .ops
            .iter()
            .filter(|(_, t)| t.values().any(|v| !v.is_zero()))
            .map(|(k, _)| *k)
            .collect();
        ensure(nonzero == vec![n + 1], || {
            format!("n = {}: nonzero arities {:?}", n, nonzero)
        })?;
        let (x, y) = (
            l.space.index_of("x^").unwrap(),
            l.space.index_of("y^").unwrap(),
        );
        ensure(
            l.op(n + 1, &vec![x; n + 1]) == Vector::single(y, factorial(n as u64 + 1)),
            || format!("n = {}: l_{}", n, n + 1),
        )?;
    }
    let k = registry_entries(&[("cpn", &[("n", 2)]), ("cpn", &[("n", 3)])])?;
    Ok(format!(
        "l_(n+1) = (n+1)!·y^ for n = 2, 3; {} registry checks",
        k
    ))
}

fn sphere_bundle() -> Check {
    let m = sphere_bundle_model();
    let h = minimal_model(&cdga_window(&m, 11).0, None)
        .map_err(err)?
        .structure;
    let table = sphere_bundle_table(false);
    let mut f1 = SparseMap::zero(&h.space, &table.space, 0);
    for (src, tgt, c) in [
        ("x", "x", 1),
        ("y", "y", 1),
        ("x*z", "u", -1),
        ("y*z", "v", -1),
        ("x*y*z", "w", -1),
    ] {
        f1.set(
            table.space.index_of(tgt).unwrap(),
            h.space.index_of(src).unwrap(),
            q(c),
        );
    }
    let iso = find_infinity_iso(&h, &table, &f1, 4).map_err(err)?;
    ensure(iso.found() && iso.complete, || {
        "no ∞-isomorphism onto the table".into()
    })?;
    ensure(iso.morphism.check_morphism().map_err(err)?.ok, || {
        "∞-isomorphism fails check_morphism".into()
    })?;
    let k = koszul_check(&table, Some(&[1, 1, 2, 2, 3]), 4, 12).map_err(err)?;
    ensure(k.is_koszul(), || k.render())?;
    let f = formality_check(&linfty_from_sullivan(&m).map_err(err)?, 4, None, 12).map_err(err)?;
    ensure(f.verdict == Verdict::NotFormal, || f.render())?;
    let n = registry_entries(&[("sphere-bundle", &[])])?;
    Ok(format!(
        "diagonal ∞-iso onto the table with yu = −w, Koszul, not formal; {} registry checks",
        n
    ))
}

fn configuration_spaces() -> Check {
    for n in [3, 4] {
        let a = arnold(n, 3);
        let d = koszul_dual(&a).map_err(err)?;
        ensure(same_presentation(&d, &drinfeld_kohno(n, 3)), || {
            format!("n = {}: dual is not Drinfeld–Kohno", n)
        })?;
        let (Relations::Comm(r), Relations::Lie(s)) = (&a.relations, &d.relations) else {
            return Err("unexpected presentation kinds".into());
        };
        let total = lambda2_basis(&a.ring()).len();
        ensure(rank_of_lin(r) + rank_of_lin(s) == total, || {
            format!("n = {}: dim R + dim S ≠ {}", n, total)
        })?;
    }
    let k = registry_entries(&[
        ("arnold-3-3", &[]),
        ("arnold-4-3", &[]),
        ("drinfeld-kohno-3-3", &[]),
    ])?;
    Ok(format!("n = 3, 4; {} registry checks", k))
}

fn wedge() -> Check {
    let k = registry_entries(&[("wedge", &[]), ("wedge-cubic", &[])])?;
    Ok(format!("{} registry checks", k))
}

fn massey() -> Check {
    let a = cdga_window(&sphere_bundle_model(), 11).0;
    let x = Vector::basis(a.space.index_of("x").unwrap());
    let y = Vector::basis(a.space.index_of("y").unwrap());
    let reps = [x.clone(), x, y];
    let p = massey_product(&a, &reps).map_err(err)?;
    ensure(p.is_defined() && !p.contains_zero(), || {
        "⟨x,x,y⟩ undefined or contains zero".into()
    })?;
    let h = minimal_model(&a, None).map_err(err)?.structure;
    let c = compare_products(&a, &h, &reps, &p).map_err(err)?;
    ensure(c.hypotheses_hold && (c.member || c.opposite_member), || {
        format!("{:?}", c)
    })?;
    Ok("⟨x,x,y⟩ defined, nonzero, contains ±m3(x,x,y)".into())
}

/// `H_k(F⟨1,n⟩) = Λ^k ℚ^{n−1}` for even `k`, zero for odd `k`.
fn genus_one(n: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|k| {
            if k % 2 == 0 && k < n {
                (0..k).fold(1, |acc, i| acc * (n - 1 - i) / (i + 1))
            } else {
                0
            }
        })
        .collect()
}

fn graphs() -> Check {
    let mut gc = GraphComplex::new();
    let mut checked = 0;
    for g in 0..=3usize {
        for n in 0..=10usize {
            if 2 * g + n < 3 || 2 * (3 * g + n - 3) + n > 10 {
                continue;
            }
            let h = gc.homology(g, n).map_err(err)?;
            ensure(h.d_squared_zero, || format!("∂² ≠ 0 on F⟨{},{}⟩", g, n))?;
            ensure(h.euler_chains() == h.euler_homology(), || {
                format!("Euler characteristics differ on F⟨{},{}⟩", g, n)
            })?;
            checked += 1;
        }
    }
    for n in 3..=6 {
        let h = gc.homology(0, n).map_err(err)?;
        let mut want = vec![0; h.betti.len()];
        want[0] = 1;
        ensure(h.betti == want, || format!("F⟨0,{}⟩: {:?}", n, h.betti))?;
    }
    for n in [1, 2] {
        let h = gc.homology(1, n).map_err(err)?;
        ensure(h.betti == genus_one(n, h.betti.len()), || {
            format!("F⟨1,{}⟩: {:?}", n, h.betti)
        })?;
    }
    let m3 = gc.normalize(&DecoratedGraph::corolla(3)).map_err(err)?;
    let xi = gc.contract(&m3, 1, 2).map_err(err)?;
    use Port::*;
    let g1 = DecoratedGraph {
        vertices: vec![
            vec![Leg(0), Edge(0), Edge(1)],
            vec![Edge(1), Edge(0), Leg(1)],
        ],
    };
    let g2 = DecoratedGraph {
        vertices: vec![
            vec![Leg(0), Edge(1), Leg(1)],
            vec![Edge(1), Edge(0), Edge(0)],
        ],
    };
    let mut want = gc.normalize(&g1).map_err(err)?;
    want.sub(&gc.normalize(&g2).map_err(err)?);
    ensure(gc.boundary(&xi) == want, || {
        "∂ξ₁₂(m₃) differs from the displayed relation".into()
    })?;
    Ok(format!(
        "∂² = 0 on {} complexes, genus 0 and 1 homology, ∂ξ₁₂(m₃)",
        checked
    ))
}

fn properties() -> Check {
    let mut gc = GraphComplex::new();
    let suites: Vec<Suite> = vec![
        ("transfer", Box::new(support::transfer_is_valid)),
        ("perturbation", Box::new(support::perturbed_side_conditions)),
        ("shuffles", Box::new(support::transfer_keeps_shuffles)),
        ("koszul dual", Box::new(support::koszul_involutive)),
        ("twist by 0", Box::new(support::twist_by_zero)),
        ("bch", Box::new(support::bch_associative)),
        (
            "graph labels",
            Box::new(move |s| support::graph_relabel_invariance(&mut gc, s)),
        ),
    ];
    let mut names = Vec::new();
    for (name, mut f) in suites {
        for seed in 0..support::CASES as u64 {
            f(seed).map_err(|e| format!("{} seed {}: {}", name, seed, e))?;
        }
        names.push(name);
    }
    Ok(format!(
        "{} cases each: {}",
        support::CASES,
        names.join(", ")
    ))
}

fn mapping_space() -> Check {
    let circle = SullivanModel::new(GradedSpace::from_degrees(&[("t", -1)]), vec![Poly::zero()])
        .map_err(err)?;
    let a = with_unit(&cdga_window(&circle, 1).0);
    for k in 1..=4i64 {
        let l = InfinityStructure::new(Flavor::Lie, GradedSpace::from_degrees(&[("z", k)]));
        let t = tensor_model(&a, &l).map_err(err)?;
        let got: BTreeMap<i64, usize> = betti(&t.complex())
            .into_iter()
            .filter(|(_, b)| *b > 0)
            .collect();
        let want: BTreeMap<i64, usize> = [(k, 1), (k - 1, 1)].into_iter().collect();
        ensure(got == want, || format!("|z| = {}: {:?}", k, got))?;
    }
    Ok("ℚ in degrees |z| and |z| − 1 for |z| = 1..4".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Leibniz triangle", leibniz),
        ("CPⁿ pipeline", cpn),
        ("sphere bundle", sphere_bundle),
        ("Arnold / Drinfeld–Kohno", configuration_spaces),
        ("wedge ∞-isomorphism", wedge),
        ("Massey product", massey),
        ("graph complex", graphs),
        ("property suites", properties),
        ("mapping-space toy", mapping_space),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!(
                "criterion {}: PASS  {} ({}) [{:.1}s]",
                i + 1,
                name,
                detail,
                secs
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {} ({}) [{:.1}s]",
                    i + 1,
                    name,
                    detail,
                    secs
                );
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
