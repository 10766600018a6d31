//! Transfer onto the cohomology of `(Λ(x,y,z), dz = xy)`, `|x| = |y| = 3`.
//!
//! The transferred structure has a nonzero `m₃`. In the basis `u = −xz`, `v = −yz`,
//! `w = −xyz` it becomes the table with `m₃(x,x,y) = −u`, `m₃(x,y,y) = v`, `xv = w`, `yu = −w`.
//! The sign of `yu` is forced: with `yu = +w` the arity 4 relation fails.

use rhtkit::dictionary::{cdga_window, linfty_from_sullivan};
use rhtkit::formality::{find_infinity_iso, formality_check};
use rhtkit::linalg::SparseMap;
use rhtkit::q::q;
use rhtkit::registry::{sphere_bundle_model, sphere_bundle_table};
use rhtkit::transfer::minimal_model;

pub fn main() -> Result<(), rhtkit::Error> {
    let m = sphere_bundle_model();
    let (a, _) = cdga_window(&m, 11);
    let t = minimal_model(&a, None)?;
    let h = &t.structure;
    println!("transferred C∞ structure:");
    for op in h.describe_ops() {
        println!("  {}", op);
    }

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
    let iso = find_infinity_iso(h, &table, &f1, 4)?;
    println!(
        "∞-isomorphism onto the table: found {}, complete {}",
        iso.found(),
        iso.complete
    );
    println!("  check_morphism: {}", iso.morphism.check_morphism()?.ok);

    let printed = sphere_bundle_table(true).check_structure()?;
    println!(
        "with yu = +w: {} failures, first {:?}",
        printed.failures.len(),
        printed.failures.first()
    );

    let l = linfty_from_sullivan(&m)?;
    println!(
        "homotopy L∞ algebra: {}",
        formality_check(&l, 4, None, 12)?.render()
    );
    Ok(())
}
