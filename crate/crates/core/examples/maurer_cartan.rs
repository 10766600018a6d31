//! Curvature, twisting and the Baker–Campbell–Hausdorff product.

use rhtkit::dictionary::{cdga_window, linfty_from_sullivan};
use rhtkit::linalg::GradedSpace;
use rhtkit::mc::{
    bch_terms, lower_central_series, tensor_model, twist, with_unit, BchGroup, MaurerCartanElement,
};
use rhtkit::poly::{Poly, SullivanModel};
use rhtkit::q::{fmt_q, q, Vector};
use rhtkit::registry::cpn_model;

pub fn main() -> Result<(), rhtkit::Error> {
    // ℚ[u]/u³ ⊗ L(CP²) has Maurer–Cartan elements in degree −1.
    let l = linfty_from_sullivan(&cpn_model(2))?;
    let lcs = lower_central_series(&l)?;
    println!("L(CP²) nilpotent of class {:?}", lcs.class());

    let u = SullivanModel::new(GradedSpace::from_degrees(&[("u", -2)]), vec![Poly::zero()])?;
    let a = with_unit(&cdga_window(&u, 4).0);
    let t = tensor_model(&a, &l)?;
    let i = (0..t.dim()).find(|&i| t.deg(i) == -1).unwrap();
    let tau = MaurerCartanElement::new(&t, Vector::single(i, q(2)))?;
    println!("τ = {}", t.space.fmt_vec(&tau.value));
    let tw = twist(&t, &tau)?;
    for op in tw.describe_ops() {
        println!("  {}", op);
    }
    assert!(tw.check_structure()?.ok);

    let terms = bch_terms(3);
    let shown: Vec<String> = terms
        .iter()
        .map(|(w, c)| {
            format!(
                "{} {}",
                fmt_q(c),
                w.iter()
                    .map(|&x| if x == 0 { 'X' } else { 'Y' })
                    .collect::<String>()
            )
        })
        .collect();
    println!("log(e^X e^Y) through order 3: {}", shown.join(" + "));

    // the filiform algebra [e0,e1] = e2, [e0,e2] = e3
    let mut br = vec![vec![Vector::zero(); 4]; 4];
    br[0][1] = Vector::basis(2);
    br[1][0] = Vector::single(2, q(-1));
    br[0][2] = Vector::basis(3);
    br[2][0] = Vector::single(3, q(-1));
    let g = BchGroup::from_brackets(br);
    let (x, y) = (Vector::basis(0), Vector::basis(1));
    let names = GradedSpace::from_degrees(&[("e0", 0), ("e1", 0), ("e2", 0), ("e3", 0)]);
    println!("e0 * e1 = {}", names.fmt_vec(&g.product(&x, &y)));
    println!(
        "(e0 * e1)^-1 = {}",
        names.fmt_vec(&g.inverse(&g.product(&x, &y)))
    );
    Ok(())
}
