//! Two minimal Quillen models of `S² ∨ (S² × S³)` and the C∞-isomorphism between them.

use rhtkit::dictionary::cinfty_from_quillen;
use rhtkit::formality::find_infinity_iso;
use rhtkit::linalg::SparseMap;
use rhtkit::registry::{extend_to_tensors, wedge_iso_images, wedge_model};

pub fn main() -> Result<(), rhtkit::Error> {
    let (q, q2) = (wedge_model(false), wedge_model(true));
    println!("δξ  = {}", q.fmt_lie(&q.delta[3]));
    println!("δ'ξ = {}", q2.fmt_lie(&q2.delta[3]));

    let phi = wedge_iso_images();
    println!("φγ  = {}", q.fmt_lie(&phi[2]));
    for i in 0..4 {
        assert_eq!(q2.apply(&phi[i]), extend_to_tensors(&phi, &q.delta[i]));
    }

    let m = cinfty_from_quillen(&q)?;
    let m2 = cinfty_from_quillen(&q2)?;
    println!("m' has operations:");
    for op in m2.describe_ops() {
        println!("  {}", op);
    }
    let iso = find_infinity_iso(&m, &m2, &SparseMap::identity(&m.space), 4)?;
    println!(
        "C∞-isomorphism with f₁ = id: {}",
        iso.found() && iso.morphism.check_morphism()?.ok
    );
    for (n, t) in &iso.morphism.components {
        for (w, v) in t {
            if *n > 1 && !v.is_zero() {
                let args: Vec<&str> = w.iter().map(|&i| m.space.name(i)).collect();
                println!("  f{}({}) = {}", n, args.join(","), m2.space.fmt_vec(v));
            }
        }
    }
    Ok(())
}
