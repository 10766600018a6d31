//! From the Sullivan model of `CPⁿ` to its L∞ model, the Koszul dual and the bigraded model.
//!
//! Run with an optional `n` (default 3): `cargo run --example cpn_pipeline -- 4`.

use rhtkit::dictionary::linfty_from_sullivan;
use rhtkit::koszul::{bigraded_model, koszul_dual_infinity};
use rhtkit::registry::cpn_model;

pub fn main() -> Result<(), rhtkit::Error> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let m = cpn_model(n);
    println!("Sullivan model: d y = {}", m.ring.fmt_poly(&m.d[1]));

    let l = linfty_from_sullivan(&m)?;
    for op in l.describe_ops() {
        println!("  {}", op);
    }

    let w = [1, 2];
    let dual = koszul_dual_infinity(&l, Some(&w))?;
    print!("Koszul dual:\n{}", dual.render());

    let b = bigraded_model(&l, Some(&w), 4 * n as i64 + 2)?;
    print!("bigraded model:\n{}", b.render());
    Ok(())
}
