//! A free-loop toy: `Λ(t) ⊗ L` with `|t| = 1` and `L` abelian on one generator.
//!
//! The homology is `ℚ` in the degree of the generator and one below, as for `K(ℚ,n)^{S¹}`.

use rhtkit::dictionary::cdga_window;
use rhtkit::infinity::{Flavor, InfinityStructure};
use rhtkit::linalg::{betti, GradedSpace};
use rhtkit::mc::{tensor_model, with_unit};
use rhtkit::poly::{Poly, SullivanModel};

pub fn main() -> Result<(), rhtkit::Error> {
    let circle = SullivanModel::new(GradedSpace::from_degrees(&[("t", -1)]), vec![Poly::zero()])?;
    let a = with_unit(&cdga_window(&circle, 1).0);
    for n in 1..=4 {
        let l = InfinityStructure::new(Flavor::Lie, GradedSpace::from_degrees(&[("z", n)]));
        let t = tensor_model(&a, &l)?;
        let b: Vec<String> = betti(&t.complex())
            .into_iter()
            .filter(|(_, x)| *x > 0)
            .map(|(d, x)| format!("H_{} = {}", d, x))
            .collect();
        println!("|z| = {}: {}", n, b.join(", "));
    }
    Ok(())
}
