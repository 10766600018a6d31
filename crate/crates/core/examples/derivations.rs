//! Derivations of `𝕃(α₁,β₁)` killing `ω = [α₁,β₁]`, the Lie model of `B aut_∂(W_{1,1})`.

use rhtkit::derivations::{derivation_algebra, w_g1};

pub fn main() -> Result<(), rhtkit::Error> {
    for d in [2, 3] {
        let (q, omega) = w_g1(1, d)?;
        let mut der = derivation_algebra(&q, Some(omega))?;
        let top = 4 * (d - 1);
        let dims: Vec<String> = (der.min_degree()..=top)
            .map(|k| format!("{}:{}", k, der.dim(k)))
            .collect();
        println!("d = {}: Der_ω by degree {}", d, dims.join(" "));
        let tr = der.truncate_1(top)?;
        println!(
            "  1-connected cover: dim {}, differential zero: {}",
            tr.structure.dim(),
            tr.structure.d.is_zero()
        );
        for op in tr.structure.describe_ops().iter().take(6) {
            println!("  {}", op);
        }
    }
    Ok(())
}
