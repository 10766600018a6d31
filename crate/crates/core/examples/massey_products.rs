//! Massey products from defining systems, compared with the transferred `m₃`.

use rhtkit::dictionary::cdga_window;
use rhtkit::massey::{compare_products, massey_product, MasseyProduct};
use rhtkit::q::Vector;
use rhtkit::registry::sphere_bundle_model;
use rhtkit::transfer::minimal_model;

pub fn main() -> Result<(), rhtkit::Error> {
    let (a, _) = cdga_window(&sphere_bundle_model(), 11);
    let x = Vector::basis(a.space.index_of("x").unwrap());
    let y = Vector::basis(a.space.index_of("y").unwrap());
    let min = minimal_model(&a, None)?.structure;

    for reps in [
        vec![x.clone(), x.clone(), y.clone()],
        vec![x.clone(), y.clone(), y.clone()],
        vec![x.clone(), y.clone()],
    ] {
        let names: Vec<String> = reps.iter().map(|r| a.space.fmt_vec(r)).collect();
        let p = massey_product(&a, &reps)?;
        match &p {
            MasseyProduct::Defined {
                representative,
                indeterminacy,
                ..
            } => {
                println!(
                    "⟨{}⟩ ∋ {} (indeterminacy {})",
                    names.join(","),
                    a.space.fmt_vec(representative),
                    indeterminacy.len()
                );
                let c = compare_products(&a, &min, &reps, &p)?;
                println!(
                    "  (−1)^e m{} = {}: member {}, opposite member {}",
                    reps.len(),
                    min.space.fmt_vec(&c.signed_operation),
                    c.member,
                    c.opposite_member
                );
            }
            MasseyProduct::Undefined { equation } => {
                println!("⟨{}⟩ undefined: {}", names.join(","), equation)
            }
        }
    }
    Ok(())
}
