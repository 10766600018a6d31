//! The Arnold algebra `H*(Conf_n(ℝ^m))` and its Koszul dual, the Drinfeld–Kohno Lie algebra.

use rhtkit::koszul::{
    arnold, drinfeld_kohno, koszul_check, koszul_dual, lambda2_basis, same_presentation,
};

pub fn main() -> Result<(), rhtkit::Error> {
    for (n, m) in [(3, 3), (4, 3), (4, 2)] {
        let a = arnold(n, m);
        let dual = koszul_dual(&a)?;
        let dk = drinfeld_kohno(n, m);
        println!("n = {}, m = {}", n, m);
        print!("{}", a.render());
        print!("{}", dual.render());
        println!(
            "  dual is Drinfeld–Kohno: {}; dim R + dim S = {} + {} = {}",
            same_presentation(&dual, &dk),
            a.relations.len(),
            dual.relations.len(),
            lambda2_basis(&a.ring()).len()
        );
    }
    let c = koszul_check(&arnold(3, 3).algebra(5)?, None, 4, 0)?;
    println!("{}", c.render());
    Ok(())
}
