//! Homology of the Lie graph complex `F⟨g,n⟩` in low genus.

use rhtkit::graph::GraphComplex;

pub fn main() -> Result<(), rhtkit::Error> {
    let mut gc = GraphComplex::new();
    for (g, n) in [
        (0, 3),
        (0, 4),
        (0, 5),
        (1, 1),
        (1, 2),
        (1, 3),
        (2, 0),
        (2, 1),
    ] {
        let h = gc.homology(g, n)?;
        println!("{}\n", h.render());
    }
    Ok(())
}
