//! Exact rational computer algebra for homotopy-coherent algebra.
//!
//! A∞, C∞ and L∞ structures with their bar constructions, homotopy transfer, Koszul duality,
//! formality certificates, Massey products, the Lie graph complex and Maurer–Cartan calculus.
//! Every computation is over `ℚ` with arbitrary precision.
//!
//! Runnable examples live in `examples/`:
//!
//! - `leibniz_triangle`: coefficients of the symmetrized homotopy
//! - `cpn_pipeline`: Sullivan model of `CPⁿ` to its L∞ model, Koszul dual and bigraded model
//! - `sphere_bundle`: transfer onto cohomology, the m₃ operations, non-formality
//! - `configuration_spaces`: Arnold algebra and its Drinfeld–Kohno dual
//! - `wedge_iso`: an ∞-isomorphism removing a cubic Quillen differential
//! - `massey_products`: defining systems and comparison with transferred operations
//! - `graph_homology`: the Lie graph complex in low genus
//! - `maurer_cartan`: curvature, twisting and BCH products
//! - `mapping_space`: the tensor model of a free-loop toy
//! - `derivations`: symplectic derivations of a free Lie algebra

pub mod cli;
pub mod derivations;
pub mod dictionary;
pub mod formality;
pub mod free;
pub mod graph;
pub mod infinity;
pub mod koszul;
pub mod linalg;
pub mod massey;
pub mod mc;
pub mod model;
pub mod poly;
pub mod q;
pub mod registry;
pub mod transfer;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Domain(String),
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
