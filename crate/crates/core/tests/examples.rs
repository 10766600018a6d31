//! Every example runs to completion.

#[path = "../examples/leibniz_triangle.rs"]
#[allow(dead_code)]
mod leibniz_triangle;

#[path = "../examples/cpn_pipeline.rs"]
#[allow(dead_code)]
mod cpn_pipeline;

#[path = "../examples/sphere_bundle.rs"]
#[allow(dead_code)]
mod sphere_bundle;

#[path = "../examples/configuration_spaces.rs"]
#[allow(dead_code)]
mod configuration_spaces;

#[path = "../examples/wedge_iso.rs"]
#[allow(dead_code)]
mod wedge_iso;

#[path = "../examples/massey_products.rs"]
#[allow(dead_code)]
mod massey_products;

#[path = "../examples/graph_homology.rs"]
#[allow(dead_code)]
mod graph_homology;

#[path = "../examples/maurer_cartan.rs"]
#[allow(dead_code)]
mod maurer_cartan;

#[path = "../examples/mapping_space.rs"]
#[allow(dead_code)]
mod mapping_space;

#[path = "../examples/derivations.rs"]
#[allow(dead_code)]
mod derivations;

#[test]
fn leibniz_triangle_runs() {
    leibniz_triangle::main();
}

#[test]
fn cpn_pipeline_runs() {
    cpn_pipeline::main().unwrap();
}

#[test]
fn sphere_bundle_runs() {
    sphere_bundle::main().unwrap();
}

#[test]
fn configuration_spaces_runs() {
    configuration_spaces::main().unwrap();
}

#[test]
fn wedge_iso_runs() {
    wedge_iso::main().unwrap();
}

#[test]
fn massey_products_runs() {
    massey_products::main().unwrap();
}

#[test]
fn graph_homology_runs() {
    graph_homology::main().unwrap();
}

#[test]
fn maurer_cartan_runs() {
    maurer_cartan::main().unwrap();
}

#[test]
fn mapping_space_runs() {
    mapping_space::main().unwrap();
}

#[test]
fn derivations_runs() {
    derivations::main().unwrap();
}
