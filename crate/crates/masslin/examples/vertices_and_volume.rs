//! Build a polytope from conormals and support numbers, enumerate its
//! vertices, and check the Delzant condition.
//!
//! Run with: cargo run --example vertices_and_volume

use masslin::exact::{format_rat, format_rat_vec, int, rat};
use masslin::integrate::polytope_moments;
use masslin::polytope::{enumerate_vertices, is_delzant, PolytopeSpec};

fn main() {
    // The trapezium with vertices (0,0), (2,0), (1,1), (0,1): four facets
    // with conormals (-1,0), (0,-1), (0,1), (1,1) and support numbers
    // (0, 0, 1, 2). Facet j is { x : <x, n_j> = k_j }.
    let spec = PolytopeSpec::new(
        2,
        vec![
            vec![int(-1), int(0)],
            vec![int(0), int(-1)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
        ],
        vec![rat(0), rat(0), rat(1), rat(2)],
    )
    .expect("a valid spec");

    let incidence = enumerate_vertices(&spec).expect("bounded and nonempty");
    println!("{} vertices:", incidence.vertices.len());
    for (v, active) in incidence.vertices.iter().zip(&incidence.active_sets) {
        let facets: Vec<String> = active.iter().map(|j| (j + 1).to_string()).collect();
        println!("  {}  on facets {}", format_rat_vec(v), facets.join(" "));
    }

    println!("simple: {}", incidence.is_simple(2));
    let report = is_delzant(&spec).expect("enumerable");
    println!("delzant: {}", report.delzant);

    let m = polytope_moments(&spec).expect("integrable");
    println!("volume: {}", format_rat(&m.volume));
}
