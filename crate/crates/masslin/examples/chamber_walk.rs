//! Walk the chamber of a member: sample interior points, watch the two
//! routes to the characteristic number agree at each, and track the
//! center-of-mass displacement when every support number advances by one.
//!
//! Run with: cargo run --example chamber_walk

use masslin::exact::{format_rat, format_rat_vec, int, rat};
use masslin::families::hirzebruch;
use masslin::invariant::{char_number_derivative, char_number_facets};
use masslin::masslinear::{d_vector, random_chamber_points};
use masslin::polytope::PolytopeSpec;

fn main() {
    let fam = hirzebruch(1, &rat(2), &rat(1)).expect("admissible");
    let spec = &fam.spec;
    let b = vec![int(1), int(0)];

    println!("base k = {}", format_rat_vec(spec.k()));
    let points = random_chamber_points(spec, 4, 2024).expect("sampling");
    for k in &points {
        let at = PolytopeSpec::new(spec.dim(), spec.conormals().to_vec(), k.clone()).unwrap();
        let facets = char_number_facets(&at, &b).unwrap().value;
        let derivative = char_number_derivative(&at, &b).unwrap();
        assert_eq!(facets, derivative);
        println!(
            "k = {}: I = {} by both routes",
            format_rat_vec(k),
            format_rat(&facets)
        );
    }

    // The displacement of the center of mass under k -> k + (1, ..., 1).
    // Pairing it with a mass linear direction gives the coefficient sum,
    // which vanishes here.
    let d = d_vector(spec).expect("k + ones stays in the chamber");
    println!("d = {}", format_rat_vec(&d.d));
    let pairing = &d.d[0] * rat(2) + &d.d[1] * rat(1);
    println!("<d, (2, 1)> = {} (a mass linear direction)", format_rat(&pairing));
}
