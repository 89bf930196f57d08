//! Serialize a member to the JSON interchange format and read it back.
//!
//! Run with: cargo run --example emit_and_parse

use masslin::exact::{format_rat_vec, rat, ratio};
use masslin::families::delta_p_bundle;
use masslin::integrate::center_of_mass;
use masslin::polytope::parse_spec;

fn main() {
    let fam = delta_p_bundle(3, &[1, 0, -1], &rat(1), &rat(2)).expect("admissible and Delzant");
    let json = fam.spec.to_json_string();
    println!("{json}");

    let parsed = parse_spec(&json).expect("round trip");
    assert_eq!(parsed, fam.spec);
    println!("round trip: ok");

    // The format keeps exact rationals: support numbers are strings like
    // "5/2", conormals are integer arrays.
    let shifted = fam.spec.translate_k(&[ratio(1, 3), rat(0), rat(0), ratio(-2, 7)]);
    let json = shifted.to_json_string();
    println!("{json}");
    let parsed = parse_spec(&json).expect("round trip");
    assert_eq!(parsed, shifted);
    println!("round trip with fractional k: ok");
    println!("Cm = {}", format_rat_vec(&center_of_mass(&parsed).unwrap()));
}
