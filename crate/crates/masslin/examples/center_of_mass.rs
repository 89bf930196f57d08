//! Exact center of mass of a family member, compared with its closed form,
//! and its behavior under translation and dilation.
//!
//! Run with: cargo run --example center_of_mass

use masslin::exact::{format_rat_vec, rat, ratio};
use masslin::families::hirzebruch;
use masslin::integrate::center_of_mass;

fn main() {
    // Twist-one trapezium with top edge at height 1 and base length 2.
    let fam = hirzebruch(1, &rat(2), &rat(1)).expect("admissible");
    let cm = center_of_mass(&fam.spec).expect("integrable");
    println!("Cm          = {}", format_rat_vec(&cm));
    println!("closed form = {}", format_rat_vec(&fam.cm_closed()));
    assert_eq!(cm, fam.cm_closed());

    // Translating the polytope translates the center of mass.
    let shift = vec![ratio(3, 7), ratio(-2, 5)];
    let moved = fam.spec.translate_k(&shift);
    let cm_moved = center_of_mass(&moved).expect("integrable");
    println!("after translating by (3/7, -2/5):");
    println!("Cm          = {}", format_rat_vec(&cm_moved));

    // Dilating the support numbers dilates the center of mass.
    let scaled = fam.spec.scale_k(&ratio(3, 2)).expect("positive scale");
    let cm_scaled = center_of_mass(&scaled).expect("integrable");
    println!("after dilating by 3/2:");
    println!("Cm          = {}", format_rat_vec(&cm_scaled));
}
