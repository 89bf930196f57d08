//! The characteristic number I(k; b) of a circle action, computed two ways:
//! a facet-by-facet sum and a derivative of the center-of-mass pairing along
//! the all-ones direction in the space of support numbers.
//!
//! Run with: cargo run --example characteristic_number

use masslin::exact::{format_rat, int, rat};
use masslin::invariant::{char_number_derivative, char_number_facets, CharNumberEngine};
use masslin::polytope::PolytopeSpec;

fn main() {
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
    let b = vec![int(1), int(0)];

    let facets = char_number_facets(&spec, &b).expect("facet route");
    println!("I(k; b) by facet sums  = {}", format_rat(&facets.value));
    println!("<Cm, b>                = {}", format_rat(&facets.cm_pairing));
    for (j, n_j) in &facets.facet_terms {
        println!("  facet {} contribution N_{} = {}", j + 1, j + 1, format_rat(n_j));
    }

    let derivative = char_number_derivative(&spec, &b).expect("derivative route");
    println!("I(k; b) by derivative  = {}", format_rat(&derivative));
    assert_eq!(facets.value, derivative);

    // The facet data is independent of b, so one engine serves many
    // directions cheaply.
    let engine = CharNumberEngine::new(&spec).expect("engine");
    for (b1, b2) in [(0i64, 1i64), (2, 1), (1, -1)] {
        let value = engine.char_number(&[int(b1), int(b2)]).value;
        println!("I(k; ({b1}, {b2})) = {}", format_rat(&value));
    }
}
