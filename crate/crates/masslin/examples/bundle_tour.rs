//! Tour of a simplex bundle member: closed-form center of mass and volume,
//! the linear sign test for mass linearity, and the reduction of fiberwise
//! directions to a weighted sum.
//!
//! Run with: cargo run --example bundle_tour

use masslin::exact::{format_int_vec, format_rat, format_rat_vec, int, rat};
use masslin::families::{delta_p_bundle, gamma_direction};
use masslin::integrate::{center_of_mass, polytope_moments};
use masslin::masslinear::fit_mass_linear;

fn main() {
    // Two-dimensional simplex fiber over a segment, twisted by a = (1, -1).
    let fam = delta_p_bundle(2, &[1, -1], &rat(1), &rat(2)).expect("admissible and Delzant");
    println!("conormals:");
    for n_j in fam.spec.conormals() {
        println!("  {}", format_int_vec(n_j));
    }
    println!("k = {}", format_rat_vec(fam.spec.k()));

    let m = polytope_moments(&fam.spec).expect("integrable");
    println!("volume      = {} (closed form {})", format_rat(&m.volume), format_rat(&fam.volume_closed()));
    let cm = center_of_mass(&fam.spec).expect("integrable");
    println!("Cm          = {}", format_rat_vec(&cm));
    println!("closed form = {}", format_rat_vec(&fam.cm_closed()));

    // The sign test and the fitted verdict agree, direction by direction.
    println!();
    for b in [[1i64, 0, -1], [1, 0, 1], [1, 1, 1]] {
        let bi: Vec<_> = b.iter().map(|&x| int(x)).collect();
        let sign_test = fam.mass_linear_predicate(&bi);
        let report = fit_mass_linear(&fam.spec, &bi, 6, 7).expect("fit");
        println!(
            "b = {}: sign test {}, fitted verdict {}",
            format_int_vec(&bi),
            if sign_test { "zero" } else { "nonzero" },
            if report.is_linear { "linear" } else { "not linear" },
        );
        assert_eq!(sign_test, report.is_linear);
    }

    // Fiberwise directions reduce to a weighted sum over the fiber weights:
    // b built from gamma with gamma_1 + gamma_2 + gamma_3 = 0 is mass linear
    // exactly when a_1 gamma_1 + a_2 gamma_2 = 0.
    println!();
    for gamma in [[1i64, 1, -2], [1, -1, 0], [2, -1, -1]] {
        let g = [int(gamma[0]), int(gamma[1]), int(gamma[2])];
        let b = gamma_direction(&g);
        let weighted = gamma[0] - gamma[1]; // a = (1, -1)
        println!(
            "gamma = {:?} -> b = {}, weighted sum {}, mass linear: {}",
            gamma,
            format_int_vec(&b),
            weighted,
            fam.mass_linear_predicate(&b),
        );
        assert_eq!(weighted == 0, fam.mass_linear_predicate(&b));
    }
}
