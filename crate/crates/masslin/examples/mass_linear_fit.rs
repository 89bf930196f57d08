//! Decide whether <Cm(Delta(k)), b> is a linear function of the support
//! numbers on the chamber: solve for the coefficients from m + 1 nearby
//! chamber points, then test the fit at pseudo-random chamber points.
//!
//! Run with: cargo run --example mass_linear_fit

use masslin::exact::{format_int_vec, format_rat, format_rat_vec, int, rat};
use masslin::masslinear::fit_mass_linear;
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

    for b in [vec![int(2), int(1)], vec![int(1), int(0)]] {
        let report = fit_mass_linear(&spec, &b, 8, 0).expect("fit");
        println!("b = {}", format_int_vec(&b));
        println!("  mass linear: {}", if report.is_linear { "yes" } else { "no" });
        println!("  R = {}", format_rat_vec(&report.r_coeffs));
        println!("  C = {}", format_rat(&report.c));
        println!("  sum R = {}", format_rat(&report.sum_r));
        let nonzero = report.residuals.iter().filter(|r| !r.eq(&&rat(0))).count();
        println!(
            "  verification: {} of {} residuals nonzero (seed {})",
            nonzero,
            report.residuals.len(),
            report.seed
        );
        println!();
    }
}
