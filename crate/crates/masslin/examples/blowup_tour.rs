//! Tour of a one-point blow-up member: the verdict predicate, the
//! factorization of the characteristic number through it, and the full
//! pair check.
//!
//! Run with: cargo run --example blowup_tour

use masslin::exact::{format_int_vec, format_rat, int, rat};
use masslin::families::blowup_cpn;
use masslin::invariant::CharNumberEngine;
use masslin::masslinear::verify_pair;

fn main() {
    let fam = blowup_cpn(3, &rat(2), &rat(1)).expect("admissible");
    let engine = CharNumberEngine::new(&fam.spec).expect("engine");

    // In dimension three the characteristic number factors through the
    // verdict predicate: I(k; b) = (b1 + b2 - 3 b3) * I(k; e1).
    let i_e1 = engine.char_number(&[int(1), int(0), int(0)]).value;
    println!("I(k; e1) = {}", format_rat(&i_e1));
    for b in [[0i64, 1, 0], [1, 1, 0], [3, 0, 1], [1, 2, 1]] {
        let bi: Vec<_> = b.iter().map(|&x| int(x)).collect();
        let value = engine.char_number(&bi).value;
        let factor = b[0] + b[1] - 3 * b[2];
        println!(
            "I(k; {}) = {} = {} * I(k; e1); predicate zero: {}",
            format_int_vec(&bi),
            format_rat(&value),
            factor,
            fam.mass_linear_predicate(&bi),
        );
    }

    // The full pair check ties everything together: the invariant vanishes
    // at every sampled chamber point exactly when the pairing is mass linear
    // with vanishing coefficient sum.
    println!();
    for b in [[3i64, 0, 1], [1, 0, 0]] {
        let bi: Vec<_> = b.iter().map(|&x| int(x)).collect();
        let report = verify_pair(&fam.spec, &bi, 6, 11).expect("pair check");
        println!(
            "b = {}: invariant zero at all samples: {}, mass linear: {}, equivalence: {}",
            format_int_vec(&bi),
            report.i_zero_everywhere,
            report.mass_linear.is_linear,
            if report.equivalence_holds { "consistent" } else { "INCONSISTENT" },
        );
        if let Some(chain) = &report.displacement {
            println!(
                "  displacement chain: sum R_j <d, n_j> = {} = <d, b> = {} = sum R = {}",
                format_rat(&chain.sum_r_conormal),
                format_rat(&chain.d_dot_b),
                format_rat(&chain.sum_r),
            );
        }
    }
}
