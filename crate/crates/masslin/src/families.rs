//! Built-in polytope families with closed-form oracles: Hirzebruch trapezia,
//! Delta_p bundles over Delta_1, and one-point blow-ups of complex projective
//! space. Each family carries an exact center-of-mass formula, an exact
//! volume formula, and an integer-valued mass-linearity predicate, so the
//! general machinery can be checked against independent expressions.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, int, rat, rat_from_int, rat_pow, Int, Rat, RatVec};
use crate::polytope::{is_delzant, PolytopeSpec};

#[derive(Clone, Debug)]
pub enum FamilyParams {
    /// Trapezium with vertices (0,0), (0,lambda), (tau,0), (tau-r*lambda,
    /// lambda); admissible when sigma = tau - r*lambda > 0.
    Hirzebruch { r: i64, tau: Rat, lambda: Rat },
    /// Simplex bundle: fiber S_p(tau) in coordinates x_1..x_p, base segment
    /// in the last coordinate with twisted top facet x_last <= lambda + a.x.
    DeltaPBundle {
        p: usize,
        a: Vec<Int>,
        tau: Rat,
        lambda: Rat,
    },
    /// Simplex S_n(tau) truncated by x_n <= lambda; admissible when
    /// tau > lambda > 0.
    BlowupCpn { n: usize, tau: Rat, lambda: Rat },
}

#[derive(Clone, Debug)]
pub struct FamilyModel {
    pub spec: PolytopeSpec,
    pub params: FamilyParams,
}

/// The trapezium rb_1 = 2b_2 family.
pub fn hirzebruch(r: i64, tau: &Rat, lambda: &Rat) -> Result<FamilyModel> {
    if r < 1 {
        return Err(Error::InadmissibleParams(format!(
            "r must be a positive integer, got {r}"
        )));
    }
    if !tau.is_positive() || !lambda.is_positive() {
        return Err(Error::InadmissibleParams(
            "tau and lambda must be positive".to_string(),
        ));
    }
    let sigma = tau - rat(r) * lambda;
    if !sigma.is_positive() {
        return Err(Error::InadmissibleParams(format!(
            "sigma = tau - r*lambda must be positive, got {}",
            crate::exact::format_rat(&sigma)
        )));
    }
    let spec = PolytopeSpec::new(
        2,
        vec![
            vec![int(-1), int(0)],
            vec![int(0), int(-1)],
            vec![int(0), int(1)],
            vec![int(1), int(r)],
        ],
        vec![Rat::zero(), Rat::zero(), lambda.clone(), tau.clone()],
    )?;
    Ok(FamilyModel {
        spec,
        params: FamilyParams::Hirzebruch {
            r,
            tau: tau.clone(),
            lambda: lambda.clone(),
        },
    })
}

/// The Delta_p bundle over Delta_1 with twist vector a.
pub fn delta_p_bundle(p: usize, a: &[i64], tau: &Rat, lambda: &Rat) -> Result<FamilyModel> {
    if p < 2 {
        return Err(Error::InadmissibleParams(format!(
            "the bundle family needs p >= 2, got {p}"
        )));
    }
    if a.len() != p {
        return Err(Error::InadmissibleParams(format!(
            "twist vector has {} entries, expected p = {p}",
            a.len()
        )));
    }
    if !tau.is_positive() || !lambda.is_positive() {
        return Err(Error::InadmissibleParams(
            "tau and lambda must be positive".to_string(),
        ));
    }
    // The top facet height over the fiber vertex tau*e_i is
    // lambda + tau*a_i; every height must be positive for the bundle
    // combinatorics (at tau = 1 this is the familiar lambda + a_i > 0).
    for (i, ai) in a.iter().enumerate() {
        let height = lambda + tau * rat(*ai);
        if !height.is_positive() {
            return Err(Error::InadmissibleParams(format!(
                "top facet degenerates over fiber vertex {}: lambda + tau*a_{} = {}",
                i + 1,
                i + 1,
                crate::exact::format_rat(&height)
            )));
        }
    }

    let dim = p + 1;
    let mut conormals: Vec<Vec<Int>> = Vec::with_capacity(p + 3);
    for i in 0..p {
        let mut v = vec![int(0); dim];
        v[i] = int(-1);
        conormals.push(v);
    }
    let mut fiber_sum = vec![int(1); dim];
    fiber_sum[p] = int(0);
    conormals.push(fiber_sum);
    let mut base_bottom = vec![int(0); dim];
    base_bottom[p] = int(-1);
    conormals.push(base_bottom);
    let mut base_top: Vec<Int> = a.iter().map(|ai| int(-ai)).collect();
    base_top.push(int(1));
    conormals.push(base_top);

    let mut k = vec![Rat::zero(); p + 3];
    k[p] = tau.clone();
    k[p + 2] = lambda.clone();

    let spec = PolytopeSpec::new(dim, conormals, k)?;
    let report = is_delzant(&spec)?;
    if !report.delzant {
        return Err(Error::NotDelzant(report.failures.join("; ")));
    }
    Ok(FamilyModel {
        spec,
        params: FamilyParams::DeltaPBundle {
            p,
            a: a.iter().map(|&ai| int(ai)).collect(),
            tau: tau.clone(),
            lambda: lambda.clone(),
        },
    })
}

/// The one-point blow-up of complex projective n-space: S_n(tau) truncated
/// by x_n <= lambda.
pub fn blowup_cpn(n: usize, tau: &Rat, lambda: &Rat) -> Result<FamilyModel> {
    if n < 2 {
        return Err(Error::InadmissibleParams(format!(
            "the blow-up family needs n >= 2, got {n}"
        )));
    }
    if !lambda.is_positive() || lambda >= tau {
        return Err(Error::InadmissibleParams(
            "parameters must satisfy tau > lambda > 0".to_string(),
        ));
    }
    let mut conormals: Vec<Vec<Int>> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let mut v = vec![int(0); n];
        v[i] = int(-1);
        conormals.push(v);
    }
    conormals.push(vec![int(1); n]);
    let mut top = vec![int(0); n];
    top[n - 1] = int(1);
    conormals.push(top);

    let mut k = vec![Rat::zero(); n + 2];
    k[n] = tau.clone();
    k[n + 1] = lambda.clone();

    let spec = PolytopeSpec::new(n, conormals, k)?;
    Ok(FamilyModel {
        spec,
        params: FamilyParams::BlowupCpn {
            n,
            tau: tau.clone(),
            lambda: lambda.clone(),
        },
    })
}

impl FamilyModel {
    pub fn family_name(&self) -> &'static str {
        match &self.params {
            FamilyParams::Hirzebruch { .. } => "hirzebruch",
            FamilyParams::DeltaPBundle { .. } => "bundle",
            FamilyParams::BlowupCpn { .. } => "blowup",
        }
    }

    /// Center of mass from the family's closed form, in the normalized k.
    pub fn cm_closed(&self) -> RatVec {
        match &self.params {
            FamilyParams::Hirzebruch { r, tau, lambda } => {
                let r = rat(*r);
                let denom = rat(3) * (rat(2) * tau - &r * lambda);
                let x = (rat(3) * tau * tau - rat(3) * &r * tau * lambda
                    + &r * &r * lambda * lambda)
                    / &denom;
                let y = (rat(3) * lambda * tau - rat(2) * &r * lambda * lambda) / &denom;
                vec![x, y]
            }
            FamilyParams::DeltaPBundle { p, a, tau, lambda } => {
                let p = *p;
                let big_a = rat_from_int(&a.iter().cloned().sum::<Int>());
                let a_dot_a = rat_from_int(&a.iter().map(|ai| ai * ai).sum::<Int>());
                let pp1 = rat((p + 1) as i64);
                let pp2 = rat((p + 2) as i64);
                let denom = lambda * &pp1 + tau * &big_a;
                let mut cm: RatVec = a
                    .iter()
                    .map(|ai| {
                        tau / &pp2 * (lambda * &pp2 + tau * (&big_a + rat_from_int(ai)))
                            / &denom
                    })
                    .collect();
                let last = (&pp1 * &pp2 * lambda * lambda
                    + rat(2) * &pp2 * &big_a * lambda * tau
                    + (&a_dot_a + &big_a * &big_a) * tau * tau)
                    / (rat(2) * &pp2 * &denom);
                cm.push(last);
                cm
            }
            FamilyParams::BlowupCpn { n, tau, lambda } => {
                let n = *n;
                let sigma = tau - lambda;
                let tn = rat_pow(tau, n as u32);
                let sn = rat_pow(&sigma, n as u32);
                let scale = (rat_pow(tau, (n + 1) as u32) - rat_pow(&sigma, (n + 1) as u32))
                    / (rat((n + 1) as i64) * (&tn - &sn));
                let mut cm = vec![scale; n];
                cm[n - 1] -= lambda * &sn / (&tn - &sn);
                cm
            }
        }
    }

    /// Volume from the family's closed form.
    pub fn volume_closed(&self) -> Rat {
        match &self.params {
            FamilyParams::Hirzebruch { r, tau, lambda } => {
                lambda * (rat(2) * tau - rat(*r) * lambda) / rat(2)
            }
            FamilyParams::DeltaPBundle { p, a, tau, lambda } => {
                let big_a = rat_from_int(&a.iter().cloned().sum::<Int>());
                lambda * rat_pow(tau, *p as u32) / rat_from_int(&factorial(*p))
                    + big_a * rat_pow(tau, (*p + 1) as u32)
                        / rat_from_int(&factorial(*p + 1))
            }
            FamilyParams::BlowupCpn { n, tau, lambda } => {
                let sigma = tau - lambda;
                (rat_pow(tau, *n as u32) - rat_pow(&sigma, *n as u32))
                    / rat_from_int(&factorial(*n))
            }
        }
    }

    /// Integer value whose vanishing is the family's mass-linearity test:
    /// r*b_1 - 2*b_2 for the trapezium;
    /// (p+1)(2 a.bhat + bdot a.a) - A(2B + bdot*A) for the bundle;
    /// sum_{j<n} b_j - n*b_n for the blow-up.
    pub fn predicate_value(&self, b: &[Int]) -> Int {
        match &self.params {
            FamilyParams::Hirzebruch { r, .. } => int(*r) * &b[0] - int(2) * &b[1],
            FamilyParams::DeltaPBundle { p, a, .. } => {
                let p = *p;
                let big_a: Int = a.iter().cloned().sum();
                let a_dot_a: Int = a.iter().map(|ai| ai * ai).sum();
                let a_dot_bhat: Int = a.iter().zip(&b[..p]).map(|(ai, bi)| ai * bi).sum();
                let b_sum: Int = b[..p].iter().cloned().sum();
                let bdot = &b[p];
                int((p + 1) as i64) * (int(2) * a_dot_bhat + bdot * a_dot_a)
                    - &big_a * (int(2) * b_sum + bdot * &big_a)
            }
            FamilyParams::BlowupCpn { n, .. } => {
                let n = *n;
                b[..n - 1].iter().cloned().sum::<Int>() - int(n as i64) * &b[n - 1]
            }
        }
    }

    /// Whether (Delta, b) is mass linear, by the family's closed-form test.
    pub fn mass_linear_predicate(&self, b: &[Int]) -> bool {
        self.predicate_value(b).is_zero()
    }
}

/// For p = 2 bundles: the direction gamma_1 n_1 + gamma_2 n_2 + gamma_3 n_3
/// built from weights summing to zero; it comes out as
/// (gamma_3 - gamma_1, gamma_3 - gamma_2, 0).
pub fn gamma_direction(gamma: &[Int; 3]) -> Vec<Int> {
    assert!(
        (&gamma[0] + &gamma[1] + &gamma[2]).is_zero(),
        "gamma weights must sum to zero"
    );
    vec![&gamma[2] - &gamma[0], &gamma[2] - &gamma[1], Int::zero()]
}
