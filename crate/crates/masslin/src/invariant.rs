//! The characteristic number I(k; b) of the circle action generated by an
//! integral direction b: a facet-sum evaluation and an independent
//! derivative-based evaluation, plus the chamber derivative of the center of
//! mass. The two routes share no geometry code beyond the moment engine, so
//! their exact agreement is a strong internal check.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    dot_ri, factorial, interpolate, rat_from_int, ratio, Int, Rat, RatVec,
};
use crate::integrate::{facet_lattice_moments, moments_of, FacetIntegral};
use crate::polytope::{enumerate_vertices, PolytopeSpec};

/// I(k; b) with its per-facet decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharNumberResult {
    /// I(k; b) = -n * sum of facet terms.
    pub value: Rat,
    /// <Cm(Delta), b>, the offset that normalizes the Hamiltonian to zero mean.
    pub cm_pairing: Rat,
    /// (facet index, N_j) with N_j = (n-1)! * integral of the normalized
    /// Hamiltonian over facet j against the lattice measure.
    pub facet_terms: Vec<(usize, Rat)>,
}

/// Precomputed b-independent facet data: one construction serves every b.
pub struct CharNumberEngine {
    dim: usize,
    volume: Rat,
    cm: RatVec,
    facets: Vec<FacetIntegral>,
}

impl CharNumberEngine {
    pub fn new(spec: &PolytopeSpec) -> Result<Self> {
        let inc = enumerate_vertices(spec)?;
        let data = moments_of(&inc, spec.dim())?;
        if data.volume.is_zero() {
            return Err(Error::ZeroVolume);
        }
        let cm: RatVec = data.moments.iter().map(|mi| mi / &data.volume).collect();
        let facets = (0..spec.num_facets())
            .map(|j| facet_lattice_moments(spec, &inc, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(CharNumberEngine {
            dim: spec.dim(),
            volume: data.volume,
            cm,
            facets,
        })
    }

    pub fn cm(&self) -> &[Rat] {
        &self.cm
    }

    pub fn volume(&self) -> &Rat {
        &self.volume
    }

    /// Assembles I(k; b) from the cached facet integrals.
    pub fn char_number(&self, b: &[Int]) -> CharNumberResult {
        let n = self.dim;
        let cm_pairing = dot_ri(&self.cm, b);
        let scale = rat_from_int(&factorial(n - 1));
        let facet_terms: Vec<(usize, Rat)> = self
            .facets
            .iter()
            .map(|f| {
                let nj = &scale
                    * (dot_ri(&f.lattice_moments, b) - &cm_pairing * &f.lattice_volume);
                (f.facet, nj)
            })
            .collect();
        let sum: Rat = facet_terms.iter().map(|(_, nj)| nj.clone()).sum();
        CharNumberResult {
            value: -crate::exact::rat(n as i64) * sum,
            cm_pairing,
            facet_terms,
        }
    }
}

/// I(k; b) by the facet-sum formula: I = -n * sum_j N_j where
/// N_j = (n-1)! * (<moments_j, b> - <Cm, b> * volume_j) over the lattice
/// facet measure.
pub fn char_number_facets(spec: &PolytopeSpec, b: &[Int]) -> Result<CharNumberResult> {
    Ok(CharNumberEngine::new(spec)?.char_number(b))
}

/// Exact polynomials of the volume and first moments along the k-space line
/// `k + t * dir`, interpolated from samples validated to stay in the base
/// chamber. Volume has degree <= n and each moment degree <= n + 1 in t;
/// one extra sample turns those degree bounds into a checked property.
pub struct LineDerivative {
    /// Monomial coefficients of volume(t), lowest degree first.
    vol_coeffs: RatVec,
    /// Per ambient coordinate i: coefficients of (integral of x_i)(t).
    moment_coeffs: Vec<RatVec>,
}

impl LineDerivative {
    pub fn new(spec: &PolytopeSpec, dir: &[Rat]) -> Result<Self> {
        let n = spec.dim();
        let m = spec.num_facets();
        assert_eq!(dir.len(), m, "direction lives in k-space");
        let base_inc = enumerate_vertices(spec)?;
        let mut base_sig = base_inc.active_sets.clone();
        base_sig.sort();

        let count = n + 3;
        let offsets: Vec<i64> = (0..count as i64)
            .map(|i| {
                if i % 2 == 0 {
                    i / 2
                } else {
                    -(i / 2 + 1)
                }
            })
            .collect();
        let mut step = ratio(1, 2);
        'halving: for _ in 0..64 {
            let mut samples: Vec<(Rat, crate::integrate::MomentData)> =
                Vec::with_capacity(count);
            for &s in &offsets {
                let t = crate::exact::rat(s) * &step;
                let k: RatVec = spec
                    .k()
                    .iter()
                    .zip(dir)
                    .map(|(kj, dj)| kj + &t * dj)
                    .collect();
                let cand = spec.with_k(k);
                let Ok(inc) = enumerate_vertices(&cand) else {
                    step /= crate::exact::rat(2);
                    continue 'halving;
                };
                let mut sig = inc.active_sets.clone();
                sig.sort();
                if sig != base_sig {
                    step /= crate::exact::rat(2);
                    continue 'halving;
                }
                samples.push((t, moments_of(&inc, n)?));
            }
            return Self::from_samples(n, &samples);
        }
        Err(Error::ChamberExit(format!(
            "no step size keeps all {count} interpolation nodes in the chamber"
        )))
    }

    fn from_samples(n: usize, samples: &[(Rat, crate::integrate::MomentData)]) -> Result<Self> {
        let vol_pts: Vec<(Rat, Rat)> = samples
            .iter()
            .map(|(t, d)| (t.clone(), d.volume.clone()))
            .collect();
        let vol_coeffs = interpolate(&vol_pts);
        // Volume is polynomial of degree <= n on the chamber; the two extra
        // samples must land on the same polynomial.
        for c in &vol_coeffs[n + 1..] {
            if !c.is_zero() {
                return Err(Error::InterpolationInconsistent(format!(
                    "volume along the line has degree > {n}"
                )));
            }
        }
        let mut moment_coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let pts: Vec<(Rat, Rat)> = samples
                .iter()
                .map(|(t, d)| (t.clone(), d.moments[i].clone()))
                .collect();
            let coeffs = interpolate(&pts);
            if !coeffs[n + 2].is_zero() {
                return Err(Error::InterpolationInconsistent(format!(
                    "moment {i} along the line has degree > {}",
                    n + 1
                )));
            }
            moment_coeffs.push(coeffs);
        }
        Ok(LineDerivative {
            vol_coeffs,
            moment_coeffs,
        })
    }

    fn volume_at_zero(&self) -> &Rat {
        &self.vol_coeffs[0]
    }

    /// d/dt <Cm(k + t dir), b> at t = 0, by the quotient rule on the exact
    /// polynomials.
    pub fn cm_pairing_derivative(&self, b: &[Int]) -> Result<Rat> {
        let v0 = &self.vol_coeffs[0];
        if v0.is_zero() {
            return Err(Error::ZeroVolume);
        }
        let v1 = &self.vol_coeffs[1];
        let m0: Rat = self
            .moment_coeffs
            .iter()
            .zip(b)
            .map(|(c, bi)| &c[0] * rat_from_int(bi))
            .sum();
        let m1: Rat = self
            .moment_coeffs
            .iter()
            .zip(b)
            .map(|(c, bi)| &c[1] * rat_from_int(bi))
            .sum();
        Ok((m1 * v0 - m0 * v1) / (v0 * v0))
    }

    /// d/dt of each Cm coordinate at t = 0.
    pub fn coordinate_derivatives(&self) -> Result<RatVec> {
        let v0 = self.volume_at_zero();
        if v0.is_zero() {
            return Err(Error::ZeroVolume);
        }
        let v1 = &self.vol_coeffs[1];
        Ok(self
            .moment_coeffs
            .iter()
            .map(|c| (&c[1] * v0 - &c[0] * v1) / (v0 * v0))
            .collect())
    }
}

/// d/dt <Cm(k + t dir), b> at t = 0.
pub fn cm_pairing_derivative(spec: &PolytopeSpec, b: &[Int], dir: &[Rat]) -> Result<Rat> {
    LineDerivative::new(spec, dir)?.cm_pairing_derivative(b)
}

/// I(k; b) via the chamber derivative identity: the sum over j of
/// d<Cm, b>/dk_j equals -I / (n! volume), so I is recovered from the
/// derivative along the all-ones direction.
pub fn char_number_derivative(spec: &PolytopeSpec, b: &[Int]) -> Result<Rat> {
    let ones = vec![Rat::one(); spec.num_facets()];
    let line = LineDerivative::new(spec, &ones)?;
    let deriv = line.cm_pairing_derivative(b)?;
    let big_b = rat_from_int(&factorial(spec.dim())) * line.volume_at_zero();
    Ok(-big_b * deriv)
}

/// The derivative of the center of mass along the all-ones k-direction
/// (all support numbers advanced together), coordinate by coordinate.
pub fn dot_cm(spec: &PolytopeSpec) -> Result<RatVec> {
    let ones = vec![Rat::one(); spec.num_facets()];
    LineDerivative::new(spec, &ones)?.coordinate_derivatives()
}
