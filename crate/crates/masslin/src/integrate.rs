//! Exact triangulation-based integration: volumes, first moments, center of
//! mass, and lattice-normalized facet integrals.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    factorial, rat_from_int, unimodular_flatten, Rat, RatVec,
};
use crate::polytope::{enumerate_vertices, IncidenceStructure, PolytopeSpec};

/// d+1 points spanning a d-dimensional simplex (possibly degenerate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<RatVec>,
}

/// Euclidean volume together with the first moments `moments[i] = integral of
/// x_i` over the same region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentData {
    pub volume: Rat,
    pub moments: RatVec,
}

impl MomentData {
    pub fn zero(dim: usize) -> Self {
        MomentData {
            volume: Rat::zero(),
            moments: vec![Rat::zero(); dim],
        }
    }

    pub fn add(&mut self, other: &MomentData) {
        assert_eq!(self.moments.len(), other.moments.len());
        self.volume += &other.volume;
        for (a, b) in self.moments.iter_mut().zip(&other.moments) {
            *a += b;
        }
    }
}

/// `S_n(tau) = { x : x_i >= 0, sum x_i <= tau }` as a vertex list.
pub fn standard_simplex(n: usize, tau: &Rat) -> Result<Simplex> {
    weighted_simplex(&vec![Rat::one(); n], tau)
}

/// `{ x : x_i >= 0, sum c_i x_i <= tau }` with all c_i > 0: the simplex with
/// vertices 0 and (tau/c_i) e_i.
pub fn weighted_simplex(c: &[Rat], tau: &Rat) -> Result<Simplex> {
    if !tau.is_positive() {
        return Err(Error::NonPositiveParameter(format!(
            "tau = {}",
            crate::exact::format_rat(tau)
        )));
    }
    for (i, ci) in c.iter().enumerate() {
        if !ci.is_positive() {
            return Err(Error::NonPositiveParameter(format!(
                "c[{}] = {}",
                i + 1,
                crate::exact::format_rat(ci)
            )));
        }
    }
    let n = c.len();
    let mut vertices = vec![vec![Rat::zero(); n]];
    for (i, ci) in c.iter().enumerate() {
        let mut v = vec![Rat::zero(); n];
        v[i] = tau / ci;
        vertices.push(v);
    }
    Ok(Simplex { vertices })
}

/// Volume `|det(w_i - w_0)| / d!` and first moments `volume * centroid`
/// (the centroid of a simplex is the vertex average).
pub fn simplex_moments(s: &Simplex) -> MomentData {
    let d = s.vertices.len() - 1;
    assert!(s.vertices.iter().all(|v| v.len() == d));
    if d == 0 {
        return MomentData {
            volume: Rat::one(),
            moments: Vec::new(),
        };
    }
    let rows: Vec<RatVec> = s.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&s.vertices[0]).map(|(a, b)| a - b).collect())
        .collect();
    let det = crate::exact::RatMat::from_rows(rows).det();
    let volume = det.abs() / rat_from_int(&factorial(d));
    let moments = (0..d)
        .map(|i| {
            let sum: Rat = s.vertices.iter().map(|v| v[i].clone()).sum();
            &volume * sum / crate::exact::rat((d + 1) as i64)
        })
        .collect();
    MomentData { volume, moments }
}

/// Triangulates by coning from the lexicographically smallest vertex over
/// the recursively triangulated far faces. Every returned simplex is
/// nondegenerate; interiors are pairwise disjoint and cover the polytope.
pub fn triangulate(inc: &IncidenceStructure) -> Result<Vec<Simplex>> {
    triangulate_from(inc, 0)
}

/// Same construction with a chosen apex vertex for the top-level cone
/// (deeper levels still cone from the lex-min face vertex). Volume and
/// moment sums are apex-independent; this variant exists to test that.
pub fn triangulate_from(inc: &IncidenceStructure, apex: usize) -> Result<Vec<Simplex>> {
    if inc.vertices.is_empty() {
        return Err(Error::DegenerateInput("no vertices to triangulate".into()));
    }
    let n = inc.vertices[0].len();
    assert!(apex < inc.vertices.len(), "apex index out of range");
    let all: Vec<usize> = (0..inc.vertices.len()).collect();
    let index_simplices = cone_face(inc, &all, n, apex);
    let mut out = Vec::new();
    for idx in index_simplices {
        let s = Simplex {
            vertices: idx.iter().map(|&i| inc.vertices[i].clone()).collect(),
        };
        if !simplex_volume_is_zero(&s) {
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(Error::DegenerateInput(
            "triangulation produced no full-dimensional simplex".into(),
        ));
    }
    Ok(out)
}

fn simplex_volume_is_zero(s: &Simplex) -> bool {
    let d = s.vertices.len() - 1;
    if d == 0 {
        return false;
    }
    let rows: Vec<RatVec> = s.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&s.vertices[0]).map(|(a, b)| a - b).collect())
        .collect();
    crate::exact::RatMat::from_rows(rows).det().is_zero()
}

/// Triangulates the d-dimensional face spanned by `face` (ascending vertex
/// indices; ascending index = lexicographic coordinate order) into index
/// d-simplices, coning from `apex`.
fn cone_face(inc: &IncidenceStructure, face: &[usize], d: usize, apex: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![face[0]]];
    }
    if face.len() < d + 1 {
        // Too few vertices to span dimension d: degenerate face, no volume.
        return Vec::new();
    }
    if d == 1 {
        return vec![vec![face[0], *face.last().unwrap()]];
    }
    if face.len() == d + 1 {
        return vec![face.to_vec()];
    }
    // Facets of the ambient polytope containing the whole face cut nothing.
    let mut common: BTreeSet<usize> = inc.active_sets[face[0]].iter().copied().collect();
    for &v in &face[1..] {
        common = common
            .intersection(&inc.active_sets[v].iter().copied().collect())
            .copied()
            .collect();
    }
    let m = inc.facet_vertices.len();
    let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for j in 0..m {
        if common.contains(&j) {
            continue;
        }
        let s: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&v| inc.active_sets[v].binary_search(&j).is_ok())
            .collect();
        if s.len() < d || s.contains(&apex) {
            continue;
        }
        subfaces.insert(s);
    }
    let mut out = Vec::new();
    for sub in subfaces {
        let sub_apex = sub[0];
        for base in cone_face(inc, &sub, d - 1, sub_apex) {
            let mut simplex = vec![apex];
            simplex.extend(base);
            out.push(simplex);
        }
    }
    out
}

/// Exact volume and first moments of the polytope.
pub fn polytope_moments(spec: &PolytopeSpec) -> Result<MomentData> {
    let inc = enumerate_vertices(spec)?;
    moments_of(&inc, spec.dim())
}

/// Volume and moments from precomputed incidence data.
pub fn moments_of(inc: &IncidenceStructure, dim: usize) -> Result<MomentData> {
    let mut total = MomentData::zero(dim);
    for s in triangulate(inc)? {
        total.add(&simplex_moments(&s));
    }
    Ok(total)
}

/// Center of mass: first moments divided by volume.
pub fn center_of_mass(spec: &PolytopeSpec) -> Result<RatVec> {
    let data = polytope_moments(spec)?;
    if data.volume.is_zero() {
        return Err(Error::ZeroVolume);
    }
    Ok(data
        .moments
        .iter()
        .map(|mi| mi / &data.volume)
        .collect())
}

/// Integrals over one facet against the lattice-normalized measure: the
/// coordinates are mapped by a unimodular transform so the facet becomes
/// horizontal, integrated there with the Euclidean measure, and the moments
/// are mapped back to ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetIntegral {
    /// 0-based facet index.
    pub facet: usize,
    pub lattice_volume: Rat,
    /// Entry i is the integral of the ambient coordinate x_i over the facet.
    pub lattice_moments: RatVec,
}

pub fn facet_lattice_moments(
    spec: &PolytopeSpec,
    inc: &IncidenceStructure,
    j: usize,
) -> Result<FacetIntegral> {
    let n = spec.dim();
    let on_facet = &inc.facet_vertices[j];
    if on_facet.len() < n {
        return Err(Error::DegenerateFacet(j + 1));
    }
    if n == 1 {
        // A facet of a segment is one point; the 0-dimensional lattice
        // measure gives it total mass 1.
        let v = &inc.vertices[on_facet[0]];
        return Ok(FacetIntegral {
            facet: j,
            lattice_volume: Rat::one(),
            lattice_moments: v.clone(),
        });
    }
    let u = unimodular_flatten(&spec.conormals()[j])?;
    let kj = &spec.k()[j];
    // Flatten: y = U x puts the facet into { y_n = k_j }; drop the last
    // coordinate and keep track of which global vertex each point came from.
    let mut flat: Vec<(RatVec, usize)> = Vec::with_capacity(on_facet.len());
    for &vi in on_facet {
        let y = u.mul_vec(&inc.vertices[vi]);
        assert_eq!(&y[n - 1], kj, "flattened vertex must lie on y_n = k_j");
        flat.push((y[..n - 1].to_vec(), vi));
    }
    flat.sort();
    let local_vertices: Vec<RatVec> = flat.iter().map(|(y, _)| y.clone()).collect();
    let local_active: Vec<Vec<usize>> = flat
        .iter()
        .map(|(_, vi)| inc.active_sets[*vi].clone())
        .collect();
    let m = inc.facet_vertices.len();
    let mut local_facets: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (li, active) in local_active.iter().enumerate() {
        for &f in active {
            local_facets[f].push(li);
        }
    }
    let local_inc = IncidenceStructure {
        vertices: local_vertices,
        active_sets: local_active,
        facet_vertices: local_facets,
    };
    let mut flat_data = MomentData::zero(n - 1);
    for s in triangulate(&local_inc)? {
        flat_data.add(&simplex_moments(&s));
    }
    // Map back through x = U^{-1} y with y = (y', k_j): integrals transform
    // linearly, the constant last coordinate contributing k_j * volume.
    let u_inv = u.to_rat().inverse()?;
    let lattice_moments = (0..n)
        .map(|i| {
            let mut acc = &u_inv.rows()[i][n - 1] * kj * &flat_data.volume;
            for l in 0..n - 1 {
                acc += &u_inv.rows()[i][l] * &flat_data.moments[l];
            }
            acc
        })
        .collect();
    Ok(FacetIntegral {
        facet: j,
        lattice_volume: flat_data.volume,
        lattice_moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Int;
    use crate::exact::{interpolate, rat, ratio};
    use crate::polytope::testutil::{iv, rv, square, trapezium};
    use crate::polytope::PolytopeSpec;

    fn rvv(v: &[(i64, i64)]) -> RatVec {
        v.iter().map(|&(p, q)| ratio(p, q)).collect()
    }

    /// Delta_p bundle over Delta_1 for p = 2: prism over the triangle.
    fn bundle_p2(a: (i64, i64), tau: i64, lambda: i64) -> PolytopeSpec {
        PolytopeSpec::new(
            3,
            vec![
                iv(&[-1, 0, 0]),
                iv(&[0, -1, 0]),
                iv(&[1, 1, 0]),
                iv(&[0, 0, -1]),
                iv(&[-a.0, -a.1, 1]),
            ],
            rv(&[0, 0, tau, 0, lambda]),
        )
        .unwrap()
    }

    fn simplex_spec(n: usize, tau: i64) -> PolytopeSpec {
        let mut conormals = Vec::new();
        for i in 0..n {
            let mut c = vec![Int::from(0); n];
            c[i] = Int::from(-1);
            conormals.push(c);
        }
        conormals.push(vec![Int::from(1); n]);
        let mut k = vec![Rat::zero(); n];
        k.push(rat(tau));
        PolytopeSpec::new(n, conormals, k).unwrap()
    }

    #[test]
    fn simplex_constructors() {
        let s = standard_simplex(2, &rat(2)).unwrap();
        assert_eq!(s.vertices, vec![rv(&[0, 0]), rv(&[2, 0]), rv(&[0, 2])]);

        let s = standard_simplex(1, &rat(3)).unwrap();
        assert_eq!(s.vertices, vec![rv(&[0]), rv(&[3])]);

        let s = weighted_simplex(&rv(&[1, 2]), &rat(2)).unwrap();
        assert_eq!(s.vertices, vec![rv(&[0, 0]), rv(&[2, 0]), rv(&[0, 1])]);

        assert!(matches!(
            standard_simplex(2, &rat(0)),
            Err(Error::NonPositiveParameter(_))
        ));
        assert!(matches!(
            weighted_simplex(&rv(&[1, -1]), &rat(1)),
            Err(Error::NonPositiveParameter(_))
        ));
    }

    #[test]
    fn simplex_moment_examples() {
        let d = simplex_moments(&standard_simplex(2, &rat(2)).unwrap());
        assert_eq!(d.volume, rat(2));
        assert_eq!(d.moments, rvv(&[(4, 3), (4, 3)]));

        let d = simplex_moments(&standard_simplex(3, &rat(1)).unwrap());
        assert_eq!(d.volume, ratio(1, 6));
        assert_eq!(d.moments, rvv(&[(1, 24), (1, 24), (1, 24)]));

        let d = simplex_moments(&weighted_simplex(&rv(&[1, 2]), &rat(2)).unwrap());
        assert_eq!(d.volume, rat(1));
        assert_eq!(d.moments[0], ratio(2, 3));
    }

    #[test]
    fn degenerate_simplex_has_zero_volume() {
        let s = Simplex {
            vertices: vec![rv(&[0, 0]), rv(&[1, 1]), rv(&[2, 2])],
        };
        let d = simplex_moments(&s);
        assert!(d.volume.is_zero());
        assert!(d.moments.iter().all(Rat::is_zero));
    }

    #[test]
    fn triangulate_simplex_is_identity() {
        let spec = simplex_spec(3, 2);
        let inc = enumerate_vertices(&spec).unwrap();
        let pieces = triangulate(&inc).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].vertices.len(), 4);
    }

    #[test]
    fn triangulate_square_into_two_triangles() {
        let inc = enumerate_vertices(&square()).unwrap();
        let pieces = triangulate(&inc).unwrap();
        assert_eq!(pieces.len(), 2);
        let total: Rat = pieces.iter().map(|s| simplex_moments(s).volume).sum();
        assert_eq!(total, rat(1));
    }

    #[test]
    fn trapezium_volume_and_moments() {
        let spec = trapezium(1, &rv(&[0, 0, 1, 2]));
        let d = polytope_moments(&spec).unwrap();
        assert_eq!(d.volume, ratio(3, 2));
        assert_eq!(d.moments, rvv(&[(7, 6), (2, 3)]));
        assert_eq!(center_of_mass(&spec).unwrap(), rvv(&[(7, 9), (4, 9)]));
    }

    #[test]
    fn square_moments() {
        let d = polytope_moments(&square()).unwrap();
        assert_eq!(d.volume, rat(1));
        assert_eq!(d.moments, rvv(&[(1, 2), (1, 2)]));
        assert_eq!(center_of_mass(&square()).unwrap(), rvv(&[(1, 2), (1, 2)]));
    }

    #[test]
    fn simplex_center_of_mass_closed_form() {
        for n in 1..=4usize {
            for tau in 1..=3i64 {
                let cm = center_of_mass(&simplex_spec(n, tau)).unwrap();
                let expected = vec![ratio(tau, (n + 1) as i64); n];
                assert_eq!(cm, expected, "n={n}, tau={tau}");
            }
        }
    }

    #[test]
    fn bundle_volume_example() {
        let d = polytope_moments(&bundle_p2((1, 0), 1, 1)).unwrap();
        assert_eq!(d.volume, ratio(2, 3));
    }

    #[test]
    fn apex_choice_does_not_change_totals() {
        for spec in [
            trapezium(1, &rv(&[0, 0, 1, 2])),
            square(),
            bundle_p2((1, -1), 2, 3),
            simplex_spec(3, 2),
        ] {
            let inc = enumerate_vertices(&spec).unwrap();
            let reference = moments_of(&inc, spec.dim()).unwrap();
            for apex in 0..inc.vertices.len() {
                let mut total = MomentData::zero(spec.dim());
                for s in triangulate_from(&inc, apex).unwrap() {
                    total.add(&simplex_moments(&s));
                }
                assert_eq!(total, reference, "apex {apex}");
            }
        }
    }

    #[test]
    fn trapezium_facet_integrals() {
        let spec = trapezium(1, &rv(&[0, 0, 1, 2]));
        let inc = enumerate_vertices(&spec).unwrap();

        // Facet 2 (conormal (0,-1)): the segment y = 0, x in [0,2].
        let f = facet_lattice_moments(&spec, &inc, 1).unwrap();
        assert_eq!(f.lattice_volume, rat(2));
        assert_eq!(f.lattice_moments, rv(&[2, 0]));

        // Facet 4 (conormal (1,1)): one primitive lattice step from (2,0) to (1,1).
        let f = facet_lattice_moments(&spec, &inc, 3).unwrap();
        assert_eq!(f.lattice_volume, rat(1));
        assert_eq!(f.lattice_moments[0], ratio(3, 2));
        assert_eq!(f.lattice_moments[1], ratio(1, 2));
    }

    #[test]
    fn oblique_simplex_facet_counts_lattice_steps() {
        let spec = simplex_spec(2, 2);
        let inc = enumerate_vertices(&spec).unwrap();
        // The edge from (2,0) to (0,2) crosses 2 primitive lattice steps.
        let f = facet_lattice_moments(&spec, &inc, 2).unwrap();
        assert_eq!(f.lattice_volume, rat(2));
    }

    #[test]
    fn facet_centroid_lies_on_facet_hyperplane() {
        for spec in [
            trapezium(2, &rv(&[0, 0, 1, 3])),
            square(),
            bundle_p2((1, 0), 1, 1),
        ] {
            let inc = enumerate_vertices(&spec).unwrap();
            for j in 0..spec.num_facets() {
                let f = facet_lattice_moments(&spec, &inc, j).unwrap();
                assert!(f.lattice_volume.is_positive());
                let centroid: RatVec = f
                    .lattice_moments
                    .iter()
                    .map(|mi| mi / &f.lattice_volume)
                    .collect();
                assert_eq!(
                    crate::exact::dot_ri(&centroid, &spec.conormals()[j]),
                    spec.k()[j],
                    "facet {j}"
                );
            }
        }
    }

    #[test]
    fn degenerate_facet_is_reported() {
        // tau = r*lambda collapses the top edge to a point.
        let spec = trapezium(2, &rv(&[0, 0, 1, 2]));
        let inc = enumerate_vertices(&spec).unwrap();
        assert!(matches!(
            facet_lattice_moments(&spec, &inc, 2),
            Err(Error::DegenerateFacet(3))
        ));
    }

    #[test]
    fn volume_derivative_equals_facet_lattice_volume() {
        // volume(k + eps e_j) is a polynomial in eps of degree <= n on the
        // chamber; its linear coefficient is the facet's lattice volume.
        for spec in [trapezium(1, &rv(&[0, 0, 1, 2])), square()] {
            let n = spec.dim();
            let inc = enumerate_vertices(&spec).unwrap();
            for j in 0..spec.num_facets() {
                let expected = facet_lattice_moments(&spec, &inc, j).unwrap().lattice_volume;
                let points: Vec<(Rat, Rat)> = (0..=n as i64)
                    .map(|i| {
                        let eps = ratio(i, 8);
                        let mut k = spec.k().to_vec();
                        k[j] += &eps;
                        let vol = polytope_moments(&spec.with_k(k)).unwrap().volume;
                        (eps, vol)
                    })
                    .collect();
                let coeffs = interpolate(&points);
                assert_eq!(coeffs[1], expected, "facet {j}");
            }
        }
    }
}
