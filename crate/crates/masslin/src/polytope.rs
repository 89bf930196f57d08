//! Polytope specifications by halfspaces, exact vertex enumeration,
//! combinatorial type, Delzant verification, chamber comparison, and the
//! k-space symmetries (translation, scaling, normal form).

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    dot_ri, format_rat, format_rat_vec, int_det, int_solve_cramer, parse_rat, rat_from_int, Int,
    IntVec, Rat, RatMat, RatVec,
};

/// A rational polytope given as an intersection of halfspaces
/// `<x, n_j> <= k_j` with primitive integer conormals `n_j`.
///
/// Construction validates the structure (dimensions, primitivity, distinct
/// conormals) and that the halfspace cone is bounded; whether a particular
/// `k` yields a nonempty full-dimensional body is checked by
/// [`enumerate_vertices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeSpec {
    dim: usize,
    conormals: Vec<IntVec>,
    k: RatVec,
}

impl PolytopeSpec {
    pub fn new(dim: usize, conormals: Vec<IntVec>, k: RatVec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dim must be positive".into()));
        }
        if conormals.len() != k.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} conormals but {} support numbers",
                conormals.len(),
                k.len()
            )));
        }
        let m = conormals.len();
        if m <= dim {
            return Err(Error::UnboundedOrEmpty(format!(
                "{m} halfspaces cannot bound a {dim}-dimensional polytope"
            )));
        }
        for (j, n) in conormals.iter().enumerate() {
            if n.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "conormal {} has {} entries, expected {dim}",
                    j + 1,
                    n.len()
                )));
            }
            if !crate::exact::is_primitive(n) {
                return Err(Error::NonPrimitiveConormal {
                    index: j + 1,
                    detail: format!("gcd of entries is {}", crate::exact::gcd_all(n)),
                });
            }
        }
        for (i, j) in (0..m).tuple_combinations() {
            if conormals[i] == conormals[j] {
                return Err(Error::DegenerateInput(format!(
                    "facets {} and {} share the conormal {}",
                    i + 1,
                    j + 1,
                    crate::exact::format_int_vec(&conormals[i])
                )));
            }
        }
        let spec = PolytopeSpec { dim, conormals, k };
        if let Some(d) = spec.recession_direction() {
            return Err(Error::UnboundedOrEmpty(format!(
                "halfspaces admit the recession direction {}",
                crate::exact::format_int_vec(&d)
            )));
        }
        Ok(spec)
    }

    /// Same conormals, new support numbers; validity of the conormal cone is
    /// inherited, so this skips the constructor checks. Used for chamber
    /// sampling where the result is validated by incidence comparison.
    pub(crate) fn with_k(&self, k: RatVec) -> PolytopeSpec {
        assert_eq!(k.len(), self.conormals.len());
        PolytopeSpec {
            dim: self.dim,
            conormals: self.conormals.clone(),
            k,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.conormals.len()
    }

    /// The facet excess r = m - n (number of facets minus dimension).
    pub fn r(&self) -> usize {
        self.num_facets() - self.dim
    }

    pub fn conormals(&self) -> &[IntVec] {
        &self.conormals
    }

    pub fn k(&self) -> &[Rat] {
        &self.k
    }

    /// A nonzero integer direction d with `<d, n_j> <= 0` for every j, if one
    /// exists; such a direction makes every `Delta(k)` unbounded (or empty).
    fn recession_direction(&self) -> Option<IntVec> {
        let n = self.dim;
        let m = self.conormals.len();
        let rows: Vec<RatVec> = self
            .conormals
            .iter()
            .map(|c| c.iter().map(rat_from_int).collect())
            .collect();
        if RatMat::from_rows(rows).rank() < n {
            // Conormals do not span: any direction in the common kernel
            // recesses both ways. Report a kernel vector.
            return self.kernel_direction();
        }
        if n == 1 {
            // Primitive 1-d conormals are +1 or -1; bounded needs both signs.
            for sign in [Int::one(), -Int::one()] {
                if self.conormals.iter().all(|c| &c[0] * &sign <= Int::zero()) {
                    return Some(vec![sign]);
                }
            }
            return None;
        }
        // The cone {d : Nd <= 0} is pointed (rank n); if nontrivial it has an
        // extreme ray cut out by n-1 linearly independent conormals.
        for subset in (0..m).combinations(n - 1) {
            let d = cross_direction(&subset.iter().map(|&j| self.conormals[j].clone()).collect_vec());
            if d.iter().all(Int::is_zero) {
                continue;
            }
            for cand in [d.clone(), d.iter().map(|x| -x.clone()).collect()] {
                if self
                    .conormals
                    .iter()
                    .all(|c| crate::exact::dot_ii(&cand, c) <= Int::zero())
                {
                    return Some(cand);
                }
            }
        }
        None
    }

    fn kernel_direction(&self) -> Option<IntVec> {
        // Rational kernel vector of the conormal matrix, cleared to integers.
        let n = self.dim;
        let rows: Vec<RatVec> = self
            .conormals
            .iter()
            .map(|c| c.iter().map(rat_from_int).collect())
            .collect();
        // Try coordinate directions first, then pairwise differences; for the
        // desk-scale inputs the echelon approach below always succeeds.
        let mat = RatMat::from_rows(rows);
        for i in 0..n {
            let mut e: RatVec = vec![Rat::zero(); n];
            e[i] = Rat::one();
            if mat.mul_vec(&e).iter().all(Rat::is_zero) {
                let mut d = vec![Int::zero(); n];
                d[i] = Int::one();
                return Some(d);
            }
        }
        // General case: solve from the echelon form by brute force over
        // subsets is unnecessary; a dependent column always exists, and the
        // polytope modules only need *some* certificate, so fall back to a
        // small search over integer directions with entries in [-3, 3].
        let mut ranges = Vec::new();
        for _ in 0..n {
            ranges.push(-3i64..=3i64);
        }
        for combo in ranges.into_iter().multi_cartesian_product() {
            let d: IntVec = combo.iter().map(|&x| Int::from(x)).collect();
            if d.iter().all(Int::is_zero) {
                continue;
            }
            let dr: RatVec = d.iter().map(rat_from_int).collect();
            if mat.mul_vec(&dr).iter().all(Rat::is_zero) {
                return Some(d);
            }
        }
        None
    }

    /// New spec whose polytope is `Delta(k) + a`: support numbers gain
    /// `<a, n_j>`.
    pub fn translate_k(&self, a: &[Rat]) -> PolytopeSpec {
        assert_eq!(a.len(), self.dim, "translation vector has wrong dimension");
        let k = self
            .k
            .iter()
            .zip(&self.conormals)
            .map(|(kj, nj)| kj + dot_ri(a, nj))
            .collect();
        self.with_k(k)
    }

    /// New spec whose polytope is `s * Delta(k)` for s > 0.
    pub fn scale_k(&self, s: &Rat) -> Result<PolytopeSpec> {
        if !s.is_positive() {
            return Err(Error::NonPositiveScale(format_rat(s)));
        }
        Ok(self.with_k(self.k.iter().map(|kj| kj * s).collect()))
    }

    /// Translation taking the polytope into its normalized position: returns
    /// `(v, spec0)` where `spec0 = translate_k(spec, v)` has zero support
    /// numbers on a chosen basis of n facets meeting at a vertex. Facets
    /// 1..n are used when they share a vertex and are independent; otherwise
    /// the active set of the lexicographically smallest vertex is used.
    pub fn normal_form(&self) -> Result<(RatVec, PolytopeSpec)> {
        let n = self.dim;
        let basis: Vec<usize> = match self.shared_vertex_of_first_n() {
            Some(_) => (0..n).collect(),
            None => {
                let inc = enumerate_vertices(self)?;
                let active = &inc.active_sets[0];
                let mut chosen = None;
                for subset in active.iter().copied().combinations(n) {
                    let rows: Vec<IntVec> =
                        subset.iter().map(|&j| self.conormals[j].clone()).collect();
                    if !int_det(&rows).is_zero() {
                        chosen = Some(subset);
                        break;
                    }
                }
                chosen.ok_or(Error::SingularMatrix)?
            }
        };
        let rows: Vec<RatVec> = basis
            .iter()
            .map(|&j| self.conormals[j].iter().map(rat_from_int).collect())
            .collect();
        let rhs: RatVec = basis.iter().map(|&j| -self.k[j].clone()).collect();
        let v = RatMat::from_rows(rows).solve(&rhs)?;
        let spec0 = self.translate_k(&v);
        Ok((v, spec0))
    }

    /// The common point of the first n facet hyperplanes when it exists, is
    /// unique, and lies in the polytope.
    fn shared_vertex_of_first_n(&self) -> Option<RatVec> {
        let n = self.dim;
        let rows: Vec<IntVec> = self.conormals[..n].to_vec();
        let point = solve_vertex_system(&rows, &self.k[..n])?;
        self.contains(&point).then_some(point)
    }

    /// Exact membership test for all m inequalities.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.conormals
            .iter()
            .zip(&self.k)
            .all(|(nj, kj)| dot_ri(x, nj) <= *kj)
    }

    /// Renders the spec in the canonical JSON document layout.
    pub fn to_json_string(&self) -> String {
        let conormals = self
            .conormals
            .iter()
            .map(|c| format!("[{}]", c.iter().map(Int::to_string).join(",")))
            .join(",");
        let k = self
            .k
            .iter()
            .map(|kj| format!("\"{}\"", format_rat(kj)))
            .join(",");
        format!(
            "{{\"dim\": {}, \"conormals\": [{}], \"k\": [{}]}}",
            self.dim, conormals, k
        )
    }
}

/// Kernel vector of d-1 rows in dimension d via signed minors (the
/// determinant expansion of a formal last row); zero iff the rows are
/// dependent.
fn cross_direction(rows: &[IntVec]) -> IntVec {
    let d = rows.first().map_or(1, |r| r.len());
    assert!(rows.iter().all(|r| r.len() == d) && rows.len() + 1 == d);
    (0..d)
        .map(|i| {
            let minor: Vec<IntVec> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let det = int_det(&minor);
            if (d - 1 - i) % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Solves the n x n system `<x, rows_j> = k_j` exactly; None when singular.
fn solve_vertex_system(rows: &[IntVec], k: &[Rat]) -> Option<RatVec> {
    let mut denom_lcm = Int::one();
    for kj in k {
        denom_lcm = denom_lcm.lcm(kj.denom());
    }
    let rhs: IntVec = k
        .iter()
        .map(|kj| (kj * rat_from_int(&denom_lcm)).to_integer())
        .collect();
    let scaled = int_solve_cramer(rows, &rhs)?;
    let l = rat_from_int(&denom_lcm);
    Some(scaled.into_iter().map(|x| x / &l).collect())
}

/// Vertices of the polytope with their facet incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    /// Sorted lexicographically; every vertex satisfies all m inequalities.
    pub vertices: Vec<RatVec>,
    /// Per vertex: sorted indices of the facets it lies on (0-based).
    pub active_sets: Vec<Vec<usize>>,
    /// Per facet: sorted indices into `vertices` of the vertices on it.
    pub facet_vertices: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    /// True when every vertex lies on exactly n facets.
    pub fn is_simple(&self, dim: usize) -> bool {
        self.active_sets.iter().all(|s| s.len() == dim)
    }

    /// Facets with no vertex on them (0-based indices).
    pub fn empty_facets(&self) -> Vec<usize> {
        self.facet_vertices
            .iter()
            .enumerate()
            .filter(|(_, vs)| vs.is_empty())
            .map(|(j, _)| j)
            .collect()
    }
}

/// Solves every n-subset of facet systems, filters by exact feasibility, and
/// merges duplicates. Errors when fewer than n+1 affinely spanning vertices
/// remain (empty or lower-dimensional body).
pub fn enumerate_vertices(spec: &PolytopeSpec) -> Result<IncidenceStructure> {
    let n = spec.dim();
    let m = spec.num_facets();
    let mut found: Vec<RatVec> = Vec::new();
    for subset in (0..m).combinations(n) {
        let rows: Vec<IntVec> = subset.iter().map(|&j| spec.conormals()[j].clone()).collect();
        let ks: Vec<Rat> = subset.iter().map(|&j| spec.k()[j].clone()).collect();
        let Some(x) = solve_vertex_system(&rows, &ks) else {
            continue;
        };
        if spec.contains(&x) {
            found.push(x);
        }
    }
    found.sort();
    found.dedup();
    let vertices = found;
    if vertices.len() < n + 1 {
        return Err(Error::UnboundedOrEmpty(format!(
            "{} vertices found, need at least {}",
            vertices.len(),
            n + 1
        )));
    }
    let diffs: Vec<RatVec> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
        .collect();
    if RatMat::from_rows(diffs).rank() < n {
        return Err(Error::UnboundedOrEmpty(format!(
            "vertices span an affine subspace of dimension < {n}"
        )));
    }
    let active_sets: Vec<Vec<usize>> = vertices
        .iter()
        .map(|v| {
            (0..m)
                .filter(|&j| dot_ri(v, &spec.conormals()[j]) == spec.k()[j])
                .collect()
        })
        .collect();
    let mut facet_vertices: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (vi, active) in active_sets.iter().enumerate() {
        for &j in active {
            facet_vertices[j].push(vi);
        }
    }
    Ok(IncidenceStructure {
        vertices,
        active_sets,
        facet_vertices,
    })
}

/// Result of the Delzant test: simplicity plus smoothness at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantReport {
    pub delzant: bool,
    /// One line per offending vertex, naming it and the defect.
    pub failures: Vec<String>,
}

/// A polytope is Delzant when every vertex lies on exactly n facets whose
/// conormals form a lattice basis (determinant +-1).
pub fn is_delzant(spec: &PolytopeSpec) -> Result<DelzantReport> {
    let inc = enumerate_vertices(spec)?;
    let n = spec.dim();
    let mut failures = Vec::new();
    for (v, active) in inc.vertices.iter().zip(&inc.active_sets) {
        if active.len() != n {
            failures.push(format!(
                "vertex {} lies on {} facets (simple polytope requires {n})",
                format_rat_vec(v),
                active.len()
            ));
            continue;
        }
        let rows: Vec<IntVec> = active.iter().map(|&j| spec.conormals()[j].clone()).collect();
        let det = int_det(&rows);
        if !(det.clone().abs()).is_one() {
            failures.push(format!(
                "vertex {}: active conormals have determinant {det}, not a lattice basis",
                format_rat_vec(v)
            ));
        }
    }
    Ok(DelzantReport {
        delzant: failures.is_empty(),
        failures,
    })
}

/// Canonical form of the combinatorial type: the multiset of vertex active
/// sets, sorted.
pub(crate) fn chamber_signature(spec: &PolytopeSpec) -> Result<Vec<Vec<usize>>> {
    let inc = enumerate_vertices(spec)?;
    let mut sig = inc.active_sets;
    sig.sort();
    Ok(sig)
}

/// Two specs lie in the same chamber when they share the conormal list and
/// their vertex-facet incidence patterns coincide. A spec whose polytope is
/// empty or degenerate compares unequal to everything (including itself).
pub fn same_chamber(a: &PolytopeSpec, b: &PolytopeSpec) -> bool {
    if a.dim() != b.dim() || a.conormals() != b.conormals() {
        return false;
    }
    match (chamber_signature(a), chamber_signature(b)) {
        (Ok(sa), Ok(sb)) => sa == sb,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// JSON document parsing
// ---------------------------------------------------------------------------

/// Parses the polytope spec document:
/// `{ "dim": 2, "conormals": [[-1,0],...], "k": ["0","1/2",...] }`
/// (k entries may be JSON integers or "p/q" strings).
pub fn parse_spec(text: &str) -> Result<PolytopeSpec> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be an object".into()))?;
    let dim = obj
        .get("dim")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Parse("missing or invalid \"dim\"".into()))? as usize;
    let conormals_json = obj
        .get("conormals")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("missing or invalid \"conormals\"".into()))?;
    let mut conormals = Vec::with_capacity(conormals_json.len());
    for (j, row) in conormals_json.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("conormal {} must be an array", j + 1)))?;
        let mut c = Vec::with_capacity(entries.len());
        for e in entries {
            let x = e.as_i64().ok_or_else(|| {
                Error::Parse(format!("conormal {} has a non-integer entry {e}", j + 1))
            })?;
            c.push(Int::from(x));
        }
        conormals.push(c);
    }
    let k_json = obj
        .get("k")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("missing or invalid \"k\"".into()))?;
    let mut k = Vec::with_capacity(k_json.len());
    for (j, e) in k_json.iter().enumerate() {
        let kj = match e {
            serde_json::Value::Number(num) => num
                .as_i64()
                .map(crate::exact::rat)
                .ok_or_else(|| Error::Parse(format!("k[{}] must be an integer or \"p/q\"", j + 1))),
            serde_json::Value::String(s) => parse_rat(s),
            other => Err(Error::Parse(format!(
                "k[{}] must be an integer or \"p/q\" string, got {other}",
                j + 1
            ))),
        }?;
        k.push(kj);
    }
    PolytopeSpec::new(dim, conormals, k)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::exact::{int, rat};

    pub fn iv(v: &[i64]) -> IntVec {
        v.iter().map(|&x| int(x)).collect()
    }

    pub fn rv(v: &[i64]) -> RatVec {
        v.iter().map(|&x| rat(x)).collect()
    }

    /// Unit square with conormals (-1,0),(0,-1),(1,0),(0,1).
    pub fn square() -> PolytopeSpec {
        PolytopeSpec::new(
            2,
            vec![iv(&[-1, 0]), iv(&[0, -1]), iv(&[1, 0]), iv(&[0, 1])],
            rv(&[0, 0, 1, 1]),
        )
        .unwrap()
    }

    /// Trapezium with conormals (-1,0),(0,-1),(0,1),(1,r): x >= 0, 0 <= y <= lambda,
    /// x + r y <= tau.
    pub fn trapezium(r: i64, k: &[Rat]) -> PolytopeSpec {
        PolytopeSpec::new(
            2,
            vec![iv(&[-1, 0]), iv(&[0, -1]), iv(&[0, 1]), iv(&[1, r])],
            k.to_vec(),
        )
        .unwrap()
    }
}
