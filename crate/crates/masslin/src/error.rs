//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad JSON shape, too few facets, duplicate conormals.
    #[error("parse error: {0}")]
    Parse(String),

    /// A conormal whose entries have a common factor (or are all zero).
    #[error("conormal {index} is not primitive: {detail}")]
    NonPrimitiveConormal { index: usize, detail: String },

    /// Vector or matrix sizes do not agree with the declared dimension.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The halfspace intersection has no bounded full-dimensional body.
    #[error("polytope is unbounded or empty: {0}")]
    UnboundedOrEmpty(String),

    /// Square linear system with zero determinant.
    #[error("singular matrix")]
    SingularMatrix,

    /// A lattice vector that should be primitive is not.
    #[error("vector is not primitive: {0}")]
    NotPrimitive(String),

    /// Support-number scaling requires a strictly positive factor.
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),

    /// Simplex constructors require strictly positive sizes and weights.
    #[error("parameter must be positive: {0}")]
    NonPositiveParameter(String),

    /// Geometry that cannot be triangulated (too few points, wrong rank).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A facet with fewer vertices than an (n-1)-polytope requires.
    #[error("facet {0} is degenerate")]
    DegenerateFacet(usize),

    #[error("polytope has zero volume")]
    ZeroVolume,

    /// A sampled support vector left the combinatorial chamber of the base.
    #[error("sample left the chamber: {0}")]
    ChamberExit(String),

    /// A validation node disagreed with the interpolated polynomial.
    #[error("interpolation inconsistent: {0}")]
    InterpolationInconsistent(String),

    /// Rejection sampling could not find enough chamber points.
    #[error("chamber sampling failed: {0}")]
    ChamberSamplingFailed(String),

    /// Family parameters outside the admissible range.
    #[error("inadmissible family parameters: {0}")]
    InadmissibleParams(String),

    /// A built polytope that was required to be Delzant is not.
    #[error("polytope is not Delzant: {0}")]
    NotDelzant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
