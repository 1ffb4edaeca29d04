use thiserror::Error;

/// Errors produced by mesh construction, basis evaluation, and the bound pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mesh requires n >= 1 segments and degree k >= 1 (got n = {n}, k = {k})")]
    InvalidMesh { n: usize, k: usize },

    #[error("node order must lie in 1..={max} (got {order})")]
    InvalidNodeOrder { order: usize, max: usize },

    #[error("basis degree must lie in 1..={max} (got {degree})")]
    InvalidBasisDegree { degree: usize, max: usize },

    #[error("basis index {index} outside {min}..={max}")]
    IndexOutOfRange { index: i64, min: i64, max: i64 },

    #[error("evaluation point {x} outside [0, 1]")]
    PointOutOfDomain { x: f64 },

    #[error("divided difference needs equally many points and values, at least one each (got {points} points, {values} values)")]
    DividedDifferenceShape { points: usize, values: usize },

    #[error("repeated interpolation points must be adjacent (sorted); found a duplicate out of order")]
    UnsortedRepeatedPoints,

    #[error("coincident interpolation points need derivative data; value-only divided differences require distinct points")]
    CoincidentPoints,

    #[error("spline of degree {degree} on {n} segments needs {expected} coefficients (got {got})")]
    CoefficientCount {
        degree: usize,
        n: usize,
        expected: usize,
        got: usize,
    },

    #[error("iterate count must be at least 1")]
    ZeroIterate,

    #[error("derivative requires spline degree >= 2 (got {degree}); a degree-1 spline has no spline derivative here")]
    DerivativeDegreeTooLow { degree: usize },

    #[error("difference quotient denominator vanished at index {index}")]
    DegenerateSpacing { index: i64 },

    #[error("step t = {t} must lie in (0, 0.5]")]
    InvalidStep { t: f64 },

    #[error("grid needs at least 2 sample points per axis (got x_points = {x_points}, h_points = {h_points})")]
    InvalidGrid { x_points: usize, h_points: usize },

    #[error("degree k = {k} is too small; this quantity needs k >= 3")]
    DegreeBelowThree { k: usize },

    #[error("mesh too small: the interior second-difference spread needs n >= 4k + 8 (n = {n}, k = {k}, need n >= {required})")]
    MeshTooSmall { n: usize, k: usize, required: usize },

    #[error("iterate bound is defined for m >= 2 (got {m})")]
    IterateBoundOrder { m: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
