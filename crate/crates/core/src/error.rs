use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {degree} exceeds requested homogenisation degree {n}")]
    DegreeTooSmall { degree: usize, n: usize },
    #[error("Möbius map is singular (ad - bc = 0)")]
    SingularMobius,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is a nonzero constant and has no roots")]
    DegreeZero,
    #[error("root finder did not converge")]
    Unconverged,
    #[error("invalid rectangle: {0}")]
    InvalidRect(String),
    #[error("function (nearly) vanishes on the contour near {re}{im:+}i")]
    BoundaryZero { re: f64, im: f64 },
    #[error("phase refinement exceeded the sample cap of {cap}")]
    PhaseJump { cap: usize },
    #[error("operator series covers degree {have}, degree {need} required")]
    TruncationTooShort { have: usize, need: usize },
    #[error("de Bruijn weight xi must be nonzero")]
    ZeroXi,
    #[error("root {re}{im:+}i of h lies below the real axis")]
    RootPlacement { re: f64, im: f64 },
    #[error("moments must be positive and strictly decreasing (index {index})")]
    MomentsMisordered { index: usize },
    #[error("operator family `{0}` carries no narrowing claim")]
    NoClaim(String),
    #[error("value expected to be real has imaginary part {im:e} (scale {scale:e})")]
    NonReal { im: f64, scale: f64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("pencil member at angle index {index} is identically zero")]
    DegeneratePencil { index: usize },
    #[error("operator table covers degree {have}, degree {need} required")]
    TableTooShort { have: usize, need: usize },
    #[error("kernel does not decay along the imaginary axis")]
    NoDecay,
    #[error("quadrature tolerance {tol:e} not met within {panels} panels")]
    TolNotMet { tol: f64, panels: usize },
    #[error("no root of H(it) + m has positive real part")]
    NoQualifyingRoot,
    #[error("coefficient prefix of length {len} does not reach index {need}")]
    PrefixTooShort { len: usize, need: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
