use thiserror::Error;

/// Errors raised by the geometric operations of the crate.
///
/// Parse failures of front documents have their own type,
/// [`crate::frontlang::ParseError`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("curve is not immersed: velocity vanishes near s = {0}")]
    NotImmersed(f64),

    #[error("bad description: {0}")]
    BadDescription(String),

    #[error("degenerate cusp at s = {s}: |y'| = {y_prime:e} is below the floor")]
    DegenerateCusp { s: f64, y_prime: f64 },

    #[error("z does not close up: the integral of y dx is {defect:e}")]
    ZNotClosed { defect: f64 },

    #[error("loop is not closed: defect_z = {defect_z:e}, defect_w = {defect_w:e}")]
    NotClosed { defect_z: f64, defect_w: f64 },

    #[error("closure system is singular (condition number {condition:e}); move the bump supports")]
    SingularSystem { condition: f64 },

    #[error("immersion lost{}", frame.map(|f| format!(" at frame {f}")).unwrap_or_default())]
    ImmersionLost { frame: Option<usize> },

    #[error("winding number is ambiguous: angle step {max_step:.3} rad persists after refinement")]
    AmbiguousWinding { max_step: f64 },

    #[error("cusp imbalance c_minus - c_plus = {} is odd", c_minus - c_plus)]
    OddCuspImbalance { c_plus: i64, c_minus: i64 },

    #[error("could not synthesize a model with rot = {n} after {attempts} attempts: {last}")]
    SynthesisFailed {
        n: i64,
        attempts: usize,
        last: String,
    },

    #[error("unsupported overlap: {0}")]
    UnsupportedOverlap(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
