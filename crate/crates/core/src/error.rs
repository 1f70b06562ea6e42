use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("homogeneous pair (0, 0) does not represent a point or isometry")]
    ZeroPair,

    #[error("the identity has no rotation axis")]
    IdentityHasNoAxis,

    #[error("elements do not form a group under composition: {0}")]
    NotAGroup(String),

    #[error("group order {0} matches no finite isometry group; tolerance failure likely")]
    UnrecognizedOrder(usize),

    #[error("root finder did not converge after {iterations} iterations (degree {degree})")]
    NoConvergence { degree: usize, iterations: usize },

    #[error("denominator is identically zero")]
    ZeroDenominator,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("map degree {got} is below the required {need}")]
    DegreeTooLow { need: usize, got: usize },

    #[error("preimage computation failed {0} times in a row")]
    PreimageFailure(usize),

    #[error("evaluation point collides with a measure sample (chordal distance {0:.3e})")]
    SampleCollision(f64),

    #[error("orbit did not enter the basin of the fixed point within {0} steps")]
    NotInBasin(usize),

    #[error("point is not a superattracting fixed point: {0}")]
    NotSuperattracting(String),

    #[error("isometry does not fix the given point")]
    DoesNotFixPoint,

    #[error("invalid raster window: {0}")]
    InvalidWindow(String),

    #[error("invalid exponents: require m >= 2 and d >= 1, got m = {m}, d = {d}")]
    InvalidExponents { m: i64, d: i64 },

    #[error("classification inconclusive: {reason}")]
    InconclusiveClassification {
        reason: String,
        report: Box<crate::symmetry::SymmetryReport>,
    },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("map is not a holomorphic isometry of the sphere")]
    NotAnIsometry,

    #[error("no escape radius available for this map; supply one explicitly")]
    MissingEscapeRadius,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
