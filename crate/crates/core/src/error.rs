use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not in su2 (anti-hermitian residual {antihermitian:.3e}, trace {trace:.3e})")]
    NotSu2 { antihermitian: f64, trace: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("determinant drifted to {det} (|det - 1| = {drift:.3e}) at t = {t}; step too coarse")]
    DeterminantDrift { det: Complex64, drift: f64, t: f64 },

    #[error("t = {0} is not a point of the time grid")]
    NotOnGrid(f64),

    #[error("frame family is inconsistent: non-su2 remainder {0:.3e} in the Sym formula")]
    InconsistentFrame(f64),

    #[error("input is not an extended frame: diagonal residual {0:.3e} of F^-1 dF/dt at lambda = 0")]
    NotAFrame(f64),

    #[error("simple factor evaluated at a singular point lambda = {0}")]
    SingularPoint(Complex64),

    #[error("frame family carries no samples at lambda = {0}")]
    MissingLambda(Complex64),

    #[error(
        "M_alpha^-1 L is not L (sine of angle {0:.3e}); the dressed curve would lose its period"
    )]
    EigenlineViolated(f64),

    #[error("invalid circleton: {0}")]
    InvalidSpec(String),

    #[error("loop lies outside the big cell or is under-resolved (condition number {0:.3e})")]
    OutsideBigCell(f64),

    #[error("Laurent truncation insufficient: {what} = {value:.3e}")]
    Truncation { what: &'static str, value: f64 },

    #[error("potential violates {invariant} (residual {residual:.3e})")]
    InvalidPotential { invariant: &'static str, residual: f64 },

    #[error("spectral data violates reality: imaginary part {0:.3e} in a Laurent coefficient of det xi")]
    NotReal(f64),

    #[error("branch points are not pairwise distinct (separation {0:.3e})")]
    RepeatedBranchPoints(f64),

    #[error("curvature formula denominator vanishes at t = {0}")]
    VanishingDenominator(f64),
}
