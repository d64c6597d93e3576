use thiserror::Error;

/// Every failure mode in the crate funnels into this one enum so callers
/// (the CLI in particular) can map variants onto exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("negative amplitude {value} for {which}")]
    NegativeAmplitude { which: &'static str, value: f64 },

    #[error("degenerate amplitude: {which} is zero, phase undefined")]
    DegenerateAmplitude { which: &'static str },

    #[error("step size underflow at t = {t}: h = {h:e}")]
    StepUnderflow { t: f64, h: f64 },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("step budget of {0} steps exhausted")]
    TooManySteps(usize),

    #[error("limit cycle did not settle: return distance {distance:e} after {returns} returns")]
    NoConvergence { distance: f64, returns: usize },

    #[error("angular rate is not positive ({value:e}) near theta = {theta}")]
    NonPositiveRate { theta: f64, value: f64 },

    #[error("frequency normalization mismatch: relative difference {0:e}")]
    Inconsistent(f64),

    #[error("sweep duration {t} is below the adiabatic guard {min}")]
    NotAdiabatic { t: f64, min: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("loop is not simple (self-intersecting or not star-shaped about its centroid)")]
    NonSimpleLoop,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
