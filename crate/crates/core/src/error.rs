use thiserror::Error;

/// Errors raised by the field evaluators and their building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wedge angle phi = {phi} is outside (0, pi)")]
    WedgeAngleOutOfRange { phi: f64 },
    #[error("incidence angle alpha = {alpha} violates max(0, phi - pi/2) < alpha < min(pi/2, phi) for phi = {phi}")]
    IncidenceOutOfRange { phi: f64, alpha: f64 },
    #[error("the delta profile has no pointwise values; use the impulse (delta) evaluators")]
    DeltaNotPointwise,
    #[error("operation not supported: {0}")]
    NotSupported(String),
    #[error("kernel pole hit at argument {re} + {im}i")]
    PoleHit { re: f64, im: f64 },
    #[error("direction theta = {theta} lies on critical ray {k} (exclusion half-width {eps})")]
    CriticalRay { theta: f64, k: u8, eps: f64 },
    #[error("direction theta = {theta} is outside the exterior angle [phi, 2pi]")]
    OutsideDomain { theta: f64 },
    #[error("quadrature failed on [{a}, {b}]: error estimate {error} above tolerance {tolerance} after {subdivisions} subdivisions")]
    QuadratureFailure { a: f64, b: f64, error: f64, tolerance: f64, subdivisions: usize },
    #[error("evaluation point within {0} of the wavefront t = rho")]
    WavefrontSingularity(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("logarithm branch condition violated: {0}")]
    BranchViolation(String),
    #[error("integrand returned a non-finite value at x = {0}")]
    NonFiniteSample(f64),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
