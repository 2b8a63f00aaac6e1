use thiserror::Error;

/// Errors raised by ring-walk computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("ring needs at least 3 sites, got {0}")]
    TooFewSites(usize),

    #[error("target site {delta} must satisfy 0 < delta < {n}")]
    InvalidTarget { n: usize, delta: usize },

    #[error("phase {phi} outside [-pi/{n}, pi/{n}]")]
    PhaseOutOfRange { n: usize, phi: f64 },

    #[error("{name} must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("budget T={total_time} admits no detection attempt at tau={tau}")]
    InvalidBudget { tau: f64, total_time: f64 },

    #[error("{requested} attempts exceeds the dense-storage limit of {limit}; chunk the run")]
    TooManyAttempts { requested: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge for N={n}, delta={delta}, phi={phi}, tau={tau}")]
    DecompositionFailure { n: usize, delta: usize, phi: f64, tau: f64 },

    #[error("phase-matching denominator vanishes for (m={m}, n={n})")]
    DegenerateDenominator { m: usize, n: usize },

    #[error("pair ({m}, {n}) is neither degenerate nor phase-matched at tau={tau}")]
    NotDark { m: usize, n: usize, tau: f64 },

    #[error("at grid point phi={phi}, tau={tau}: {source}")]
    AtGridPoint {
        phi: f64,
        tau: f64,
        #[source]
        source: Box<WalkError>,
    },
}

pub type Result<T, E = WalkError> = std::result::Result<T, E>;
