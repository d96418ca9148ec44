use thiserror::Error;

/// Errors raised by scenario validation, the solvers and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("`{field}` has length {found}, expected {expected}")]
    DimensionMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("`{field}` must be a positive integer")]
    EmptyDimension { field: &'static str },

    #[error("`{field}` contains a non-finite value")]
    NonFinite { field: &'static str },

    #[error("price slope must be positive, got {0}")]
    NonPositiveSlope(f64),

    #[error("sensitivity of station {station} must be positive, got {value}")]
    NonPositiveSensitivity { station: usize, value: f64 },

    #[error("station {station}: charges sum to {row_sum}, but demand is {demand}")]
    DemandMismatch {
        station: usize,
        row_sum: f64,
        demand: f64,
    },

    #[error("station index {index} out of range for {n} stations")]
    StationOutOfRange { index: usize, n: usize },

    #[error("slot index {slot} out of range for horizon {horizon}")]
    SlotOutOfRange { slot: usize, horizon: usize },

    #[error("station {station} appears in more than one coalition")]
    OverlappingCoalitions { station: usize },

    #[error("coalition {coalition} is empty")]
    EmptyCoalition { coalition: usize },

    #[error(
        "factorization of {matrix} failed (smallest eigenvalue estimate {min_eigenvalue:e})"
    )]
    Conditioning {
        matrix: &'static str,
        min_eigenvalue: f64,
    },

    #[error("hypothesis violated ({hypothesis}): {detail}")]
    Hypothesis {
        hypothesis: &'static str,
        detail: String,
    },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("best-response dynamics did not converge in {sweeps} sweeps (last delta {delta:e})")]
    NotConverged { sweeps: usize, delta: f64 },
}

impl Error {
    /// True for errors caused by violated model or analysis preconditions,
    /// as opposed to numerical failures.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Conditioning { .. } | Error::NotConverged { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
