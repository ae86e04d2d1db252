use thiserror::Error;

use crate::portrait::Violation;

/// Errors raised by the toolkit. Portrait validation failures travel as
/// [`Violation`] and are wrapped here when they cross an API boundary.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree must be at least 2, got {0}")]
    InvalidDegree(u32),
    #[error("malformed angle {0:?}")]
    MalformedAngle(String),
    #[error("chord endpoints must be distinct")]
    DegenerateChord,
    #[error("diameter {0} outside [0, 1/2]")]
    DiameterOutOfRange(String),
    #[error("{what} must be at least {min}")]
    OutOfRange { what: &'static str, min: u64 },
    #[error("unsupported degree {got} (expected {expected})")]
    UnsupportedDegree { got: u32, expected: u32 },
    #[error(transparent)]
    Violation(#[from] Violation),
    #[error("portrait has periodic kneading: i{side}({angle}) has period {period}")]
    PeriodicKneading {
        angle: String,
        side: String,
        period: usize,
    },
    #[error("sampling exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: u64 },
    #[error("invalid sample spec: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable identifier of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDegree(_) => "invalid_degree",
            Error::MalformedAngle(_) => "malformed_angle",
            Error::DegenerateChord => "degenerate_chord",
            Error::DiameterOutOfRange(_) => "diameter_out_of_range",
            Error::OutOfRange { .. } => "out_of_range",
            Error::UnsupportedDegree { .. } => "unsupported_degree",
            Error::Violation(_) => "violation",
            Error::PeriodicKneading { .. } => "periodic_kneading",
            Error::SamplingExhausted { .. } => "sampling_exhausted",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
