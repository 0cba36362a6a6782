use thiserror::Error;

use crate::units::Unit;
use crate::wavepacket::BandContent;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical or numerical input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot convert {from} to {to}: incompatible dimensions")]
    IncompatibleUnits { from: Unit, to: Unit },

    #[error("weight offset |{m} - {n}| > 1 is not stored")]
    UnsupportedOffset { m: usize, n: usize },

    #[error("truncation range for the packet is empty")]
    EmptyRange,

    #[error("operation needs a {expected} weight table, got {found}")]
    WrongBandContent {
        expected: &'static str,
        found: BandContent,
    },

    #[error("series has {0} samples, need at least 3")]
    TooFewSamples(usize),

    #[error("series ends at {end:e} s but must reach {required:e} s")]
    SeriesTooShort { end: f64, required: f64 },

    #[error("found {found} zero crossings in the window, need at least 3")]
    InsufficientCrossings { found: usize },

    #[error("zero-crossing period {crossing:e} s and spectral period {spectral:e} s disagree")]
    InconsistentPeriod { crossing: f64, spectral: f64 },

    #[error("revival criterion already fails without broadening")]
    NoRevivalAtZero,

    #[error("revival criterion still holds at the bracket limit {0:e} J")]
    UnboundedCriterion(f64),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
