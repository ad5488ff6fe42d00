use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole of {what} at {re}{im:+}i")]
    Pole { what: &'static str, re: f64, im: f64 },

    #[error("no Satake data for prime {prime}: extend prime table (bound {bound})")]
    MissingSatake { prime: u64, bound: u64 },

    #[error("Ramanujan tau table covers n <= {bound}, need {needed}: extend tau table")]
    TauTableTooShort { bound: usize, needed: usize },

    #[error("coefficient table covers n <= {bound}, need {needed}")]
    TableTooShort { bound: usize, needed: usize },

    #[error("character is not primitive: {0}")]
    NonPrimitiveCharacter(String),

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("non-finite integrand value at {location}")]
    NonFinite { location: String },

    #[error("tolerance {requested:e} unreachable; best estimate {best_re}{best_im:+}i with error {achieved:e}")]
    ToleranceUnreachable {
        requested: f64,
        achieved: f64,
        best_re: f64,
        best_im: f64,
    },

    #[error("strategy {strategy} does not apply to instance {label}")]
    Unsupported { strategy: String, label: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
