use alloc::string::String;
use core::fmt;

use crate::lottery::Issue;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Lottery failed validation; the first problem found is carried.
    Lottery(Issue),
    /// Every Luce attribute is zero, so no prior can be normalized.
    DegeneratePrior,
    LengthMismatch { expected: usize, found: usize },
    /// An argument is outside its documented domain.
    Domain(&'static str),
    /// A scenario lacks an input it needs.
    MissingInput(String),
    /// A scenario expects a quantity its pipeline does not produce.
    UnknownQuantity(String),
    NoConvergence { iterations: usize, residual: f64 },
    /// Conditioning or reduction on an event of zero probability.
    ZeroProbability,
    Dimension(&'static str),
    TooShort { needed: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Lottery(issue) => write!(f, "invalid lottery: {issue}"),
            Error::DegeneratePrior => f.write_str("all prior attributes are zero"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::Domain(what) => write!(f, "argument out of domain: {what}"),
            Error::MissingInput(what) => write!(f, "missing input: {what}"),
            Error::UnknownQuantity(q) => write!(f, "quantity not produced by scenario: {q}"),
            Error::NoConvergence { iterations, residual } => {
                write!(f, "no convergence after {iterations} iterations (residual {residual:e})")
            }
            Error::ZeroProbability => f.write_str("event has zero probability"),
            Error::Dimension(what) => write!(f, "dimension mismatch: {what}"),
            Error::TooShort { needed, found } => {
                write!(f, "series too short: need {needed}, have {found}")
            }
        }
    }
}

impl core::error::Error for Error {}
