use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::units::Kind;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    Domain(String),
    /// Two tagged natural-unit values of different kinds were combined.
    UnitMismatch {
        lhs: Kind,
        rhs: Kind,
    },
    /// The two packets of a superposition have different widths.
    MismatchedWidths {
        a: f64,
        b: f64,
    },
    /// The superposition norm collapsed below the floor (destructive interference).
    NearNullNormalization {
        norm: f64,
        floor: f64,
    },
    /// A Page–Wootters model cannot be built with the requested parameters.
    Config(String),
    /// The conditioning event has (numerically) zero probability.
    NullConditioning {
        denominator: f64,
    },
    /// The sweep objective is flat on the whole bracket.
    NoOptimum {
        max_abs: f64,
    },
    UnknownScenario {
        name: String,
        available: Vec<&'static str>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UnitMismatch { lhs, rhs } => {
                write!(f, "unit mismatch: cannot combine {lhs:?} with {rhs:?}")
            }
            Error::MismatchedWidths { a, b } => {
                write!(f, "packet widths differ ({a} vs {b}); both branches must share one width")
            }
            Error::NearNullNormalization { norm, floor } => {
                write!(f, "superposition norm {norm:e} is below the floor {floor:e} (destructive interference)")
            }
            Error::Config(msg) => write!(f, "invalid model configuration: {msg}"),
            Error::NullConditioning { denominator } => {
                write!(f, "conditioning event has probability weight {denominator:e}, below 1e-14")
            }
            Error::NoOptimum { max_abs } => {
                write!(f, "objective is flat on the bracket (max |k_quantum| = {max_abs:e} < 1e-30)")
            }
            Error::UnknownScenario { name, available } => {
                write!(f, "unknown scenario `{name}`; available: {}", available.join(", "))
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
