use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was NaN or infinite.
    NonFinite { name: &'static str, value: f64 },
    /// An argument violated a documented precondition.
    InvalidArgument {
        name: &'static str,
        reason: &'static str,
    },
    /// A momentum had a zero numerator or denominator.
    ZeroMomentum,
    /// A momentum string was not of the form `A/B` or `A`.
    MalformedMomentum,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { name, value } => write!(f, "`{name}` must be finite, got {value}"),
            Error::InvalidArgument { name, reason } => write!(f, "invalid `{name}`: {reason}"),
            Error::ZeroMomentum => f.write_str("momentum a/b needs positive a and b"),
            Error::MalformedMomentum => {
                f.write_str("momentum must be a positive rational written `A/B` or `A`")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}
