use alloc::string::String;
use num_bigint::BigUint;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `gcd(a²−1, Q) > 1`. When `1 < gcd < Q` this is itself a proof that
    /// `Q` is composite.
    #[error("modulus shares the factor {gcd} with a^2-1")]
    SharedFactor { gcd: BigUint },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
