use thiserror::Error;

/// Error type shared by every module.
///
/// The three mathematical variants map onto the process exit-code contract:
/// domain and search errors exit with 1, invariant violations with 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain (wrong residue class, composite
    /// where a prime is required, unsupported width, bad flag value).
    #[error("{0}")]
    Domain(String),

    /// A bounded search ran out of room before finding its object.
    #[error("search for {what} exhausted at bound {bound}")]
    SearchExhausted { what: String, bound: u64 },

    /// A mathematical invariant that should be unconditionally true failed.
    /// Signals a bug in this crate, not bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code for this error: 1 for usage/domain trouble,
    /// 2 for invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
