use alloc::string::String;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative method failed to converge or a numerical safeguard tripped.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Coincident nodes where the formula needs distinct ones.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Input exceeds the size an oracle-grade routine is willing to handle.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! numeric {
    ($($arg:tt)*) => { $crate::Error::Numeric(alloc::format!($($arg)*)) };
}
macro_rules! degenerate {
    ($($arg:tt)*) => { $crate::Error::Degenerate(alloc::format!($($arg)*)) };
}
macro_rules! resource {
    ($($arg:tt)*) => { $crate::Error::Resource(alloc::format!($($arg)*)) };
}

pub(crate) use {degenerate, domain, numeric, resource};
