use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical or numerical parameter is out of range.
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The argument lies outside the domain of the function.
    #[error("domain error in {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    /// A numerical procedure did not reach the requested accuracy.
    /// `estimate` is the best value obtained.
    #[error("{what} did not converge: estimate {estimate} with error {est_error}")]
    Accuracy {
        what: &'static str,
        estimate: f64,
        est_error: f64,
    },

    /// The requested formula is only valid on the other spectral branch.
    #[error("branch error: {0}")]
    Branch(String),

    /// A bracketing root search failed.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// Two profiles do not share the same sample set.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An explicit time march blew up.
    #[error("instability detected at step {step} (t = {t}): {reason}")]
    Instability { step: usize, t: f64, reason: String },

    /// A search ran past its horizon without finding what it looked for.
    #[error("search horizon {horizon} exceeded: {what}")]
    HorizonExceeded { what: &'static str, horizon: f64 },

    #[error("configuration error on line {line}: {reason}")]
    Config { line: usize, reason: String },
}

impl Error {
    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            function,
            reason: reason.into(),
        }
    }

    /// True for accuracy failures, which carry a usable best estimate.
    pub fn is_accuracy(&self) -> bool {
        matches!(self, Error::Accuracy { .. })
    }
}
