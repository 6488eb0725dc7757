use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Bad input: parameters outside their domain, malformed polynomials, overlapping parts.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A coverage bitset would exceed the configured memory cap.
    #[error("memory budget exceeded: {required_bytes} bytes required, cap is {cap_bytes} bytes")]
    Resource { required_bytes: u64, cap_bytes: u64 },

    /// Fixed-point error budget cannot be met at the allowed precision.
    #[error("precision budget exceeded: at least {required_bits} bits required (ceiling {ceiling_bits})")]
    Precision { required_bits: u64, ceiling_bits: u32 },

    /// A bounded search ran out of room before reaching a conclusion.
    #[error("search cap reached: {0}")]
    SearchCap(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Resource and precision refusals share the CLI's "budget" exit path.
    pub fn is_budget_refusal(&self) -> bool {
        matches!(self, Error::Resource { .. } | Error::Precision { .. } | Error::SearchCap(_))
    }
}
