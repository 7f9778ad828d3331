use thiserror::Error;

/// Errors raised by the laboratory.
///
/// Variants are grouped so that front ends can map them onto distinct exit
/// codes: malformed input, violated preconditions, and exceeded size guards.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("endpoint {vertex} out of range for {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("random regular generation gave up after {0} attempts")]
    RetryBudgetExhausted(u64),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard `{guard}` exceeded: {actual} > {limit}")]
    SizeGuard {
        guard: &'static str,
        limit: u64,
        actual: u64,
    },
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }

    pub fn is_size_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. })
    }

    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::SelfLoop(_)
                | Error::DuplicateEdge(..)
                | Error::EndpointOutOfRange { .. }
                | Error::InvalidSpec(_)
                | Error::Parse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
