use thiserror::Error;

/// Errors raised by the evaluators and parsers in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surd: radicand must be a positive integer")]
    InvalidSurd,

    #[error("inadmissible spin triple ({0}, {1}, {2})")]
    Inadmissible(String, String, String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("move does not apply to the current shape: {0}")]
    PlanMismatch(String),

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("malformed cobordism: {0}")]
    MalformedCobordism(String),

    #[error("malformed triangulation: {0}")]
    MalformedTriangulation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable code, used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSurd => "invalid_surd",
            Error::Inadmissible(..) => "inadmissible",
            Error::Domain(_) => "domain",
            Error::PlanMismatch(_) => "plan_mismatch",
            Error::Resource(_) => "resource",
            Error::MalformedCobordism(_) => "malformed_cobordism",
            Error::MalformedTriangulation(_) => "malformed_triangulation",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
