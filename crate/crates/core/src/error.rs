use thiserror::Error;

/// Coarse error class, used by the CLI to pick an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    Validation,
    NonGeneric,
    Resource,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: Q(sqrt {left}) vs Q(sqrt {right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("invalid foliation data: {}", .0.join(", "))]
    InvalidSpec(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("non-generic data: {0}")]
    NonGeneric(String),

    #[error("cut point {x} hit at step {step}")]
    CutPoint { x: String, step: usize },

    #[error("resource bound exceeded: {0}")]
    Resource(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("classification error: {0}")]
    Classification(String),
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::NonGeneric(_) | Error::CutPoint { .. } => Category::NonGeneric,
            Error::Resource(_) => Category::Resource,
            _ => Category::Validation,
        }
    }

    /// Short machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::FieldMismatch { .. } => "field_mismatch",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::Parse(_) => "parse",
            Error::NonGeneric(_) => "non_generic",
            Error::CutPoint { .. } => "cut_point",
            Error::Resource(_) => "resource",
            Error::Domain(_) => "domain",
            Error::Inconsistent(_) => "inconsistent",
            Error::ModelViolation(_) => "model_violation",
            Error::Classification(_) => "classification",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
