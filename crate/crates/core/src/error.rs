use thiserror::Error;

use crate::quantum_logic::OmpAxiom;
use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Rejections raised before any law can be evaluated, or when a size bound
/// is exceeded. Mathematical failures are reported through [`Report`]s instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("{what} exceeds the bound: {actual} > {limit}")]
    Bound {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("mismatched algebras: `{left}` vs `{right}`")]
    Mismatch { left: String, right: String },

    #[error("malformed {what}: {detail}")]
    Structure { what: &'static str, detail: String },

    #[error("pasting does not yield a quantum event algebra:\n{0}")]
    Pasting(Report<OmpAxiom>),

    #[error("invalid {what}:\n{report}")]
    Invalid { what: &'static str, report: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn structure(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Structure {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid<L: std::fmt::Display>(what: &'static str, report: &Report<L>) -> Self {
        Error::Invalid {
            what,
            report: report.to_string(),
        }
    }

    pub(crate) fn bound(what: &'static str, actual: usize, limit: usize) -> Self {
        Error::Bound {
            what,
            actual,
            limit,
        }
    }
}
