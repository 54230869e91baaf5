use thiserror::Error;

/// Broad failure class, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input is malformed or outside the domain of the operation.
    Domain,
    /// A configured resource cap was hit; the answer is unknown, not wrong.
    Resource,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid cyclic order {0}: every factor must be at least 2")]
    InvalidOrder(u64),

    #[error("group mismatch: {left} vs {right}")]
    GroupMismatch { left: String, right: String },

    #[error("element {element} does not belong to {group}")]
    NotAnElement { element: String, group: String },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("multiset underflow: cannot remove {0} from the sequence")]
    Underflow(String),

    #[error("{0}")]
    Domain(String),

    #[error("resource cap exceeded: {what} (limit {limit}){}", hint_suffix(.hint))]
    Resource {
        what: String,
        limit: u64,
        hint: Option<String>,
    },
}

fn hint_suffix(hint: &Option<String>) -> String {
    match hint {
        Some(h) => format!("; {h}"),
        None => String::new(),
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Resource { .. } => ErrorKind::Resource,
            _ => ErrorKind::Domain,
        }
    }

    pub(crate) fn resource(what: impl Into<String>, limit: u64) -> Self {
        Error::Resource {
            what: what.into(),
            limit,
            hint: None,
        }
    }

    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
