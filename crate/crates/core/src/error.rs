use thiserror::Error;

/// Errors raised by the workbench operations.
///
/// Precondition failures carry enough context (atom ids, class encodings,
/// measured values) to be reported verbatim by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid atom space: {0}")]
    InvalidSpace(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("generator {generator} maps atom {from} (weight {from_weight}) to atom {to} (weight {to_weight})")]
    WeightMismatch {
        generator: String,
        from: usize,
        to: usize,
        from_weight: String,
        to_weight: String,
    },
    #[error("split of atom {atom} sums to {got}, expected {expected}")]
    SplitMismatch {
        atom: usize,
        got: String,
        expected: String,
    },
    #[error("invalid edge set: {0}")]
    InvalidEdgeSet(String),
    #[error("edge measure invariance violated: left {left} != right {right}")]
    InvarianceViolation { left: String, right: String },
    #[error("resource limit exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: String,
        needed: String,
        cap: String,
    },
    #[error("IRS mismatch at class {class}: {left} vs {right}")]
    IrsMismatch {
        class: String,
        left: String,
        right: String,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no isomorphism: {0}")]
    NoIsomorphism(String),
    #[error("cut budget exceeded: edge measure {achieved} is not below {required}")]
    BudgetExceeded { achieved: String, required: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn resource(what: &str, needed: impl ToString, cap: impl ToString) -> Self {
        Error::Resource {
            what: what.to_string(),
            needed: needed.to_string(),
            cap: cap.to_string(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors that signal a violated precondition (CLI exit code 1)
    /// rather than malformed input (exit code 2).
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Parse { .. })
    }
}
