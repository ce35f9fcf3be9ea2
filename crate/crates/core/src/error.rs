use std::fmt;

/// 1-based line and column in a source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{loc}: syntax error: {msg}")]
    Syntax { loc: Location, msg: String },

    #[error("{loc}: unsupported constructor `{construct}` (only EL+ is accepted)")]
    Unsupported { loc: Location, construct: String },

    #[error("{loc}: not DL-safe: variable(s) {} occur in no positive non-DL body atom", .vars.join(", "))]
    Unsafe { loc: Location, vars: Vec<String> },

    #[error("ontology is inconsistent: individual `{witness}` is an instance of bot")]
    InconsistentOntology { witness: String },

    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    #[error("translation needs a reduced TBox, found existential on the right: {0}")]
    NotReduced(String),

    #[error("expected a ground program, found `{0}`")]
    NonGround(String),

    #[error("evaluation exceeded the step budget of {0}")]
    StepBudget(u64),

    #[error("instance too large for brute force: {size} atoms (cap {cap})")]
    TooLarge { size: usize, cap: usize },

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::Io(_) => 2,
            Error::Unsupported { .. } | Error::Unsafe { .. } => 3,
            Error::InconsistentOntology { .. } => 5,
            _ => 7,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
