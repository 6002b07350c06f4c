use thiserror::Error;

/// Errors reported by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("could not parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("{0} is not a subword of {1}")]
    NotASubword(String, String),
    #[error("letter {letter} does not occur in {perm}")]
    LetterNotInPermutation { letter: u32, perm: String },
    #[error("{0} contains the pattern 1432 or 1423")]
    PatternViolation(String),
    #[error("{count} dominated diagrams exceed the budget of {budget}")]
    BudgetExceeded { count: String, budget: u64 },
    #[error("length {length} exceeds the reduced-word guard {guard}")]
    LengthGuardExceeded { length: usize, guard: usize },
    #[error("variable x_{0} has no image under the substitution")]
    UnmappedVariable(u32),
    #[error("diagram already has boxes in row {row} or column {column}")]
    Overlap { row: u32, column: u32 },
    #[error("row {row} or column {column} is not empty")]
    NonEmptyRowOrColumn { row: u32, column: u32 },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("diagram is not a member of the purple family")]
    NotInFamily,
    #[error("internal error: divided difference quotient left a nonzero remainder")]
    InexactDivision,
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
