use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What went wrong while reading bracket notation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unbalanced bracket")]
    UnbalancedBracket,
    #[error("nested bracket")]
    NestedBracket,
    #[error("empty degenerate letter")]
    EmptyBracket,
    #[error("empty variant")]
    EmptyVariant,
    #[error("variants of unequal length")]
    UnequalVariantLengths,
    #[error("duplicate variant")]
    DuplicateVariant,
    #[error("variant separator outside brackets")]
    StraySeparator,
    #[error("character {0:?} is not in the alphabet")]
    InvalidChar(char),
}

/// A parse failure, located by byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("width index {index} out of range for width {width}")]
    WidthOutOfRange { index: usize, width: usize },
    #[error("width {index} falls inside degenerate letter {letter}")]
    SplitsLetter { index: usize, letter: usize },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid penalties: {0}")]
    InvalidPenalties(String),
    #[error("empty {0}")]
    EmptyInput(&'static str),
    #[error("too many members: {count} exceeds cap {cap}")]
    TooManyMembers { count: String, cap: u64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
