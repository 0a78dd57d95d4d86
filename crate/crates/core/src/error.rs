use thiserror::Error;

use crate::istate::MAX_LINES;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("width {0} out of range (expected 1..={MAX_LINES})")]
    WidthOutOfRange(usize),
    #[error("size {k} out of range for width {n} (expected 0..={max})", max = .n + 1)]
    SizeOutOfRange { n: usize, k: usize },
    #[error("coordinate {coord} outside [0,{n}]")]
    CoordinateOutOfRange { n: usize, coord: usize },
    #[error("I-state members must be strictly increasing")]
    NotIncreasing,
    #[error("I-states {0} and {1} live in different ambient parameters")]
    StateMismatch(String, String),
    #[error("line {line} outside [1,{n}]")]
    LineOutOfRange { n: usize, line: usize },
    #[error("I-states {0} and {1} are far")]
    FarPair(String, String),
    #[error("flavor {flavor} does not support {what}")]
    UnsupportedFlavor { flavor: String, what: String },
    #[error("I-state {state} is not a vertex of {context}")]
    Inadmissible { state: String, context: String },
    #[error("line {0} is not in the orientation set")]
    NotOriented(usize),
    #[error("contexts differ: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not a cycle")]
    NotCycle,
    #[error("classes are not composable")]
    NotComposable,
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),
    #[error("relation family {family} is not available for {context}")]
    FamilyMismatch { family: String, context: String },
}
