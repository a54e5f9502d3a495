use thiserror::Error;

use crate::value::{Shape, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("a {shape} matrix needs {expected} entries, got {found}")]
    Arity { shape: Shape, expected: usize, found: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    ZeroShape { rows: u32, cols: u32 },
    #[error("malformed shape `{0}`, expected MxN")]
    BadShape(String),
    #[error("expected a set, got the matrix {0}")]
    NotASet(Value),
    #[error("union guard violated: element {0} is not a set")]
    GuardViolation(Value),
    #[error("von Neumann indices start at 1")]
    ZeroIndex,
    #[error("universe exceeds the cap of {cap} values (needs at least {needed})")]
    Limit { cap: usize, needed: usize },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("variable `{var}` is bound as a {bound} variable but used as a {used} variable")]
    SortMismatch { var: String, bound: &'static str, used: &'static str },
    #[error("too many variables in one formula ({0}, limit 64)")]
    TooManyVariables(usize),
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("schema `{schema}` takes {expected} shape parameter(s), got {found}")]
    SchemaArity { schema: &'static str, expected: usize, found: usize },
    #[error("invalid parameters for `{schema}`: {reason}")]
    SchemaParams { schema: &'static str, reason: String },
}
