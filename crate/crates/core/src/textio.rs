//! Surface syntax and JSON form of values.
//!
//! ```text
//! term   := set | matrix
//! set    := '{' [ term (',' term)* ] '}'
//! matrix := '[' row (';' row)* ']'
//! row    := term (',' term)*
//! ```
//!
//! Whitespace is insignificant. Parsed matrices go through
//! [`Value::matrix`], so `[{}]` reads as `{}`. Printing is canonical: no
//! whitespace, set elements in value order.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use serde_json::Value as Json;
use thiserror::Error;

use crate::value::{Shape, View};
use crate::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    InvalidChar(char),
    Unexpected { found: char, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    Unclosed(char),
    TrailingInput(char),
    RaggedRows { expected: usize, found: usize, row: usize },
    EmptyMatrix,
    TooLarge,
}

/// Parse failure at a 1-based `line:column`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::InvalidChar(c) => write!(f, "invalid character {c:?}"),
            ParseErrorKind::Unexpected { found, expected } => write!(f, "expected {expected}, found {found:?}"),
            ParseErrorKind::UnexpectedEnd { expected } => write!(f, "unexpected end of input, expected {expected}"),
            ParseErrorKind::Unclosed(c) => write!(f, "unbalanced brackets: {c:?} opened here is never closed"),
            ParseErrorKind::TrailingInput(c) => write!(f, "unbalanced brackets: unexpected {c:?} after a complete term"),
            ParseErrorKind::RaggedRows { expected, found, row } => {
                write!(f, "ragged matrix: row {row} has {found} entries, row 1 has {expected}")
            }
            ParseErrorKind::EmptyMatrix => f.write_str("empty matrix `[]` has no shape"),
            ParseErrorKind::TooLarge => f.write_str("matrix dimensions too large"),
        }
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        Parser { chars: src.chars().peekable(), line: 1, col: 1 }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col: self.col, kind }
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.bump();
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Next significant character, validated against the alphabet.
    fn peek(&mut self) -> Result<Option<char>, ParseError> {
        self.skip_ws();
        match self.chars.peek() {
            Some(&c) if matches!(c, '{' | '}' | '[' | ']' | ',' | ';') => Ok(Some(c)),
            Some(&c) => Err(self.err(ParseErrorKind::InvalidChar(c))),
            None => Ok(None),
        }
    }

    fn term(&mut self, expected: &'static str) -> Result<Value, ParseError> {
        match self.peek()? {
            Some('{') => self.set(),
            Some('[') => self.matrix(),
            Some(c) => Err(self.err(ParseErrorKind::Unexpected { found: c, expected })),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd { expected })),
        }
    }

    fn set(&mut self) -> Result<Value, ParseError> {
        let (line, col) = (self.line, self.col);
        self.bump();
        let mut elems = Vec::new();
        if self.peek()? == Some('}') {
            self.bump();
            return Ok(Value::empty());
        }
        loop {
            elems.push(self.term("a term")?);
            match self.peek()? {
                Some(',') => {
                    self.bump();
                }
                Some('}') => {
                    self.bump();
                    return Ok(Value::set(elems));
                }
                Some(c) => return Err(self.err(ParseErrorKind::Unexpected { found: c, expected: "',' or '}'" })),
                None => return Err(ParseError { line, col, kind: ParseErrorKind::Unclosed('{') }),
            }
        }
    }

    fn matrix(&mut self) -> Result<Value, ParseError> {
        let (line, col) = (self.line, self.col);
        self.bump();
        if self.peek()? == Some(']') {
            return Err(ParseError { line, col, kind: ParseErrorKind::EmptyMatrix });
        }
        let mut entries = Vec::new();
        let mut width: Option<usize> = None;
        let mut rows = 1usize;
        let mut in_row = 0usize;
        loop {
            entries.push(self.term("a matrix entry")?);
            in_row += 1;
            let sep = self.peek()?;
            if matches!(sep, Some(';') | Some(']')) {
                match width {
                    None => width = Some(in_row),
                    Some(w) if w != in_row => {
                        return Err(self.err(ParseErrorKind::RaggedRows { expected: w, found: in_row, row: rows }));
                    }
                    Some(_) => {}
                }
            }
            match sep {
                Some(',') => {
                    self.bump();
                }
                Some(';') => {
                    self.bump();
                    rows += 1;
                    in_row = 0;
                }
                Some(']') => {
                    self.bump();
                    let cols = width.expect("set at row end");
                    let shape = match (u32::try_from(rows), u32::try_from(cols)) {
                        (Ok(r), Ok(c)) => Shape::new(r, c).expect("non-empty rows"),
                        _ => return Err(ParseError { line, col, kind: ParseErrorKind::TooLarge }),
                    };
                    return Ok(Value::matrix(shape, entries).expect("entry count checked"));
                }
                Some(c) => return Err(self.err(ParseErrorKind::Unexpected { found: c, expected: "',', ';' or ']'" })),
                None => return Err(ParseError { line, col, kind: ParseErrorKind::Unclosed('[') }),
            }
        }
    }
}

/// Parses one term in the surface syntax.
pub fn parse(src: &str) -> Result<Value, ParseError> {
    let mut p = Parser::new(src);
    let v = p.term("a term")?;
    match p.peek()? {
        None => Ok(v),
        Some(c) => Err(p.err(ParseErrorKind::TrailingInput(c))),
    }
}

/// Canonical surface text of a value.
pub fn print(v: &Value) -> String {
    v.to_string()
}

struct JsonView<'a>(&'a Value);

impl Serialize for JsonView<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self.0.view() {
            View::Set(elems) => {
                let mut st = ser.serialize_struct("Set", 2)?;
                st.serialize_field("kind", "set")?;
                st.serialize_field("elems", &elems.iter().map(JsonView).collect::<Vec<_>>())?;
                st.end()
            }
            View::Matrix(shape, entries) => {
                let mut st = ser.serialize_struct("Matrix", 4)?;
                st.serialize_field("kind", "matrix")?;
                st.serialize_field("rows", &shape.rows())?;
                st.serialize_field("cols", &shape.cols())?;
                st.serialize_field("entries", &entries.iter().map(JsonView).collect::<Vec<_>>())?;
                st.end()
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        JsonView(self).serialize(ser)
    }
}

/// Compact JSON text with fields in the order `kind, elems` or
/// `kind, rows, cols, entries`.
pub fn to_json(v: &Value) -> String {
    serde_json::to_string(&JsonView(v)).expect("values always serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("at {path}: {reason}")]
    Schema { path: String, reason: String },
}

fn schema_err(path: &str, reason: impl Into<String>) -> JsonError {
    JsonError::Schema { path: if path.is_empty() { "$".into() } else { path.into() }, reason: reason.into() }
}

/// Reads a value from JSON, canonicalizing as it goes.
pub fn from_json(text: &str) -> Result<Value, JsonError> {
    let json: Json = serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    from_json_value(&json)
}

pub fn from_json_value(json: &Json) -> Result<Value, JsonError> {
    decode(json, "$")
}

fn decode(json: &Json, path: &str) -> Result<Value, JsonError> {
    let obj = json.as_object().ok_or_else(|| schema_err(path, "expected an object"))?;
    let kind = obj.get("kind").and_then(Json::as_str).ok_or_else(|| schema_err(path, "missing string field `kind`"))?;
    let allowed: &[&str] = match kind {
        "set" => &["kind", "elems"],
        "matrix" => &["kind", "rows", "cols", "entries"],
        other => return Err(schema_err(path, format!("unknown kind `{other}`"))),
    };
    if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema_err(path, format!("unexpected field `{extra}`")));
    }
    let list = |field: &str| -> Result<&Vec<Json>, JsonError> {
        obj.get(field).and_then(Json::as_array).ok_or_else(|| schema_err(path, format!("missing array field `{field}`")))
    };
    let items = |field: &str| -> Result<Vec<Value>, JsonError> {
        list(field)?.iter().enumerate().map(|(i, j)| decode(j, &format!("{path}.{field}[{i}]"))).collect()
    };
    match kind {
        "set" => Ok(Value::set(items("elems")?)),
        _ => {
            let dim = |field: &str| -> Result<u32, JsonError> {
                let n = obj
                    .get(field)
                    .and_then(Json::as_u64)
                    .ok_or_else(|| schema_err(path, format!("missing non-negative integer field `{field}`")))?;
                u32::try_from(n).map_err(|_| schema_err(path, format!("`{field}` is too large")))
            };
            let shape = Shape::new(dim("rows")?, dim("cols")?).map_err(|e| schema_err(path, e.to_string()))?;
            let found = list("entries")?.len();
            if found != shape.len() {
                return Err(schema_err(path, format!("a {shape} matrix needs {} entries, got {found}", shape.len())));
            }
            Value::matrix(shape, items("entries")?).map_err(|e| schema_err(path, e.to_string()))
        }
    }
}
