//! Canonical values: hereditarily finite sets whose elements may also be set
//! matrices.
//!
//! A [`Value`] is always in canonical form. Sets keep their elements sorted
//! under the value order with no duplicates, and no 1×1 matrix node is ever
//! stored: [`Value::matrix`] returns the entry of a 1×1 matrix unchanged. With
//! those two invariants structural equality is the identity relation of the
//! theory, so `==` decides equality and [`Value::has_member`] decides `∈`.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::Error;

/// Dimensions of a set matrix. Both components are at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    rows: u32,
    cols: u32,
}

impl Shape {
    pub fn new(rows: u32, cols: u32) -> Result<Shape, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroShape { rows, cols });
        }
        Ok(Shape { rows, cols })
    }

    pub fn rows(self) -> u32 {
        self.rows
    }

    pub fn cols(self) -> u32 {
        self.cols
    }

    /// Number of entries, `rows · cols`. Never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.rows as usize * self.cols as usize
    }

    pub fn is_unit(self) -> bool {
        self.rows == 1 && self.cols == 1
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Shape, Error> {
        let bad = || Error::BadShape(s.to_string());
        let (r, c) = s.trim().split_once(['x', 'X', '×']).ok_or_else(bad)?;
        let rows = r.trim().parse().map_err(|_| bad())?;
        let cols = c.trim().parse().map_err(|_| bad())?;
        Shape::new(rows, cols)
    }
}

/// An element of the universe: a finite set of values or an m×n matrix of
/// values with m·n ≥ 2.
///
/// Cloning is cheap (reference counted). Each node caches its hash, so values
/// can key hash maps without walking the tree.
#[derive(Clone)]
pub struct Value(Arc<Node>);

struct Node {
    hash: u64,
    kind: Kind,
}

#[derive(Hash)]
enum Kind {
    Set(Box<[Value]>),
    Matrix { shape: Shape, entries: Box<[Value]> },
}

/// Borrowed view of a value's top node.
#[derive(Clone, Copy, Debug)]
pub enum View<'a> {
    Set(&'a [Value]),
    Matrix(Shape, &'a [Value]),
}

impl Value {
    fn from_kind(kind: Kind) -> Value {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        Value(Arc::new(Node { hash: h.finish(), kind }))
    }

    /// The empty set.
    pub fn empty() -> Value {
        Value::from_kind(Kind::Set(Box::new([])))
    }

    /// Builds the set of the given elements, sorting and removing duplicates.
    pub fn set<I: IntoIterator<Item = Value>>(elems: I) -> Value {
        let mut v: Vec<Value> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        Value::from_kind(Kind::Set(v.into_boxed_slice()))
    }

    /// Builds a set from elements that are already strictly increasing.
    pub(crate) fn set_sorted(elems: Vec<Value>) -> Value {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Value::from_kind(Kind::Set(elems.into_boxed_slice()))
    }

    pub fn singleton(v: Value) -> Value {
        Value::set_sorted(vec![v])
    }

    /// Builds a `shape` matrix from row-major `entries`. A 1×1 matrix is its
    /// own entry, which covers both `[x] = x` and `[[M]] = M`.
    pub fn matrix<I: IntoIterator<Item = Value>>(shape: Shape, entries: I) -> Result<Value, Error> {
        let mut entries: Vec<Value> = entries.into_iter().collect();
        if entries.len() != shape.len() {
            return Err(Error::Arity { shape, expected: shape.len(), found: entries.len() });
        }
        if shape.is_unit() {
            return Ok(entries.pop().expect("one entry"));
        }
        Ok(Value::from_kind(Kind::Matrix { shape, entries: entries.into_boxed_slice() }))
    }

    pub fn view(&self) -> View<'_> {
        match &self.0.kind {
            Kind::Set(e) => View::Set(e),
            Kind::Matrix { shape, entries } => View::Matrix(*shape, entries),
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self.0.kind, Kind::Set(_))
    }

    pub fn is_matrix(&self) -> bool {
        !self.is_set()
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(&self.0.kind, Kind::Set(e) if e.is_empty())
    }

    /// Elements of a set, or `None` for a matrix.
    pub fn elements(&self) -> Option<&[Value]> {
        match &self.0.kind {
            Kind::Set(e) => Some(e),
            Kind::Matrix { .. } => None,
        }
    }

    pub fn shape(&self) -> Option<Shape> {
        match &self.0.kind {
            Kind::Set(_) => None,
            Kind::Matrix { shape, .. } => Some(*shape),
        }
    }

    pub fn entries(&self) -> Option<&[Value]> {
        match &self.0.kind {
            Kind::Set(_) => None,
            Kind::Matrix { entries, .. } => Some(entries),
        }
    }

    /// `a ∈ self`. Matrices have no members.
    pub fn has_member(&self, a: &Value) -> bool {
        match &self.0.kind {
            Kind::Set(e) => e.binary_search(a).is_ok(),
            Kind::Matrix { .. } => false,
        }
    }

    /// Set-nesting rank: 0 for ∅, one more than the largest element rank for a
    /// set. Matrix nodes add no rank of their own.
    pub fn rank(&self) -> usize {
        match &self.0.kind {
            Kind::Set(e) => e.iter().map(|x| x.rank() + 1).max().unwrap_or(0),
            Kind::Matrix { entries, .. } => entries.iter().map(Value::rank).max().unwrap_or(0),
        }
    }

    /// Matrix-nesting depth: the largest number of matrix nodes on a path
    /// from the root.
    pub fn depth(&self) -> usize {
        match &self.0.kind {
            Kind::Set(e) => e.iter().map(Value::depth).max().unwrap_or(0),
            Kind::Matrix { entries, .. } => 1 + entries.iter().map(Value::depth).max().unwrap_or(0),
        }
    }

    /// True if no matrix node occurs anywhere in the tree.
    pub fn is_pure(&self) -> bool {
        match &self.0.kind {
            Kind::Set(e) => e.iter().all(Value::is_pure),
            Kind::Matrix { .. } => false,
        }
    }

    /// Number of nodes in the tree, shared subtrees counted once per path.
    pub fn size(&self) -> usize {
        match &self.0.kind {
            Kind::Set(e) => 1 + e.iter().map(Value::size).sum::<usize>(),
            Kind::Matrix { entries, .. } => 1 + entries.iter().map(Value::size).sum::<usize>(),
        }
    }
}

/// `a ∈ b`.
pub fn mem(a: &Value, b: &Value) -> bool {
    b.has_member(a)
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Set(a), Kind::Set(b)) => a == b,
            (Kind::Matrix { shape: s, entries: a }, Kind::Matrix { shape: t, entries: b }) => s == t && a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

// Sets before matrices; sets by cardinality then elementwise; matrices by
// shape then entrywise.
impl Ord for Value {
    fn cmp(&self, other: &Value) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Set(a), Kind::Set(b)) => a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())),
            (Kind::Set(_), Kind::Matrix { .. }) => Ordering::Less,
            (Kind::Matrix { .. }, Kind::Set(_)) => Ordering::Greater,
            (Kind::Matrix { shape: s, entries: a }, Kind::Matrix { shape: t, entries: b }) => {
                s.cmp(t).then_with(|| a.iter().cmp(b.iter()))
            }
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Set(e) => {
                f.write_str("{")?;
                for (i, x) in e.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    fmt::Display::fmt(x, f)?;
                }
                f.write_str("}")
            }
            Kind::Matrix { shape, entries } => {
                f.write_str("[")?;
                for (i, x) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(if i % shape.cols() as usize == 0 { ";" } else { "," })?;
                    }
                    fmt::Display::fmt(x, f)?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
