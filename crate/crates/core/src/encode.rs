//! Encoding of set matrices as pure hereditarily finite sets.
//!
//! An m×n matrix becomes the function on `{1..m} × {1..n}` sending `(i, j)`
//! to the encoded entry, written as a set of Kuratowski pairs whose first
//! components are pairs of von Neumann numerals. A 1×1 matrix needs no rule:
//! canonical values never contain one.

use crate::error::Error;
use crate::value::{Shape, View};
use crate::Value;

/// The von Neumann numeral `k = {0, …, k-1}`, for `k ≥ 1`.
pub fn vn_ordinal(k: usize) -> Result<Value, Error> {
    if k == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(numeral(k))
}

fn numeral(k: usize) -> Value {
    let mut elems: Vec<Value> = Vec::with_capacity(k);
    for _ in 0..k {
        let next = Value::set_sorted(elems.clone());
        elems.push(next);
    }
    Value::set_sorted(elems)
}

/// Kuratowski pair `{{a}, {a, b}}`.
pub fn kpair(a: &Value, b: &Value) -> Value {
    Value::set([Value::singleton(a.clone()), Value::set([a.clone(), b.clone()])])
}

/// Splits a Kuratowski pair back into its components.
pub fn unpair(p: &Value) -> Option<(&Value, &Value)> {
    match p.elements()? {
        [single] => match single.elements()? {
            [a] => Some((a, a)),
            _ => None,
        },
        // the singleton sorts first: it is the shorter set
        [single, double] => {
            let [a] = single.elements()? else { return None };
            match double.elements()? {
                [x, y] if x == a => Some((a, y)),
                [x, y] if y == a => Some((a, x)),
                _ => None,
            }
        }
        _ => None,
    }
}

/// The index pair `(i, j)` with 1-based numerals.
pub fn index_pair(i: usize, j: usize) -> Result<Value, Error> {
    Ok(kpair(&vn_ordinal(i)?, &vn_ordinal(j)?))
}

/// Function-set encoding of a matrix whose entries are already encoded.
pub fn function_set(shape: Shape, encoded: &[Value]) -> Result<Value, Error> {
    if encoded.len() != shape.len() {
        return Err(Error::Arity { shape, expected: shape.len(), found: encoded.len() });
    }
    if shape.is_unit() {
        return Ok(encoded[0].clone());
    }
    let cols = shape.cols() as usize;
    let pairs = encoded.iter().enumerate().map(|(k, e)| {
        let idx = kpair(&numeral(k / cols + 1), &numeral(k % cols + 1));
        kpair(&idx, e)
    });
    Ok(Value::set(pairs))
}

/// Maps any value to a pure set. Sets map elementwise; matrices become
/// function sets.
pub fn encode_zfm(v: &Value) -> Value {
    match v.view() {
        View::Set(elems) => Value::set(elems.iter().map(encode_zfm)),
        View::Matrix(shape, entries) => {
            let enc: Vec<Value> = entries.iter().map(encode_zfm).collect();
            function_set(shape, &enc).expect("entries match shape")
        }
    }
}

fn numeral_index(v: &Value) -> Option<usize> {
    let k = v.elements()?.len();
    (k >= 1 && *v == numeral(k)).then_some(k)
}

/// If `s` is exactly the function set of some `shape` matrix, returns its
/// (still encoded) entries in row-major order.
pub fn function_entries(s: &Value, shape: Shape) -> Option<Vec<Value>> {
    let elems = s.elements()?;
    if shape.is_unit() || elems.len() != shape.len() {
        return None;
    }
    let cols = shape.cols() as usize;
    let mut out: Vec<Option<Value>> = vec![None; shape.len()];
    for p in elems {
        let (idx, entry) = unpair(p)?;
        let (i, j) = unpair(idx)?;
        let (i, j) = (numeral_index(i)?, numeral_index(j)?);
        if i > shape.rows() as usize || j > cols {
            return None;
        }
        let slot = &mut out[(i - 1) * cols + (j - 1)];
        if slot.is_some() {
            return None;
        }
        *slot = Some(entry.clone());
    }
    out.into_iter().collect()
}

/// Partial inverse of [`encode_zfm`]. A set that is the function set of a
/// matrix with a shape in `shapes` decodes to that matrix, trying shapes in
/// ascending order; anything else decodes elementwise. Unit shapes are
/// ignored since no function set encodes a 1×1 matrix.
pub fn decode_zfm(s: &Value, shapes: &[Shape]) -> Value {
    let mut order: Vec<Shape> = shapes.iter().copied().filter(|s| !s.is_unit()).collect();
    order.sort();
    order.dedup();
    decode_with(s, &order)
}

fn decode_with(s: &Value, shapes: &[Shape]) -> Value {
    match s.view() {
        View::Set(elems) => {
            for &shape in shapes {
                if let Some(entries) = function_entries(s, shape) {
                    let decoded = entries.iter().map(|e| decode_with(e, shapes));
                    return Value::matrix(shape, decoded).expect("entry count matches shape");
                }
            }
            Value::set(elems.iter().map(|e| decode_with(e, shapes)))
        }
        View::Matrix(shape, entries) => {
            Value::matrix(shape, entries.iter().map(|e| decode_with(e, shapes))).expect("same shape")
        }
    }
}
