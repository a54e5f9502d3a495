//! Constructive set operations in the presence of matrix urelements, and the
//! transitivity and ordinal predicates.
//!
//! Operations whose input must be a set return [`Error::NotASet`] when given
//! a matrix.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::value::{Shape, Value};

/// A named boolean test on values, used as the filter of [`separation`].
#[derive(Clone)]
pub struct Predicate {
    name: String,
    test: Arc<dyn Fn(&Value) -> bool + Send + Sync>,
}

impl Predicate {
    pub fn new(name: impl Into<String>, test: impl Fn(&Value) -> bool + Send + Sync + 'static) -> Predicate {
        Predicate { name: name.into(), test: Arc::new(test) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn test(&self, v: &Value) -> bool {
        (self.test)(v)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.name)
    }
}

/// A named total function on values, used by [`replacement`]. Supplying a
/// function rather than a relation makes the unique-existence premise of
/// replacement hold by construction.
#[derive(Clone)]
pub struct TotalMap {
    name: String,
    apply: Arc<dyn Fn(&Value) -> Value + Send + Sync>,
}

impl TotalMap {
    pub fn new(name: impl Into<String>, apply: impl Fn(&Value) -> Value + Send + Sync + 'static) -> TotalMap {
        TotalMap { name: name.into(), apply: Arc::new(apply) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, v: &Value) -> Value {
        (self.apply)(v)
    }
}

impl fmt::Debug for TotalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotalMap({})", self.name)
    }
}

fn elements(x: &Value) -> Result<&[Value], Error> {
    x.elements().ok_or_else(|| Error::NotASet(x.clone()))
}

pub fn empty() -> Value {
    Value::empty()
}

/// `{α ∈ x | p(α)}`.
pub fn separation(x: &Value, p: &Predicate) -> Result<Value, Error> {
    let kept = elements(x)?.iter().filter(|a| p.test(a)).cloned().collect();
    Ok(Value::set_sorted(kept))
}

/// `{a, b}`; a singleton when `a == b`.
pub fn pair_set(a: &Value, b: &Value) -> Value {
    Value::set([a.clone(), b.clone()])
}

/// `⋃x`. Every element of `x` must be a set.
pub fn union(x: &Value) -> Result<Value, Error> {
    let mut out = Vec::new();
    for z in elements(x)? {
        let inner = z.elements().ok_or_else(|| Error::GuardViolation(z.clone()))?;
        out.extend_from_slice(inner);
    }
    Ok(Value::set(out))
}

/// All subsets of `x`. Matrix elements of `x` may occur inside the subsets.
pub fn powerset(x: &Value) -> Result<Value, Error> {
    let elems = elements(x)?;
    if elems.len() >= usize::BITS as usize {
        // 2^64 subsets cannot be materialized anyway.
        return Err(Error::Limit { cap: usize::MAX, needed: usize::MAX });
    }
    let subsets = (0..1usize << elems.len()).map(|mask| {
        let picked = elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone());
        Value::set_sorted(picked.collect())
    });
    Ok(Value::set(subsets))
}

/// The first `k` Zermelo numerals `{∅, {∅}, {{∅}}, …}`, a finite stage of
/// the infinity witness under the successor `y ↦ {y}`.
pub fn infinity_stage(k: usize) -> Value {
    let mut stages = Vec::with_capacity(k);
    let mut cur = Value::empty();
    for _ in 0..k {
        let next = Value::singleton(cur.clone());
        stages.push(cur);
        cur = next;
    }
    Value::set(stages)
}

/// `{f(α) | α ∈ x}`.
pub fn replacement(x: &Value, f: &TotalMap) -> Result<Value, Error> {
    Ok(Value::set(elements(x)?.iter().map(|a| f.apply(a))))
}

/// All `shape` matrices with entries drawn from `x`. For 1×1 this is `x`.
pub fn matrices_over(x: &Value, shape: Shape) -> Result<Value, Error> {
    let elems = elements(x)?;
    if shape.is_unit() {
        return Ok(x.clone());
    }
    let n = shape.len();
    if elems.is_empty() {
        return Ok(Value::empty());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let entries = idx.iter().map(|&i| elems[i].clone());
        out.push(Value::matrix(shape, entries).expect("arity matches shape"));
        // odometer, last entry fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(Value::set(out));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Every member of a member of `x` is a member of `x`.
pub fn is_transitive_i(x: &Value) -> Result<bool, Error> {
    let elems = elements(x)?;
    Ok(elems.iter().all(|a| a.elements().unwrap_or(&[]).iter().all(|b| x.has_member(b))))
}

/// Every member of `x` is a set and a subset of `x`.
pub fn is_transitive_ii(x: &Value) -> Result<bool, Error> {
    let elems = elements(x)?;
    Ok(elems.iter().all(|a| match a.elements() {
        Some(inner) => inner.iter().all(|b| x.has_member(b)),
        None => false,
    }))
}

/// Every member of `x` is ∅ or has a member, and every member of a member of
/// `x` is a member of `x`.
pub fn is_transitive_iii(x: &Value) -> Result<bool, Error> {
    let elems = elements(x)?;
    let inhabited_or_empty = elems.iter().all(|a| a.is_empty_set() || a.elements().is_some_and(|e| !e.is_empty()));
    Ok(inhabited_or_empty && is_transitive_i(x)?)
}

/// A transitive set (in the subset sense) strictly totally ordered by `∈`.
/// On finite sets a strict total order is a well-order.
pub fn is_ordinal(x: &Value) -> Result<bool, Error> {
    if !is_transitive_ii(x)? {
        return Ok(false);
    }
    let elems = elements(x)?;
    for a in elems {
        if a.has_member(a) {
            return Ok(false);
        }
        for b in elems {
            if a != b && !a.has_member(b) && !b.has_member(a) {
                return Ok(false);
            }
            if !b.has_member(a) {
                continue;
            }
            for c in elems {
                if c.has_member(b) && !c.has_member(a) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> Value {
        Value::empty()
    }
    fn s(v: impl IntoIterator<Item = Value>) -> Value {
        Value::set(v)
    }
    fn row(a: Value, b: Value) -> Value {
        Value::matrix(Shape::new(1, 2).unwrap(), [a, b]).unwrap()
    }
    fn col(a: Value, b: Value) -> Value {
        Value::matrix(Shape::new(2, 1).unwrap(), [a, b]).unwrap()
    }
    fn one() -> Value {
        s([e()])
    }
    fn two() -> Value {
        s([e(), one()])
    }
    // {[∅ ∅], {[∅ ∅]}}
    fn weird() -> Value {
        let m = row(e(), e());
        s([m.clone(), s([m])])
    }

    #[test]
    fn empty_has_no_members() {
        assert_eq!(empty(), s([]));
        assert!(!empty().has_member(&row(e(), e())));
    }

    #[test]
    fn separation_filters() {
        let is_set = Predicate::new("is-set", Value::is_set);
        let is_empty = Predicate::new("is-empty", Value::is_empty_set);
        assert_eq!(separation(&s([e(), row(e(), e())]), &is_set).unwrap(), s([e()]));
        assert_eq!(separation(&e(), &is_set).unwrap(), e());
        assert_eq!(separation(&two(), &is_empty).unwrap(), s([e()]));
        assert!(matches!(separation(&row(e(), e()), &is_set), Err(Error::NotASet(_))));
    }

    #[test]
    fn pairing() {
        assert_eq!(pair_set(&e(), &row(e(), e())), s([e(), row(e(), e())]));
        assert_eq!(pair_set(&e(), &e()), one());
        assert_eq!(pair_set(&row(e(), e()), &col(e(), e())).elements().unwrap().len(), 2);
    }

    #[test]
    fn union_and_guard() {
        let x = s([one(), s([one()])]);
        assert_eq!(union(&x).unwrap(), two());
        let m = row(e(), e());
        assert_eq!(union(&s([m.clone()])), Err(Error::GuardViolation(m)));
        assert_eq!(union(&e()).unwrap(), e());
    }

    #[test]
    fn powersets() {
        assert_eq!(powerset(&e()).unwrap(), one());
        let m = row(e(), e());
        assert_eq!(powerset(&s([m.clone()])).unwrap(), s([e(), s([m])]));
        assert_eq!(powerset(&two()).unwrap().elements().unwrap().len(), 4);
    }

    #[test]
    fn infinity_stages() {
        assert_eq!(infinity_stage(0), e());
        assert_eq!(infinity_stage(1), one());
        assert_eq!(infinity_stage(3), s([e(), one(), s([one()])]));
    }

    #[test]
    fn replacement_images() {
        let wrap = TotalMap::new("wrap-1x2", |a| row(a.clone(), a.clone()));
        let to_empty = TotalMap::new("const-empty", |_| e());
        assert_eq!(replacement(&two(), &wrap).unwrap(), s([row(e(), e()), row(one(), one())]));
        assert_eq!(replacement(&e(), &wrap).unwrap(), e());
        assert_eq!(replacement(&two(), &to_empty).unwrap(), one());
    }

    #[test]
    fn matrices_over_sets() {
        let sh = Shape::new(1, 2).unwrap();
        assert_eq!(matrices_over(&two(), sh).unwrap().elements().unwrap().len(), 4);
        let x = s([e(), row(e(), e())]);
        assert_eq!(matrices_over(&x, Shape::new(1, 1).unwrap()).unwrap(), x);
        assert_eq!(matrices_over(&e(), Shape::new(2, 2).unwrap()).unwrap(), e());
    }

    #[test]
    fn transitivity_definitions_on_the_weird_set() {
        assert!(is_transitive_i(&weird()).unwrap());
        assert!(!is_transitive_ii(&weird()).unwrap());
        assert!(!is_transitive_iii(&weird()).unwrap());
        assert!(!is_ordinal(&weird()).unwrap());
    }

    #[test]
    fn transitivity_basics() {
        assert!(!is_transitive_i(&s([one()])).unwrap());
        assert!(is_transitive_i(&e()).unwrap());
        assert!(is_transitive_ii(&two()).unwrap());
        assert!(is_transitive_ii(&e()).unwrap());
        assert!(is_transitive_iii(&two()).unwrap());
        assert!(is_transitive_iii(&e()).unwrap());
        assert!(matches!(is_transitive_i(&row(e(), e())), Err(Error::NotASet(_))));
    }

    #[test]
    fn ordinals() {
        assert!(is_ordinal(&two()).unwrap());
        assert!(is_ordinal(&e()).unwrap());
        assert!(!is_ordinal(&s([one()])).unwrap());
        // transitive, but ∅ and {{∅}} are ∈-incomparable
        let z = s([e(), one(), s([one()])]);
        assert!(!is_ordinal(&z).unwrap());
    }
}
