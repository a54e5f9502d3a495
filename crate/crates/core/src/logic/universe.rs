//! Bounded universes: every value reachable from `∅` in a bounded number of
//! set-formation and matrix-formation steps.

use crate::error::Error;
use crate::setops;
use crate::value::{Shape, Value};

pub const DEFAULT_CAP: usize = 20_000;

#[derive(Clone, Debug)]
pub struct Universe {
    rank: usize,
    shapes: Vec<Shape>,
    depth: usize,
    values: Vec<Value>,
}

impl Universe {
    /// Builds the universe in stages. Stage 0 is `{∅}`; stage `i` adds all
    /// subsets of stage `i-1` while `i ≤ rank` and all matrices over stage
    /// `i-1` of the admitted shapes while `i ≤ depth`. Unit shapes add
    /// nothing since a 1×1 matrix is its entry.
    pub fn enumerate(rank: usize, shapes: &[Shape], depth: usize, cap: usize) -> Result<Universe, Error> {
        let mut shapes: Vec<Shape> = shapes.iter().copied().filter(|s| !s.is_unit()).collect();
        shapes.sort();
        shapes.dedup();

        let mut level = vec![Value::empty()];
        for i in 1..=rank.max(depth) {
            let mut next = level.clone();
            let base = Value::set(level.iter().cloned());
            if i <= rank {
                let subsets = u32::try_from(level.len()).ok().and_then(|n| 1usize.checked_shl(n)).unwrap_or(usize::MAX);
                check_cap(cap, next.len().saturating_add(subsets))?;
                next.extend_from_slice(setops::powerset(&base)?.elements().expect("a set"));
            }
            if i <= depth {
                for &shape in &shapes {
                    let count = u32::try_from(shape.len()).map_or(usize::MAX, |n| level.len().saturating_pow(n));
                    check_cap(cap, next.len().saturating_add(count))?;
                    next.extend_from_slice(setops::matrices_over(&base, shape)?.elements().expect("a set"));
                }
            }
            next.sort();
            next.dedup();
            level = next;
        }
        check_cap(cap, level.len())?;
        Ok(Universe { rank, shapes, depth, values: level })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Admitted non-unit shapes, ascending.
    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// All values, in value order. Always contains `∅`.
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.values.binary_search(v).is_ok()
    }
}

fn check_cap(cap: usize, needed: usize) -> Result<(), Error> {
    if needed > cap {
        Err(Error::Limit { cap, needed })
    } else {
        Ok(())
    }
}

/// [`Universe::enumerate`] with the default cap.
pub fn enum_universe(rank: usize, shapes: &[Shape], depth: usize) -> Result<Universe, Error> {
    Universe::enumerate(rank, shapes, depth, DEFAULT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(r: u32, c: u32) -> Shape {
        Shape::new(r, c).unwrap()
    }

    #[test]
    fn pure_sets() {
        assert_eq!(enum_universe(0, &[], 0).unwrap().len(), 1);
        assert_eq!(enum_universe(1, &[], 0).unwrap().len(), 2);
        assert_eq!(enum_universe(2, &[], 0).unwrap().len(), 4);
        assert_eq!(enum_universe(3, &[], 0).unwrap().len(), 16);
    }

    #[test]
    fn small_mixed_universes() {
        assert_eq!(enum_universe(2, &[sh(1, 2)], 1).unwrap().len(), 9);
        assert_eq!(enum_universe(2, &[sh(1, 2), sh(2, 1)], 1).unwrap().len(), 18);
        assert_eq!(enum_universe(2, &[sh(1, 2), sh(2, 1), sh(2, 2)], 1).unwrap().len(), 35);
        // depth alone: ∅ and [∅ ∅]
        assert_eq!(enum_universe(0, &[sh(1, 2)], 1).unwrap().len(), 2);
    }

    #[test]
    fn closed_under_subterms() {
        let u = enum_universe(2, &[sh(1, 2), sh(2, 2)], 2).unwrap();
        for v in u.values() {
            let parts = v.elements().or_else(|| v.entries()).unwrap();
            assert!(parts.iter().all(|p| u.contains(p)), "{v}");
        }
        assert!(u.values().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap() {
        let err = Universe::enumerate(2, &[sh(2, 2)], 2, 50).unwrap_err();
        assert!(matches!(err, Error::Limit { cap: 50, .. }));
        assert!(matches!(enum_universe(5, &[], 0), Err(Error::Limit { .. })));
    }
}
