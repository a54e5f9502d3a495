mod common;

use std::cmp::Ordering;

use common::{e, mat, rebuild, set, sh, values};
use proptest::prelude::*;
use setmatrix::logic::enum_universe;
use setmatrix::{mem, Error, Shape, Value};

#[test]
fn constructor_examples() {
    assert_eq!(set([]), e());
    assert_eq!(set([e(), e()]), set([e()]));
    assert_eq!(set([set([e()]), e()]).to_string(), "{{},{{}}}");
    assert_eq!(Value::matrix(sh(1, 1), [set([e()])]).unwrap(), set([e()]));
    let row = mat(1, 2, [e(), e()]);
    assert_eq!(Value::matrix(sh(1, 1), [row.clone()]).unwrap(), row);
    let col = mat(2, 1, [e(), set([e()])]);
    assert_eq!(col.shape(), Some(sh(2, 1)));
}

#[test]
fn constructor_errors() {
    assert!(matches!(Value::matrix(sh(1, 2), [e()]), Err(Error::Arity { .. })));
    assert!(matches!(Shape::new(0, 2), Err(Error::ZeroShape { .. })));
    assert!(matches!(Shape::new(3, 0), Err(Error::ZeroShape { .. })));
}

#[test]
fn eq_and_mem_examples() {
    let row = mat(1, 2, [e(), e()]);
    let col = mat(2, 1, [e(), e()]);
    assert_ne!(row, col);
    assert_ne!(e(), row);
    assert_eq!(row, mat(1, 2, [e(), e()]));
    assert!(!mem(&e(), &row));
    assert!(mem(&e(), &set([e()])));
    assert!(mem(&row, &set([row.clone()])));
    assert!(e().is_set());
    assert!(!row.is_set());
    assert!(Value::matrix(sh(1, 1), [e()]).unwrap().is_set());
}

#[test]
fn division_and_epsilon_over_a_universe() {
    let u = enum_universe(2, &[sh(1, 2), sh(2, 1), sh(2, 2)], 1).unwrap();
    for a in u.values() {
        for b in u.values() {
            if a.is_set() && b.is_matrix() {
                assert_ne!(a, b);
            }
            if a.is_matrix() && b.is_matrix() && a.shape() != b.shape() {
                assert_ne!(a, b);
            }
            if b.is_matrix() {
                assert!(!mem(a, b));
            }
        }
    }
}

fn no_unit_nodes(v: &Value) -> bool {
    match (v.shape(), v.elements(), v.entries()) {
        (Some(s), _, Some(es)) => !s.is_unit() && es.iter().all(no_unit_nodes),
        (None, Some(es), _) => es.windows(2).all(|w| w[0] < w[1]) && es.iter().all(no_unit_nodes),
        _ => false,
    }
}

proptest! {
    #[test]
    fn canonical_form(v in values()) {
        prop_assert!(no_unit_nodes(&v));
        prop_assert_eq!(rebuild(&v), v);
    }

    #[test]
    fn eq_is_an_equivalence(a in values(), b in values(), c in values()) {
        prop_assert_eq!(&a, &a);
        prop_assert_eq!(a == b, b == a);
        if a == b && b == c {
            prop_assert_eq!(&a, &c);
        }
    }

    #[test]
    fn order_agrees_with_eq(a in values(), b in values(), c in values()) {
        prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if a < b && b < c {
            prop_assert!(a < c);
        }
        if a.is_set() && b.is_matrix() {
            prop_assert!(a < b);
        }
    }

    #[test]
    fn matrix_extensionality(es in prop::collection::vec(values(), 4), fs in prop::collection::vec(values(), 4)) {
        let a = Value::matrix(sh(2, 2), es.clone()).unwrap();
        let b = Value::matrix(sh(2, 2), fs.clone()).unwrap();
        prop_assert_eq!(a == b, es == fs);
    }
}
