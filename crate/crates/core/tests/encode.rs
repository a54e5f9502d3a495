mod common;

use common::{e, encode, mat, numeral, pair, set, set_nodes, sh, values};
use proptest::prelude::*;
use setmatrix::encode::{decode_zfm, encode_zfm, function_entries, index_pair, kpair, unpair, vn_ordinal};
use setmatrix::logic::enum_universe;
use setmatrix::setops;
use setmatrix::textio::parse;
use setmatrix::{Error, Shape, Value};

const SHAPES: [(u32, u32); 5] = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)];

fn shapes() -> Vec<Shape> {
    SHAPES.iter().map(|&(r, c)| sh(r, c)).collect()
}

#[test]
fn numerals() {
    assert_eq!(vn_ordinal(1).unwrap(), parse("{{}}").unwrap());
    assert_eq!(vn_ordinal(2).unwrap(), parse("{{},{{}}}").unwrap());
    assert!(setops::is_ordinal(&vn_ordinal(3).unwrap()).unwrap());
    assert!(matches!(vn_ordinal(0), Err(Error::ZeroIndex)));
    for k in 1..6 {
        assert_eq!(vn_ordinal(k).unwrap(), numeral(k));
    }
}

#[test]
fn pairs() {
    assert_eq!(kpair(&e(), &e()), parse("{{{}}}").unwrap());
    assert_eq!(kpair(&e(), &set([e()])), parse("{{{}},{{},{{}}}}").unwrap());
    let u = enum_universe(2, &[], 0).unwrap();
    for a in u.values() {
        for b in u.values() {
            let p = kpair(a, b);
            assert_eq!(unpair(&p), Some((a, b)));
            for c in u.values() {
                for d in u.values() {
                    assert_eq!(p == kpair(c, d), a == c && b == d);
                }
            }
        }
    }
    assert_eq!(index_pair(1, 2).unwrap(), pair(&numeral(1), &numeral(2)));
}

#[test]
fn encoding_examples() {
    assert_eq!(encode_zfm(&e()), e());
    let row = mat(1, 2, [e(), e()]);
    let want = set([pair(&pair(&numeral(1), &numeral(1)), &e()), pair(&pair(&numeral(1), &numeral(2)), &e())]);
    assert_eq!(encode_zfm(&row), want);
    let nested = parse("[[{},{}],{}]").unwrap();
    let want = set([pair(&pair(&numeral(1), &numeral(1)), &want), pair(&pair(&numeral(1), &numeral(2)), &e())]);
    assert_eq!(encode_zfm(&nested), want);
}

#[test]
fn decoding_examples() {
    let row = mat(1, 2, [e(), e()]);
    assert_eq!(decode_zfm(&encode_zfm(&row), &[sh(1, 2)]), row);
    assert_eq!(decode_zfm(&e(), &[sh(1, 2)]), e());
    assert_eq!(decode_zfm(&encode_zfm(&row), &[]), encode_zfm(&row));
    assert_eq!(function_entries(&encode_zfm(&row), sh(1, 2)), Some(vec![e(), e()]));
    assert_eq!(function_entries(&encode_zfm(&row), sh(2, 1)), None);
}

#[test]
fn congruence_over_a_universe() {
    let u = enum_universe(2, &[sh(1, 2), sh(2, 1), sh(2, 2)], 1).unwrap();
    let codes: Vec<Value> = u.values().iter().map(encode_zfm).collect();
    for (a, ca) in u.values().iter().zip(&codes) {
        for (b, cb) in u.values().iter().zip(&codes) {
            if a == b {
                assert_eq!(ca, cb);
            }
        }
    }
}

#[test]
fn a_set_collides_with_a_matrix() {
    let row = mat(1, 2, [e(), e()]);
    let s = encode_zfm(&row);
    assert!(s.is_set());
    assert_ne!(s, row);
    assert_eq!(encode_zfm(&s), encode_zfm(&row));
}

proptest! {
    #[test]
    fn encodings_are_pure(v in values()) {
        let c = encode_zfm(&v);
        prop_assert!(c.is_pure());
        prop_assert_eq!(&c, &encode(&v));
        prop_assert_eq!(encode_zfm(&c), c);
    }

    #[test]
    fn decode_inverts_encode(v in values()) {
        let all = shapes();
        let mut nodes = Vec::new();
        set_nodes(&v, &mut nodes);
        let ambiguous = nodes.iter().any(|s| all.iter().any(|&sh| function_entries(&encode_zfm(s), sh).is_some()));
        prop_assume!(!ambiguous);
        prop_assert_eq!(decode_zfm(&encode_zfm(&v), &all), v);
    }
}
