//! Brute-force reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;

use setmatrix::logic::{Construction, Formula, Model, Sort, Term, Universe};
use setmatrix::{setops, Shape, Value, View};

pub fn sh(r: u32, c: u32) -> Shape {
    Shape::new(r, c).unwrap()
}

pub fn e() -> Value {
    Value::empty()
}

pub fn set(v: impl IntoIterator<Item = Value>) -> Value {
    Value::set(v)
}

pub fn mat(r: u32, c: u32, v: impl IntoIterator<Item = Value>) -> Value {
    Value::matrix(sh(r, c), v).unwrap()
}

/// Small random values: sets and matrices of shapes up to 2×2, nested a
/// few levels.
pub fn values() -> impl Strategy<Value = Value> {
    let shapes = prop::sample::select(vec![sh(1, 1), sh(1, 2), sh(2, 1), sh(2, 2), sh(1, 3)]);
    Just(e()).prop_recursive(4, 24, 4, move |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(set),
            shapes.clone().prop_flat_map(move |s| {
                prop::collection::vec(inner.clone(), s.len()).prop_map(move |es| Value::matrix(s, es).unwrap())
            }),
        ]
    })
}

/// Rebuilds `v` bottom-up through the public constructors.
pub fn rebuild(v: &Value) -> Value {
    match v.view() {
        View::Set(elems) => set(elems.iter().rev().map(rebuild)),
        View::Matrix(shape, entries) => Value::matrix(shape, entries.iter().map(rebuild)).unwrap(),
    }
}

/// Every set node inside `v`, including `v` itself.
pub fn set_nodes(v: &Value, out: &mut Vec<Value>) {
    match v.view() {
        View::Set(elems) => {
            out.push(v.clone());
            elems.iter().for_each(|x| set_nodes(x, out));
        }
        View::Matrix(_, entries) => entries.iter().for_each(|x| set_nodes(x, out)),
    }
}

/// `{{a}, {a, b}}`, spelled out.
pub fn pair(a: &Value, b: &Value) -> Value {
    set([set([a.clone()]), set([a.clone(), b.clone()])])
}

/// von Neumann `k` by the recursion `k+1 = k ∪ {k}`.
pub fn numeral(k: usize) -> Value {
    let mut n = e();
    for _ in 0..k {
        let mut elems = n.elements().unwrap().to_vec();
        elems.push(n.clone());
        n = set(elems);
    }
    n
}

/// Reference encoding, written independently of the library's.
pub fn encode(v: &Value) -> Value {
    match v.view() {
        View::Set(elems) => set(elems.iter().map(encode)),
        View::Matrix(shape, entries) => {
            let cols = shape.cols() as usize;
            set(entries.iter().enumerate().map(|(k, x)| {
                pair(&pair(&numeral(k / cols + 1), &numeral(k % cols + 1)), &encode(x))
            }))
        }
    }
}

/// Every subset, by include/exclude recursion.
pub fn subsets(elems: &[Value]) -> BTreeSet<Value> {
    match elems.split_first() {
        None => [e()].into_iter().collect(),
        Some((first, rest)) => {
            let mut out = BTreeSet::new();
            for s in subsets(rest) {
                let mut with = s.elements().unwrap().to_vec();
                with.push(first.clone());
                out.insert(set(with));
                out.insert(s);
            }
            out
        }
    }
}

/// Every `shape` matrix over `elems`, by recursion on the entry count.
pub fn matrices(elems: &[Value], shape: Shape) -> BTreeSet<Value> {
    fn rows(elems: &[Value], n: usize) -> Vec<Vec<Value>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for prefix in rows(elems, n - 1) {
            for x in elems {
                let mut p = prefix.clone();
                p.push(x.clone());
                out.push(p);
            }
        }
        out
    }
    rows(elems, shape.len()).into_iter().map(|es| Value::matrix(shape, es).unwrap()).collect()
}

/// Plain Tarskian evaluation: quantifiers loop over the whole domain and
/// atoms compare values (native) or reference encodings (ZFM image).
pub struct Oracle {
    pub model: Model,
    pub domain: Vec<Value>,
    infinity_len: usize,
}

impl Oracle {
    pub fn new(u: &Universe, model: Model) -> Oracle {
        let domain: Vec<Value> = match model {
            Model::Native => u.values().to_vec(),
            Model::ZfmImage => {
                let mut out = BTreeSet::new();
                fn close(v: Value, out: &mut BTreeSet<Value>) {
                    if out.insert(v.clone()) {
                        for x in v.elements().unwrap() {
                            close(x.clone(), out);
                        }
                    }
                }
                for v in u.values() {
                    close(encode(v), &mut out);
                }
                out.into_iter().collect()
            }
        };
        let infinity_len = domain.iter().map(Value::rank).max().unwrap_or(0) + 2;
        Oracle { model, domain, infinity_len }
    }

    fn atom(&self, v: &Value) -> Value {
        match self.model {
            Model::Native => v.clone(),
            Model::ZfmImage => encode(v),
        }
    }

    fn range(&self, sort: Sort) -> Vec<Value> {
        self.domain.iter().filter(|v| sort == Sort::Matrix || self.model == Model::ZfmImage || v.is_set()).cloned().collect()
    }

    pub fn term(&self, t: &Term, env: &[(String, Value)]) -> Value {
        match t {
            Term::SetVar(n) | Term::MatVar(n) => {
                env.iter().rev().find(|(m, _)| m == n).unwrap_or_else(|| panic!("unbound {n}")).1.clone()
            }
            Term::Empty => e(),
            Term::Singleton(t) => set([self.term(t, env)]),
            Term::Matrix(shape, ts) => Value::matrix(*shape, ts.iter().map(|t| self.term(t, env))).unwrap(),
        }
    }

    pub fn construct(&self, c: &Construction, env: &[(String, Value)]) -> Value {
        let t = |t: &Term| self.atom(&self.term(t, env));
        let built = match c {
            Construction::Empty => e(),
            Construction::Matrix(shape, ts) => Value::matrix(*shape, ts.iter().map(t)).unwrap(),
            Construction::Separation(x, phi) => {
                let p = phi.predicate();
                set(t(x).elements().unwrap().iter().filter(|a| p.test(a)).cloned())
            }
            Construction::Pair(a, b) => set([t(a), t(b)]),
            Construction::Union(x) => set(t(x).elements().unwrap().iter().flat_map(|z| z.elements().unwrap().to_vec())),
            Construction::Powerset(x) => set(subsets(t(x).elements().unwrap())),
            Construction::InfinityStage => setops::infinity_stage(self.infinity_len),
            Construction::Replacement(x, m) => {
                let f = m.total_map();
                set(t(x).elements().unwrap().iter().map(|a| f.apply(a)))
            }
            Construction::MatricesOver(x, shape) => {
                if shape.is_unit() {
                    t(x)
                } else {
                    set(matrices(t(x).elements().unwrap(), *shape))
                }
            }
        };
        self.atom(&built)
    }

    pub fn eval(&self, f: &Formula, env: &mut Vec<(String, Value)>) -> bool {
        match f {
            Formula::Mem(a, b) => {
                let (a, b) = (self.atom(&self.term(a, env)), self.atom(&self.term(b, env)));
                b.elements().is_some_and(|es| es.contains(&a))
            }
            Formula::Equal(a, b) => self.atom(&self.term(a, env)) == self.atom(&self.term(b, env)),
            Formula::Not(g) => !self.eval(g, env),
            Formula::And(fs) => fs.iter().all(|g| self.eval(g, env)),
            Formula::Or(fs) => fs.iter().any(|g| self.eval(g, env)),
            Formula::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Formula::Iff(a, b) => self.eval(a, env) == self.eval(b, env),
            Formula::Forall(sort, v, body) => self.range(*sort).into_iter().all(|x| self.with(env, v, x, body)),
            Formula::Exists(sort, v, body) => self.range(*sort).into_iter().any(|x| self.with(env, v, x, body)),
            Formula::Witnessed { var, construction, body, .. } => {
                let w = self.construct(construction, env);
                self.with(env, var, w, body)
            }
        }
    }

    fn with(&self, env: &mut Vec<(String, Value)>, v: &str, x: Value, body: &Formula) -> bool {
        env.push((v.to_string(), x));
        let r = self.eval(body, env);
        env.pop();
        r
    }

    /// First assignment, in domain order, to the leading universal
    /// quantifiers of `f` under which the body fails.
    pub fn first_counterexample(&self, f: &Formula) -> Option<Vec<(String, Value)>> {
        let mut vars = Vec::new();
        let mut body = f;
        while let Formula::Forall(sort, v, b) = body {
            vars.push((*sort, v.clone()));
            body = b;
        }
        let mut env = Vec::new();
        self.search(&vars, body, &mut env).then_some(env)
    }

    fn search(&self, vars: &[(Sort, String)], body: &Formula, env: &mut Vec<(String, Value)>) -> bool {
        let Some(((sort, v), rest)) = vars.split_first() else { return !self.eval(body, env) };
        for x in self.range(*sort) {
            env.push((v.clone(), x));
            if self.search(rest, body, env) {
                return true;
            }
            env.pop();
        }
        false
    }
}
