//! Two-sorted first-order syntax: Roman (set) variables and Greek (matrix)
//! variables, `∈`, `=`, connectives and quantifiers.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::logic::library::{ReplacementMap, SeparationPhi};
use crate::value::Shape;

/// Variable sort. Set variables range over sets only; matrix variables range
/// over every value, sets included, because a set is its own 1×1 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Set,
    Matrix,
}

impl Sort {
    pub fn name(self) -> &'static str {
        match self {
            Sort::Set => "set",
            Sort::Matrix => "matrix",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    SetVar(String),
    MatVar(String),
    Empty,
    /// `f_{m×n}(t₁₁, …, t_mn)`, row-major.
    Matrix(Shape, Vec<Term>),
    /// `{t}`.
    Singleton(Box<Term>),
}

impl Term {
    pub fn set_var(name: impl Into<String>) -> Term {
        Term::SetVar(name.into())
    }

    pub fn mat_var(name: impl Into<String>) -> Term {
        Term::MatVar(name.into())
    }

    pub fn matrix(shape: Shape, subterms: Vec<Term>) -> Result<Term, Error> {
        if subterms.len() != shape.len() {
            return Err(Error::Arity { shape, expected: shape.len(), found: subterms.len() });
        }
        Ok(Term::Matrix(shape, subterms))
    }

    pub fn singleton(t: Term) -> Term {
        Term::Singleton(Box::new(t))
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::SetVar(v) | Term::MatVar(v) => {
                out.insert(v.clone());
            }
            Term::Empty => {}
            Term::Matrix(_, ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Term::Singleton(t) => t.collect_vars(out),
        }
    }
}

/// How an existential witness is built instead of searched for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Empty,
    Matrix(Shape, Vec<Term>),
    Separation(Term, SeparationPhi),
    Pair(Term, Term),
    Union(Term),
    Powerset(Term),
    /// Finite stage of the infinity witness, long enough to cover the
    /// quantification domain.
    InfinityStage,
    Replacement(Term, ReplacementMap),
    MatricesOver(Term, Shape),
}

impl Construction {
    pub(crate) fn terms(&self) -> Vec<&Term> {
        match self {
            Construction::Empty | Construction::InfinityStage => vec![],
            Construction::Matrix(_, ts) => ts.iter().collect(),
            Construction::Pair(a, b) => vec![a, b],
            Construction::Separation(t, _)
            | Construction::Union(t)
            | Construction::Powerset(t)
            | Construction::Replacement(t, _)
            | Construction::MatricesOver(t, _) => vec![t],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Mem(Term, Term),
    Equal(Term, Term),
    Not(Box<Formula>),
    /// Empty conjunction is true.
    And(Vec<Formula>),
    /// Empty disjunction is false.
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Sort, String, Box<Formula>),
    Exists(Sort, String, Box<Formula>),
    /// `∃var body`, discharged by building the witness with `construction`
    /// and evaluating `body` with `var` bound to it.
    Witnessed { sort: Sort, var: String, construction: Construction, body: Box<Formula> },
}

impl Formula {
    pub fn mem(a: Term, b: Term) -> Formula {
        Formula::Mem(a, b)
    }

    pub fn equal(a: Term, b: Term) -> Formula {
        Formula::Equal(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall_set(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(Sort::Set, v.into(), Box::new(body))
    }

    pub fn forall_mat(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(Sort::Matrix, v.into(), Box::new(body))
    }

    pub fn exists_set(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(Sort::Set, v.into(), Box::new(body))
    }

    pub fn exists_mat(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(Sort::Matrix, v.into(), Box::new(body))
    }

    /// Universal closure over `vars`, outermost first.
    pub fn forall_all(vars: &[(Sort, String)], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, (s, v)| Formula::Forall(*s, v.clone(), Box::new(acc)))
    }

    pub fn witnessed(sort: Sort, var: impl Into<String>, construction: Construction, body: Formula) -> Formula {
        Formula::Witnessed { sort, var: var.into(), construction, body: Box::new(body) }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Mem(a, b) | Formula::Equal(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.collect_free(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Forall(_, v, body) | Formula::Exists(_, v, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
            Formula::Witnessed { var, construction, body, .. } => {
                construction.terms().iter().for_each(|t| t.collect_vars(out));
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(var);
                out.extend(inner);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces every witnessed existential by a plain (searched) one.
    pub fn erase_witnesses(&self) -> Formula {
        self.map_children(&|f| match f {
            Formula::Witnessed { sort, var, body, .. } => Some(Formula::Exists(*sort, var.clone(), Box::new(body.erase_witnesses()))),
            _ => None,
        })
    }

    /// Drops the binders of the named variables, leaving them free. Used to
    /// evaluate a formula body under a pinned witness assignment.
    pub fn unbind(&self, names: &BTreeSet<String>) -> Formula {
        self.map_children(&|f| match f {
            Formula::Forall(_, v, body) | Formula::Exists(_, v, body) | Formula::Witnessed { var: v, body, .. }
                if names.contains(v) =>
            {
                Some(body.unbind(names))
            }
            _ => None,
        })
    }

    /// Turns the free occurrences of the matrix variable `var` into set
    /// variable occurrences.
    pub fn with_set_var(&self, var: &str) -> Formula {
        fn term(t: &Term, var: &str) -> Term {
            match t {
                Term::MatVar(v) if v == var => Term::SetVar(v.clone()),
                Term::Matrix(s, ts) => Term::Matrix(*s, ts.iter().map(|t| term(t, var)).collect()),
                Term::Singleton(t) => Term::singleton(term(t, var)),
                other => other.clone(),
            }
        }
        fn cons(c: &Construction, var: &str) -> Construction {
            match c {
                Construction::Matrix(s, ts) => Construction::Matrix(*s, ts.iter().map(|t| term(t, var)).collect()),
                Construction::Separation(t, p) => Construction::Separation(term(t, var), *p),
                Construction::Pair(a, b) => Construction::Pair(term(a, var), term(b, var)),
                Construction::Union(t) => Construction::Union(term(t, var)),
                Construction::Powerset(t) => Construction::Powerset(term(t, var)),
                Construction::Replacement(t, m) => Construction::Replacement(term(t, var), *m),
                Construction::MatricesOver(t, s) => Construction::MatricesOver(term(t, var), *s),
                Construction::Empty | Construction::InfinityStage => c.clone(),
            }
        }
        self.map_children(&|f| match f {
            Formula::Mem(a, b) => Some(Formula::Mem(term(a, var), term(b, var))),
            Formula::Equal(a, b) => Some(Formula::Equal(term(a, var), term(b, var))),
            Formula::Forall(_, v, _) | Formula::Exists(_, v, _) if v == var => Some(f.clone()),
            Formula::Witnessed { sort, var: v, construction, body } => Some(Formula::Witnessed {
                sort: *sort,
                var: v.clone(),
                construction: cons(construction, var),
                body: Box::new(if v == var { (**body).clone() } else { body.with_set_var(var) }),
            }),
            _ => None,
        })
    }

    /// Rebuilds the tree bottom-up; `rewrite` may replace a node outright.
    fn map_children(&self, rewrite: &dyn Fn(&Formula) -> Option<Formula>) -> Formula {
        if let Some(f) = rewrite(self) {
            return f;
        }
        let rec = |f: &Formula| Box::new(f.map_children(rewrite));
        match self {
            Formula::Mem(..) | Formula::Equal(..) => self.clone(),
            Formula::Not(f) => Formula::Not(rec(f)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.map_children(rewrite)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.map_children(rewrite)).collect()),
            Formula::Implies(a, b) => Formula::Implies(rec(a), rec(b)),
            Formula::Iff(a, b) => Formula::Iff(rec(a), rec(b)),
            Formula::Forall(s, v, b) => Formula::Forall(*s, v.clone(), rec(b)),
            Formula::Exists(s, v, b) => Formula::Exists(*s, v.clone(), rec(b)),
            Formula::Witnessed { sort, var, construction, body } => Formula::Witnessed {
                sort: *sort,
                var: var.clone(),
                construction: construction.clone(),
                body: rec(body),
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::SetVar(v) | Term::MatVar(v) => f.write_str(v),
            Term::Empty => f.write_str("∅"),
            Term::Singleton(t) => write!(f, "{{{t}}}"),
            Term::Matrix(shape, ts) => {
                f.write_str("[")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(if i % shape.cols() as usize == 0 { "; " } else { " " })?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Empty => f.write_str("∅"),
            Construction::Matrix(shape, ts) => write!(f, "{}", Term::Matrix(*shape, ts.clone())),
            Construction::Separation(t, phi) => write!(f, "separation({t}, {})", phi.name()),
            Construction::Pair(a, b) => write!(f, "pair({a}, {b})"),
            Construction::Union(t) => write!(f, "union({t})"),
            Construction::Powerset(t) => write!(f, "powerset({t})"),
            Construction::InfinityStage => f.write_str("infinity-stage"),
            Construction::Replacement(t, m) => write!(f, "replacement({t}, {})", m.name()),
            Construction::MatricesOver(t, shape) => write!(f, "matrices-over({t}, {shape})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, fs: &[Formula], op: &str, unit: &str) -> fmt::Result {
            if fs.is_empty() {
                return f.write_str(unit);
            }
            f.write_str("(")?;
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        }
        match self {
            Formula::Mem(a, b) => write!(f, "{a} ∈ {b}"),
            Formula::Equal(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(x) => match x.as_ref() {
                Formula::Mem(a, b) => write!(f, "{a} ∉ {b}"),
                Formula::Equal(a, b) => write!(f, "{a} ≠ {b}"),
                _ => write!(f, "¬{x}"),
            },
            Formula::And(fs) => join(f, fs, "∧", "⊤"),
            Formula::Or(fs) => join(f, fs, "∨", "⊥"),
            Formula::Implies(a, b) => write!(f, "({a} ⇒ {b})"),
            Formula::Iff(a, b) => write!(f, "({a} ⇔ {b})"),
            Formula::Forall(_, v, b) => write!(f, "∀{v} {b}"),
            Formula::Exists(_, v, b) => write!(f, "∃{v} {b}"),
            Formula::Witnessed { var, construction, body, .. } => write!(f, "∃{var}:={construction} {body}"),
        }
    }
}
