//! Finite libraries of separation predicates and replacement maps. Each entry
//! has a closure form (for the constructions) and a formula or term form (for
//! the schema bodies), and the two agree on every model.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::logic::formula::{Formula, Term};
use crate::setops::{Predicate, TotalMap};
use crate::value::{Shape, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeparationPhi {
    IsSet,
    IsMatrix,
    IsEmpty,
    IsInhabited,
}

impl SeparationPhi {
    pub const ALL: [SeparationPhi; 4] =
        [SeparationPhi::IsSet, SeparationPhi::IsMatrix, SeparationPhi::IsEmpty, SeparationPhi::IsInhabited];

    pub fn name(self) -> &'static str {
        match self {
            SeparationPhi::IsSet => "is-set",
            SeparationPhi::IsMatrix => "is-matrix",
            SeparationPhi::IsEmpty => "is-empty",
            SeparationPhi::IsInhabited => "is-inhabited",
        }
    }

    pub fn predicate(self) -> Predicate {
        match self {
            SeparationPhi::IsSet => Predicate::new(self.name(), Value::is_set),
            SeparationPhi::IsMatrix => Predicate::new(self.name(), Value::is_matrix),
            SeparationPhi::IsEmpty => Predicate::new(self.name(), Value::is_empty_set),
            SeparationPhi::IsInhabited => {
                Predicate::new(self.name(), |v: &Value| v.elements().is_some_and(|e| !e.is_empty()))
            }
        }
    }

    /// `Φ(t)`. Bound variables are suffixed with `tag` to keep them apart
    /// from the surrounding formula.
    pub fn formula(self, t: &Term, tag: &str) -> Formula {
        let u = format!("u{tag}");
        let g = format!("γ{tag}");
        let is_set = || Formula::exists_set(u.clone(), Formula::equal(Term::set_var(&u), t.clone()));
        match self {
            SeparationPhi::IsSet => is_set(),
            SeparationPhi::IsMatrix => Formula::not(is_set()),
            SeparationPhi::IsEmpty => Formula::exists_set(
                u.clone(),
                Formula::And(vec![
                    Formula::equal(Term::set_var(&u), t.clone()),
                    Formula::forall_mat(g.clone(), Formula::not(Formula::mem(Term::mat_var(&g), Term::set_var(&u)))),
                ]),
            ),
            SeparationPhi::IsInhabited => Formula::exists_mat(g.clone(), Formula::mem(Term::mat_var(&g), t.clone())),
        }
    }
}

impl fmt::Display for SeparationPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeparationPhi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SeparationPhi::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::SchemaParams {
            schema: "separation",
            reason: format!("unknown predicate `{s}` (known: is-set, is-matrix, is-empty, is-inhabited)"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReplacementMap {
    Identity,
    Singleton,
    Wrap1x2,
    ConstEmpty,
}

impl ReplacementMap {
    pub const ALL: [ReplacementMap; 4] =
        [ReplacementMap::Identity, ReplacementMap::Singleton, ReplacementMap::Wrap1x2, ReplacementMap::ConstEmpty];

    pub fn name(self) -> &'static str {
        match self {
            ReplacementMap::Identity => "identity",
            ReplacementMap::Singleton => "singleton",
            ReplacementMap::Wrap1x2 => "wrap-1x2",
            ReplacementMap::ConstEmpty => "const-empty",
        }
    }

    fn row() -> Shape {
        Shape::new(1, 2).expect("nonzero")
    }

    pub fn total_map(self) -> TotalMap {
        match self {
            ReplacementMap::Identity => TotalMap::new(self.name(), Value::clone),
            ReplacementMap::Singleton => TotalMap::new(self.name(), |v: &Value| Value::singleton(v.clone())),
            ReplacementMap::Wrap1x2 => TotalMap::new(self.name(), |v: &Value| {
                Value::matrix(Self::row(), [v.clone(), v.clone()]).expect("two entries")
            }),
            ReplacementMap::ConstEmpty => TotalMap::new(self.name(), |_: &Value| Value::empty()),
        }
    }

    /// `F(t)` as a term.
    pub fn term(self, t: &Term) -> Term {
        match self {
            ReplacementMap::Identity => t.clone(),
            ReplacementMap::Singleton => Term::singleton(t.clone()),
            ReplacementMap::Wrap1x2 => Term::Matrix(Self::row(), vec![t.clone(), t.clone()]),
            ReplacementMap::ConstEmpty => Term::Empty,
        }
    }
}

impl fmt::Display for ReplacementMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReplacementMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ReplacementMap::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::SchemaParams {
            schema: "replacement",
            reason: format!("unknown map `{s}` (known: identity, singleton, wrap-1x2, const-empty)"),
        })
    }
}
