//! Bounded model checking of schema instances, with counterexamples.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::logic::eval::Evaluator;
use crate::logic::formula::{Formula, Sort};
use crate::logic::model::Model;
use crate::logic::schema::{SchemaInstance, Theory};
use crate::logic::universe::Universe;
use crate::value::{Shape, Value};

/// Everything a verdict is relative to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub rank: usize,
    pub depth: usize,
    pub shapes: Vec<Shape>,
    pub domain_size: usize,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub instance: SchemaInstance,
    pub model: Model,
    /// Truth of the instance on the bounded domain only.
    pub holds: bool,
    /// For a failing instance: values for the outer universally quantified
    /// (and witnessed) variables, in binding order, under which the body
    /// fails.
    pub witness: Option<Vec<(String, Value)>>,
    pub bounds: Bounds,
}

impl Verdict {
    /// Re-evaluates the instance body with the witness variables pinned.
    /// Returns `Ok(false)` for a genuine counterexample.
    pub fn recheck(&self, ev: &mut Evaluator) -> Result<bool, Error> {
        let Some(w) = &self.witness else { return Ok(self.holds) };
        let names: BTreeSet<String> = w.iter().map(|(n, _)| n.clone()).collect();
        ev.eval(&self.instance.formula().unbind(&names), w)
    }
}

/// Checks one instance on `u` in `model`.
pub fn check_schema(instance: SchemaInstance, u: &Universe, model: Model) -> Result<Verdict, Error> {
    let mut ev = Evaluator::new(u, model);
    check_with(&mut ev, instance, u)
}

/// Like [`check_schema`], reusing an evaluator built for `u`.
pub fn check_with(ev: &mut Evaluator, instance: SchemaInstance, u: &Universe) -> Result<Verdict, Error> {
    let f = instance.formula();
    let holds = ev.eval(&f, &[])?;
    let witness = if holds {
        None
    } else {
        let mut env = Vec::new();
        find_witness(ev, &f, &mut env)?;
        Some(env)
    };
    Ok(Verdict {
        instance,
        model: ev.model(),
        holds,
        witness,
        bounds: Bounds {
            rank: u.rank(),
            depth: u.depth(),
            shapes: u.shapes().to_vec(),
            domain_size: ev.domain().len(),
        },
    })
}

/// Checks every instance of `theory` with shapes inside `bound`.
pub fn check_suite(theory: Theory, u: &Universe, model: Model, bound: Shape) -> Result<Vec<Verdict>, Error> {
    let mut ev = Evaluator::new(u, model);
    theory.instances(bound).into_iter().map(|inst| check_with(&mut ev, inst, u)).collect()
}

/// Given that `f` is false under `env`, extends `env` with the first failing
/// value (in value order) of each universally quantified variable on the
/// way down, and with each witnessed value.
fn find_witness(ev: &mut Evaluator, f: &Formula, env: &mut Vec<(String, Value)>) -> Result<(), Error> {
    match f {
        Formula::Forall(sort, v, body) => {
            let candidates: Vec<Value> = ev.sort_domain(*sort).cloned().collect();
            for c in candidates {
                env.push((v.clone(), c));
                if !ev.eval(body, env)? {
                    return find_witness(ev, body, env);
                }
                env.pop();
            }
            Ok(())
        }
        Formula::Witnessed { var, construction, body, .. } => {
            let w = ev.construct(construction, env)?;
            env.push((var.clone(), w));
            find_witness(ev, body, env)
        }
        Formula::And(fs) => {
            for g in fs {
                if !ev.eval(g, env)? {
                    return find_witness(ev, g, env);
                }
            }
            Ok(())
        }
        Formula::Implies(_, b) => find_witness(ev, b, env),
        _ => Ok(()),
    }
}

/// Outcome of comparing a universal statement over set variables with the
/// same statement over matrix variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortTransfer {
    pub over_sets: bool,
    pub over_matrices: bool,
}

impl SortTransfer {
    /// `∀x Ψ(x) ⇒ ∀α Ψ(α)`.
    pub fn sets_to_matrices(&self) -> bool {
        !self.over_sets || self.over_matrices
    }

    /// `∀α Ψ(α) ⇒ ∀x Ψ(x)`.
    pub fn matrices_to_sets(&self) -> bool {
        !self.over_matrices || self.over_sets
    }
}

/// Evaluates `∀x body` and `∀α body` where `var` is the body's only free
/// variable. The body must refer to it as a matrix variable; the set
/// version is obtained by renaming its sort.
pub fn sort_transfer(ev: &mut Evaluator, var: &str, body: &Formula) -> Result<SortTransfer, Error> {
    let over_matrices = ev.eval(&Formula::Forall(Sort::Matrix, var.into(), Box::new(body.clone())), &[])?;
    let over_sets = ev.eval(&Formula::Forall(Sort::Set, var.into(), Box::new(body.with_set_var(var))), &[])?;
    Ok(SortTransfer { over_sets, over_matrices })
}
