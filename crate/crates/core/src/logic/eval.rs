//! Evaluation of formulas over a bounded universe.
//!
//! Formulas are compiled to negation normal form with runs of like
//! quantifiers merged into blocks. Each block gets a static plan: test the
//! parts that are already ground, bind variables through literals that pin
//! them down (`x ≠ t` under `∀`, `x = t` or `x ∈ t` under `∃`, and the
//! matching negative forms), and enumerate the sort domain only when nothing
//! better is left. Matching inverts term constructors against hash-consed
//! keys, so a guard yields at most one candidate per target.

use smallvec::SmallVec;

use crate::encode::encode_zfm;
use crate::error::Error;
use crate::logic::formula::{Construction, Formula, Sort, Term};
use crate::logic::model::{Key, KeyStore, Model};
use crate::logic::universe::Universe;
use crate::setops;
use crate::value::{Shape, Value};

const MAX_SLOTS: usize = 64;
const NOT_IN_DOMAIN: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum CTerm {
    Var(usize),
    Empty,
    Matrix(Shape, Vec<CTerm>),
    Singleton(Box<CTerm>),
}

impl CTerm {
    fn vars(&self) -> u64 {
        match self {
            CTerm::Var(s) => 1 << s,
            CTerm::Empty => 0,
            CTerm::Matrix(_, ts) => ts.iter().fold(0, |m, t| m | t.vars()),
            CTerm::Singleton(t) => t.vars(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AtomKind {
    Mem,
    Eq,
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Lit { pos: bool, kind: AtomKind, a: CTerm, b: CTerm },
    And(Vec<Node>),
    Or(Vec<Node>),
    Block(Box<Block>),
    Let { slot: usize, construction: Construction, args: Vec<CTerm>, body: Box<Node> },
}

impl Node {
    fn free(&self) -> u64 {
        match self {
            Node::Const(_) => 0,
            Node::Lit { a, b, .. } => a.vars() | b.vars(),
            Node::And(cs) | Node::Or(cs) => cs.iter().fold(0, |m, c| m | c.free()),
            Node::Block(b) => b.parts.iter().fold(0, |m, c| m | c.free()) & !b.mask,
            Node::Let { slot, args, body, .. } => {
                args.iter().fold(0, |m, t| m | t.vars()) | (body.free() & !(1u64 << slot))
            }
        }
    }
}

/// A run of like quantifiers. Under `∀` the parts are disjuncts, under `∃`
/// conjuncts.
#[derive(Clone, Debug)]
struct Block {
    forall: bool,
    vars: Vec<usize>,
    mask: u64,
    parts: Vec<Node>,
    plan: Vec<Step>,
}

#[derive(Clone, Debug)]
enum Step {
    Check(usize),
    Enum(usize, Sort),
    /// Binds the variables in `binds` by matching `pattern` against the key
    /// of `ground` (`Eq`) or against each element of it (`Mem`).
    /// `sets` marks the bound slots of set sort.
    Guard { kind: AtomKind, pattern: CTerm, ground: CTerm, binds: u64, sets: u64 },
}

#[derive(Debug)]
struct SlotInfo {
    /// `None` for variables supplied by the caller's environment.
    sort: Option<Sort>,
    used_as_set: bool,
}

struct Compiler<'a> {
    slots: Vec<SlotInfo>,
    scope: Vec<(&'a str, usize)>,
}

impl<'a> Compiler<'a> {
    fn new_slot(&mut self, sort: Option<Sort>) -> Result<usize, Error> {
        if self.slots.len() >= MAX_SLOTS {
            return Err(Error::TooManyVariables(self.slots.len() + 1));
        }
        self.slots.push(SlotInfo { sort, used_as_set: false });
        Ok(self.slots.len() - 1)
    }

    fn lookup(&mut self, name: &str, used: Sort) -> Result<usize, Error> {
        let &(_, slot) =
            self.scope.iter().rev().find(|(n, _)| *n == name).ok_or_else(|| Error::Unbound(name.to_string()))?;
        let info = &mut self.slots[slot];
        match info.sort {
            Some(bound) if bound != used => {
                Err(Error::SortMismatch { var: name.to_string(), bound: bound.name(), used: used.name() })
            }
            Some(_) => Ok(slot),
            None => {
                info.used_as_set |= used == Sort::Set;
                Ok(slot)
            }
        }
    }

    fn term(&mut self, t: &Term) -> Result<CTerm, Error> {
        Ok(match t {
            Term::SetVar(v) => CTerm::Var(self.lookup(v, Sort::Set)?),
            Term::MatVar(v) => CTerm::Var(self.lookup(v, Sort::Matrix)?),
            Term::Empty => CTerm::Empty,
            Term::Singleton(t) => CTerm::Singleton(Box::new(self.term(t)?)),
            Term::Matrix(shape, ts) => {
                if ts.len() != shape.len() {
                    return Err(Error::Arity { shape: *shape, expected: shape.len(), found: ts.len() });
                }
                CTerm::Matrix(*shape, ts.iter().map(|t| self.term(t)).collect::<Result<_, _>>()?)
            }
        })
    }

    fn formula(&mut self, f: &'a Formula, positive: bool) -> Result<Node, Error> {
        Ok(match f {
            Formula::Mem(a, b) => Node::Lit { pos: positive, kind: AtomKind::Mem, a: self.term(a)?, b: self.term(b)? },
            Formula::Equal(a, b) => Node::Lit { pos: positive, kind: AtomKind::Eq, a: self.term(a)?, b: self.term(b)? },
            Formula::Not(g) => self.formula(g, !positive)?,
            Formula::And(fs) | Formula::Or(fs) => {
                let cs = fs.iter().map(|g| self.formula(g, positive)).collect::<Result<Vec<_>, _>>()?;
                if matches!(f, Formula::And(_)) == positive {
                    mk_and(cs)
                } else {
                    mk_or(cs)
                }
            }
            Formula::Implies(a, b) => {
                if positive {
                    mk_or(vec![self.formula(a, false)?, self.formula(b, true)?])
                } else {
                    mk_and(vec![self.formula(a, true)?, self.formula(b, false)?])
                }
            }
            Formula::Iff(a, b) => {
                let (ap, an, bp, bn) =
                    (self.formula(a, true)?, self.formula(a, false)?, self.formula(b, true)?, self.formula(b, false)?);
                if positive {
                    mk_and(vec![mk_or(vec![an, bp]), mk_or(vec![ap, bn])])
                } else {
                    mk_or(vec![mk_and(vec![ap, bn]), mk_and(vec![an, bp])])
                }
            }
            Formula::Forall(sort, v, body) | Formula::Exists(sort, v, body) => {
                let slot = self.new_slot(Some(*sort))?;
                self.scope.push((v, slot));
                let inner = self.formula(body, positive);
                self.scope.pop();
                let forall = matches!(f, Formula::Forall(..)) == positive;
                self.quantify(forall, vec![slot], inner?)
            }
            Formula::Witnessed { sort, var, construction, body } => {
                let args = construction.terms().into_iter().map(|t| self.term(t)).collect::<Result<Vec<_>, _>>()?;
                let slot = self.new_slot(Some(*sort))?;
                self.scope.push((var, slot));
                let inner = self.formula(body, positive);
                self.scope.pop();
                Node::Let { slot, construction: construction.clone(), args, body: Box::new(inner?) }
            }
        })
    }

    fn quantify(&self, forall: bool, vars: Vec<usize>, body: Node) -> Node {
        match body {
            // ∀ distributes over ∧ and ∃ over ∨
            Node::And(cs) if forall => mk_and(cs.into_iter().map(|c| self.quantify(true, vars.clone(), c)).collect()),
            Node::Or(cs) if !forall => mk_or(cs.into_iter().map(|c| self.quantify(false, vars.clone(), c)).collect()),
            Node::Block(b) if b.forall == forall => {
                let mut all = vars;
                all.extend(b.vars);
                self.block(forall, all, b.parts)
            }
            Node::Or(cs) if forall => self.block(true, vars, cs),
            Node::And(cs) if !forall => self.block(false, vars, cs),
            other => self.block(forall, vars, vec![other]),
        }
    }

    /// Every sort domain contains `∅`, so vacuous quantifiers are dropped.
    fn block(&self, forall: bool, mut vars: Vec<usize>, parts: Vec<Node>) -> Node {
        let used = parts.iter().fold(0, |m, p| m | p.free());
        vars.retain(|v| used >> v & 1 == 1);
        if vars.is_empty() {
            return if forall { mk_or(parts) } else { mk_and(parts) };
        }
        let mask = vars.iter().fold(0, |m, v| m | 1u64 << v);
        let plan = self.plan(forall, &vars, &parts);
        Node::Block(Box::new(Block { forall, vars, mask, parts, plan }))
    }

    fn set_mask(&self, mask: u64) -> u64 {
        (0..self.slots.len()).filter(|&s| mask >> s & 1 == 1 && self.slots[s].sort == Some(Sort::Set)).fold(0, |m, s| m | 1 << s)
    }

    fn plan(&self, forall: bool, vars: &[usize], parts: &[Node]) -> Vec<Step> {
        let frees: Vec<u64> = parts.iter().map(Node::free).collect();
        let mut unbound = vars.iter().fold(0, |m, v| m | 1u64 << v);
        let mut done = vec![false; parts.len()];
        let mut steps = Vec::new();
        loop {
            for (p, fv) in frees.iter().enumerate() {
                if !done[p] && fv & unbound == 0 {
                    steps.push(Step::Check(p));
                    done[p] = true;
                }
            }
            if unbound == 0 {
                return steps;
            }
            if let Some((p, mut step)) = find_guard(forall, parts, &done, unbound) {
                if let Step::Guard { binds, sets, .. } = &mut step {
                    unbound &= !*binds;
                    *sets = self.set_mask(*binds);
                }
                done[p] = true;
                steps.push(step);
                continue;
            }
            let v = choose_var(forall, vars, parts, &done, unbound);
            steps.push(Step::Enum(v, self.slots[v].sort.expect("block variables are sorted")));
            unbound &= !(1u64 << v);
        }
    }
}

/// Literals that fail (under `∀`) or hold (under `∃`) only on matching
/// assignments.
fn guard_literal(forall: bool, part: &Node) -> Option<(AtomKind, &CTerm, &CTerm)> {
    match part {
        Node::Lit { pos, kind, a, b } if *pos != forall => Some((*kind, a, b)),
        _ => None,
    }
}

fn find_guard(forall: bool, parts: &[Node], done: &[bool], unbound: u64) -> Option<(usize, Step)> {
    for want in [AtomKind::Eq, AtomKind::Mem] {
        for (p, part) in parts.iter().enumerate() {
            if done[p] {
                continue;
            }
            let Some((kind, a, b)) = guard_literal(forall, part) else { continue };
            if kind != want {
                continue;
            }
            let (ua, ub) = (a.vars() & unbound, b.vars() & unbound);
            let pick = |pattern: &CTerm, ground: &CTerm, binds| {
                Some((p, Step::Guard { kind, pattern: pattern.clone(), ground: ground.clone(), binds, sets: 0 }))
            };
            if ua != 0 && ub == 0 {
                return pick(a, b, ua);
            }
            if kind == AtomKind::Eq && ub != 0 && ua == 0 {
                return pick(b, a, ub);
            }
        }
    }
    None
}

/// Picks the variable whose enumeration unlocks a guard soonest.
fn choose_var(forall: bool, vars: &[usize], parts: &[Node], done: &[bool], unbound: u64) -> usize {
    let first_in = |mask: u64| *vars.iter().find(|v| mask >> **v & 1 == 1).expect("nonempty mask");
    let mut best: Option<(u32, usize)> = None;
    for (p, part) in parts.iter().enumerate() {
        if done[p] {
            continue;
        }
        let Some((kind, a, b)) = guard_literal(forall, part) else { continue };
        let (ua, ub) = (a.vars() & unbound, b.vars() & unbound);
        let side = match kind {
            AtomKind::Eq if ua.count_ones() <= ub.count_ones() => ua,
            AtomKind::Eq => ub,
            AtomKind::Mem => ub,
        };
        if side == 0 {
            continue;
        }
        let score = side.count_ones();
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, first_in(side)));
        }
    }
    best.map_or_else(|| first_in(unbound), |(_, v)| v)
}

fn mk_and(cs: Vec<Node>) -> Node {
    let mut out = Vec::new();
    for c in cs {
        match c {
            Node::Const(true) => {}
            Node::Const(false) => return Node::Const(false),
            Node::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Node::Const(true),
        1 => out.pop().expect("one child"),
        _ => Node::And(out),
    }
}

fn mk_or(cs: Vec<Node>) -> Node {
    let mut out = Vec::new();
    for c in cs {
        match c {
            Node::Const(false) => {}
            Node::Const(true) => return Node::Const(true),
            Node::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Node::Const(false),
        1 => out.pop().expect("one child"),
        _ => Node::Or(out),
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Binding {
    key: Key,
    /// Index into the domain, or past it into the arena of built values.
    val: u32,
}

/// A value built during evaluation. Matrices of bound variables are kept as
/// their entries and only assembled when asked for.
#[derive(Clone, Debug)]
enum Built {
    Value(Value),
    Matrix(Shape, SmallVec<[u32; 8]>),
}

/// Evaluates formulas over one universe in one model. The key store and
/// the domain tables are built once and reused across formulas.
pub struct Evaluator {
    model: Model,
    domain: Vec<Value>,
    dom_keys: Vec<Key>,
    /// Domain position of each key, `NOT_IN_DOMAIN` if none.
    by_key: Vec<u32>,
    is_set: Vec<bool>,
    set_positions: Vec<u32>,
    all_positions: Vec<u32>,
    infinity_len: usize,
    keys: KeyStore,
    arena: Vec<Built>,
    prepared: Vec<Shape>,
}

impl Evaluator {
    pub fn new(u: &Universe, model: Model) -> Evaluator {
        let domain = model.domain(u);
        let mut keys = KeyStore::new(model);
        let dom_keys: Vec<Key> = domain.iter().map(|v| keys.key_of_memo(v)).collect();
        let mut by_key = vec![NOT_IN_DOMAIN; keys.len()];
        for (i, &k) in dom_keys.iter().enumerate() {
            by_key[k as usize] = i as u32;
        }
        let is_set: Vec<bool> = domain.iter().map(|v| model.is_set_sort(v)).collect();
        let set_positions = (0..domain.len() as u32).filter(|&i| is_set[i as usize]).collect();
        let all_positions = (0..domain.len() as u32).collect();
        let infinity_len = domain.iter().map(Value::rank).max().unwrap_or(0) + 2;
        Evaluator {
            model,
            domain,
            dom_keys,
            by_key,
            is_set,
            set_positions,
            all_positions,
            infinity_len,
            keys,
            arena: Vec::new(),
            prepared: Vec::new(),
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// The quantification domain, in value order.
    pub fn domain(&self) -> &[Value] {
        &self.domain
    }

    /// The range of variables of `sort`, in value order.
    pub fn sort_domain(&self, sort: Sort) -> impl Iterator<Item = &Value> + '_ {
        self.positions(sort).iter().map(|&i| &self.domain[i as usize])
    }

    /// Length of the infinity stage used as the witness of the infinity
    /// schema: long enough that the successor of its last element leaves the
    /// domain.
    pub fn infinity_stage_len(&self) -> usize {
        self.infinity_len
    }

    fn positions(&self, sort: Sort) -> &[u32] {
        match sort {
            Sort::Set => &self.set_positions,
            Sort::Matrix => &self.all_positions,
        }
    }

    /// Truth value of `f` with its free variables taken from `env` (later
    /// entries shadow earlier ones).
    pub fn eval(&mut self, f: &Formula, env: &[(String, Value)]) -> Result<bool, Error> {
        let mut c = Compiler { slots: Vec::new(), scope: Vec::new() };
        for (name, _) in env {
            let slot = c.new_slot(None)?;
            c.scope.push((name, slot));
        }
        let root = c.formula(f, true)?;
        let mut bindings = vec![Binding::default(); c.slots.len()];
        for (slot, (name, v)) in env.iter().enumerate() {
            if c.slots[slot].used_as_set && !self.model.is_set_sort(v) {
                return Err(Error::SortMismatch { var: name.clone(), bound: Sort::Matrix.name(), used: Sort::Set.name() });
            }
        }
        let mut shapes = Vec::new();
        formula_shapes(f, &mut shapes);
        for shape in shapes {
            if !self.prepared.contains(&shape) {
                self.keys.prepare_shape(shape, &self.dom_keys);
                self.prepared.push(shape);
            }
        }
        let (base, mark) = (self.arena.len(), self.keys.mark());
        for (slot, (_, v)) in env.iter().enumerate() {
            bindings[slot] = self.bind_value(v.clone());
        }
        let result = self.node(&root, &mut bindings);
        self.arena.truncate(base);
        self.keys.rollback(mark);
        result
    }

    /// Builds the witness of `c` with its arguments taken from `env`. In the
    /// ZFM image the result is the encoded witness.
    pub fn construct(&mut self, c: &Construction, env: &[(String, Value)]) -> Result<Value, Error> {
        let args = c.terms().into_iter().map(|t| self.named_term(t, env)).collect::<Result<Vec<_>, _>>()?;
        let v = self.apply(c, &args)?;
        Ok(self.pure(v))
    }

    fn named_term(&self, t: &Term, env: &[(String, Value)]) -> Result<Value, Error> {
        Ok(match t {
            Term::SetVar(n) | Term::MatVar(n) => {
                let v = env.iter().rev().find(|(m, _)| m == n).ok_or_else(|| Error::Unbound(n.clone()))?;
                self.pure(v.1.clone())
            }
            Term::Empty => Value::empty(),
            Term::Singleton(t) => Value::singleton(self.named_term(t, env)?),
            Term::Matrix(shape, ts) => {
                let entries = ts.iter().map(|t| self.named_term(t, env)).collect::<Result<Vec<_>, _>>()?;
                self.pure(Value::matrix(*shape, entries)?)
            }
        })
    }

    fn pure(&self, v: Value) -> Value {
        match self.model {
            Model::Native => v,
            Model::ZfmImage => encode_zfm(&v),
        }
    }

    fn bind_value(&mut self, v: Value) -> Binding {
        let key = self.keys.key_of(&v);
        match self.position(key) {
            Some(pos) => Binding { key, val: pos },
            None => {
                self.arena.push(Built::Value(v));
                Binding { key, val: (self.domain.len() + self.arena.len() - 1) as u32 }
            }
        }
    }

    fn position(&self, key: Key) -> Option<u32> {
        self.by_key.get(key as usize).copied().filter(|&p| p != NOT_IN_DOMAIN)
    }

    fn value_at(&self, val: u32) -> Value {
        let i = val as usize;
        if i < self.domain.len() {
            self.domain[i].clone()
        } else {
            match &self.arena[i - self.domain.len()] {
                Built::Value(v) => self.pure(v.clone()),
                Built::Matrix(shape, vals) => {
                    let entries = vals.iter().map(|&v| self.value_at(v));
                    self.pure(Value::matrix(*shape, entries).expect("entry count matches the shape"))
                }
            }
        }
    }

    fn apply(&self, c: &Construction, args: &[Value]) -> Result<Value, Error> {
        Ok(match c {
            Construction::Empty => setops::empty(),
            Construction::Matrix(shape, _) => Value::matrix(*shape, args.iter().cloned())?,
            Construction::Separation(_, phi) => setops::separation(&args[0], &phi.predicate())?,
            Construction::Pair(..) => setops::pair_set(&args[0], &args[1]),
            Construction::Union(_) => setops::union(&args[0])?,
            Construction::Powerset(_) => setops::powerset(&args[0])?,
            Construction::InfinityStage => setops::infinity_stage(self.infinity_len),
            Construction::Replacement(_, map) => setops::replacement(&args[0], &map.total_map())?,
            Construction::MatricesOver(_, shape) => setops::matrices_over(&args[0], *shape)?,
        })
    }

    fn term_value(&self, t: &CTerm, env: &[Binding]) -> Result<Value, Error> {
        Ok(match t {
            CTerm::Var(s) => self.value_at(env[*s].val),
            CTerm::Empty => Value::empty(),
            CTerm::Singleton(t) => Value::singleton(self.term_value(t, env)?),
            CTerm::Matrix(shape, ts) => {
                let entries = ts.iter().map(|t| self.term_value(t, env)).collect::<Result<Vec<_>, _>>()?;
                self.pure(Value::matrix(*shape, entries)?)
            }
        })
    }

    fn term_key(&mut self, t: &CTerm, env: &[Binding]) -> Key {
        match t {
            CTerm::Var(s) => env[*s].key,
            CTerm::Empty => self.keys.empty(),
            CTerm::Singleton(t) => {
                let k = self.term_key(t, env);
                self.keys.singleton(k)
            }
            CTerm::Matrix(shape, ts) => {
                let ks: SmallVec<[Key; 8]> = ts.iter().map(|t| self.term_key(t, env)).collect();
                self.keys.matrix(*shape, &ks)
            }
        }
    }

    fn node(&mut self, n: &Node, env: &mut Vec<Binding>) -> Result<bool, Error> {
        match n {
            Node::Const(b) => Ok(*b),
            Node::Lit { pos, kind, a, b } => {
                let mark = self.keys.mark();
                let (ka, kb) = (self.term_key(a, env), self.term_key(b, env));
                let holds = match kind {
                    AtomKind::Eq => ka == kb,
                    AtomKind::Mem => self.keys.mem(ka, kb),
                };
                self.keys.rollback(mark);
                Ok(holds == *pos)
            }
            Node::And(cs) => {
                for c in cs {
                    if !self.node(c, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Node::Or(cs) => {
                for c in cs {
                    if self.node(c, env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Node::Block(b) => self.block(b, 0, env),
            Node::Let { slot, construction, args, body } => {
                let (base, mark) = (self.arena.len(), self.keys.mark());
                env[*slot] = match (construction, var_slots(args)) {
                    (Construction::Matrix(shape, _), Some(slots)) => {
                        let ks: SmallVec<[Key; 8]> = slots.iter().map(|&s| env[s].key).collect();
                        let key = self.keys.matrix(*shape, &ks);
                        match self.position(key) {
                            Some(pos) => Binding { key, val: pos },
                            None => {
                                self.arena.push(Built::Matrix(*shape, slots.iter().map(|&s| env[s].val).collect()));
                                Binding { key, val: (self.domain.len() + self.arena.len() - 1) as u32 }
                            }
                        }
                    }
                    _ => {
                        let vals = args.iter().map(|t| self.term_value(t, env)).collect::<Result<Vec<_>, _>>()?;
                        let built = self.apply(construction, &vals)?;
                        self.bind_value(built)
                    }
                };
                let result = self.node(body, env);
                self.arena.truncate(base);
                self.keys.rollback(mark);
                result
            }
        }
    }

    fn block(&mut self, b: &Block, step: usize, env: &mut Vec<Binding>) -> Result<bool, Error> {
        let Some(st) = b.plan.get(step) else {
            // every disjunct failed (∀) or every conjunct held (∃)
            return Ok(!b.forall);
        };
        match st {
            Step::Check(p) => {
                let v = self.node(&b.parts[*p], env)?;
                if v == b.forall {
                    return Ok(v);
                }
                self.block(b, step + 1, env)
            }
            Step::Enum(slot, sort) => {
                for i in 0..self.positions(*sort).len() {
                    let pos = self.positions(*sort)[i];
                    env[*slot] = Binding { key: self.dom_keys[pos as usize], val: pos };
                    let r = self.block(b, step + 1, env)?;
                    if r != b.forall {
                        return Ok(r);
                    }
                }
                Ok(b.forall)
            }
            Step::Guard { .. } => {
                // keys built for the target are only needed while matching
                let mark = self.keys.mark();
                let r = self.guard(b, step, env);
                self.keys.rollback(mark);
                r
            }
        }
    }

    /// Runs the guard step `step` of `b`.
    fn guard(&mut self, b: &Block, step: usize, env: &mut Vec<Binding>) -> Result<bool, Error> {
        let Step::Guard { kind, pattern, ground, binds, sets } = &b.plan[step] else { unreachable!("a guard step") };
        let target = self.term_key(ground, env);
        let targets: SmallVec<[Key; 8]> = match kind {
            AtomKind::Eq => SmallVec::from_slice(&[target]),
            AtomKind::Mem => self.keys.elements(target).map(SmallVec::from_slice).unwrap_or_default(),
        };
        let mut found: SmallVec<[(usize, Key); 8]> = SmallVec::new();
        for t in targets {
            found.clear();
            if !self.matches(pattern, t, *binds, env, &mut found) || !self.bind_matched(&found, *sets, env) {
                continue;
            }
            let r = self.block(b, step + 1, env)?;
            if r != b.forall {
                return Ok(r);
            }
        }
        Ok(b.forall)
    }

    /// Solves `pattern = target` for the slots in `binds`.
    fn matches(
        &mut self,
        pattern: &CTerm,
        target: Key,
        binds: u64,
        env: &[Binding],
        out: &mut SmallVec<[(usize, Key); 8]>,
    ) -> bool {
        match pattern {
            CTerm::Var(s) if binds >> s & 1 == 1 => match out.iter().find(|(x, _)| x == s) {
                Some(&(_, k)) => k == target,
                None => {
                    out.push((*s, target));
                    true
                }
            },
            CTerm::Var(s) => env[*s].key == target,
            CTerm::Empty => target == self.keys.empty(),
            CTerm::Singleton(t) => match self.keys.elements(target) {
                Some(&[a]) => self.matches(t, a, binds, env, out),
                _ => false,
            },
            CTerm::Matrix(shape, ts) => match self.keys.decompose(*shape, target) {
                Some(entries) => ts.iter().zip(entries).all(|(t, e)| self.matches(t, e, binds, env, out)),
                None => false,
            },
        }
    }

    /// Binds matched keys, provided each names a domain element of the right
    /// sort.
    fn bind_matched(&self, found: &[(usize, Key)], sets: u64, env: &mut [Binding]) -> bool {
        for &(slot, key) in found {
            match self.position(key) {
                Some(pos) if sets >> slot & 1 == 0 || self.is_set[pos as usize] => {
                    env[slot] = Binding { key, val: pos };
                }
                _ => return false,
            }
        }
        true
    }
}

/// The slots of `ts` if every term is a variable.
fn var_slots(ts: &[CTerm]) -> Option<SmallVec<[usize; 8]>> {
    ts.iter().map(|t| if let CTerm::Var(s) = t { Some(*s) } else { None }).collect()
}

fn term_shapes(t: &Term, out: &mut Vec<Shape>) {
    match t {
        Term::SetVar(_) | Term::MatVar(_) | Term::Empty => {}
        Term::Singleton(t) => term_shapes(t, out),
        Term::Matrix(shape, ts) => {
            out.push(*shape);
            ts.iter().for_each(|t| term_shapes(t, out));
        }
    }
}

/// Every matrix shape written in `f`.
fn formula_shapes(f: &Formula, out: &mut Vec<Shape>) {
    match f {
        Formula::Mem(a, b) | Formula::Equal(a, b) => {
            term_shapes(a, out);
            term_shapes(b, out);
        }
        Formula::Not(g) | Formula::Forall(_, _, g) | Formula::Exists(_, _, g) => formula_shapes(g, out),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| formula_shapes(g, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            formula_shapes(a, out);
            formula_shapes(b, out);
        }
        Formula::Witnessed { construction, body, .. } => {
            if let Construction::Matrix(shape, _) | Construction::MatricesOver(_, shape) = construction {
                out.push(*shape);
            }
            construction.terms().into_iter().for_each(|t| term_shapes(t, out));
            formula_shapes(body, out);
        }
    }
}

/// Evaluates `f` over `u` in `model`.
pub fn eval(f: &Formula, u: &Universe, model: Model, env: &[(String, Value)]) -> Result<bool, Error> {
    Evaluator::new(u, model).eval(f, env)
}
