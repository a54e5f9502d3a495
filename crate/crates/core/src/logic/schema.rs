//! The axiom schemas of set matrix theory, instantiated at concrete shapes.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::logic::formula::{Construction, Formula, Sort, Term};
use crate::logic::library::{ReplacementMap, SeparationPhi};
use crate::value::Shape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaKind {
    SetMatrix,
    Reduction,
    Omission,
    DivisionSets,
    DivisionMatrices,
    Epsilon,
    MatrixExtensionality,
    Extensionality,
    Empty,
    Separation,
    Pairing,
    Union,
    Powerset,
    Infinity,
    Replacement,
    MatricesOver,
}

impl SchemaKind {
    pub const ALL: [SchemaKind; 16] = [
        SchemaKind::SetMatrix,
        SchemaKind::Reduction,
        SchemaKind::Omission,
        SchemaKind::DivisionSets,
        SchemaKind::DivisionMatrices,
        SchemaKind::Epsilon,
        SchemaKind::MatrixExtensionality,
        SchemaKind::Extensionality,
        SchemaKind::Empty,
        SchemaKind::Separation,
        SchemaKind::Pairing,
        SchemaKind::Union,
        SchemaKind::Powerset,
        SchemaKind::Infinity,
        SchemaKind::Replacement,
        SchemaKind::MatricesOver,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaKind::SetMatrix => "set-matrix",
            SchemaKind::Reduction => "reduction",
            SchemaKind::Omission => "omission",
            SchemaKind::DivisionSets => "division-sets",
            SchemaKind::DivisionMatrices => "division-matrices",
            SchemaKind::Epsilon => "epsilon",
            SchemaKind::MatrixExtensionality => "matrix-extensionality",
            SchemaKind::Extensionality => "extensionality",
            SchemaKind::Empty => "empty",
            SchemaKind::Separation => "separation",
            SchemaKind::Pairing => "pairing",
            SchemaKind::Union => "union",
            SchemaKind::Powerset => "powerset",
            SchemaKind::Infinity => "infinity",
            SchemaKind::Replacement => "replacement",
            SchemaKind::MatricesOver => "matrices-over",
        }
    }

    /// Number of shape parameters.
    pub fn arity(self) -> usize {
        match self {
            SchemaKind::SetMatrix
            | SchemaKind::Omission
            | SchemaKind::DivisionSets
            | SchemaKind::Epsilon
            | SchemaKind::MatrixExtensionality
            | SchemaKind::MatricesOver => 1,
            SchemaKind::DivisionMatrices => 2,
            _ => 0,
        }
    }

    /// All instances whose shapes fit inside `bound`, in a fixed order. For
    /// separation and replacement, one instance per library entry.
    pub fn instances(self, bound: Shape) -> Vec<SchemaInstance> {
        let shapes = shapes_within(bound);
        let non_unit: Vec<Shape> = shapes.iter().copied().filter(|s| !s.is_unit()).collect();
        match self {
            SchemaKind::SetMatrix => shapes.iter().map(|&s| SchemaInstance::SetMatrix(s)).collect(),
            SchemaKind::Reduction => vec![SchemaInstance::Reduction],
            SchemaKind::Omission => shapes.iter().map(|&s| SchemaInstance::Omission(s)).collect(),
            SchemaKind::DivisionSets => non_unit.iter().map(|&s| SchemaInstance::DivisionSets(s)).collect(),
            SchemaKind::DivisionMatrices => non_unit
                .iter()
                .flat_map(|&a| non_unit.iter().filter(move |&&b| b != a).map(move |&b| SchemaInstance::DivisionMatrices(a, b)))
                .collect(),
            SchemaKind::Epsilon => non_unit.iter().map(|&s| SchemaInstance::Epsilon(s)).collect(),
            SchemaKind::MatrixExtensionality => {
                shapes.iter().map(|&s| SchemaInstance::MatrixExtensionality(s)).collect()
            }
            SchemaKind::Extensionality => vec![SchemaInstance::Extensionality],
            SchemaKind::Empty => vec![SchemaInstance::Empty],
            SchemaKind::Separation => SeparationPhi::ALL.into_iter().map(SchemaInstance::Separation).collect(),
            SchemaKind::Pairing => vec![SchemaInstance::Pairing],
            SchemaKind::Union => vec![SchemaInstance::Union],
            SchemaKind::Powerset => vec![SchemaInstance::Powerset],
            SchemaKind::Infinity => vec![SchemaInstance::Infinity],
            SchemaKind::Replacement => ReplacementMap::ALL.into_iter().map(SchemaInstance::Replacement).collect(),
            SchemaKind::MatricesOver => shapes.iter().map(|&s| SchemaInstance::MatricesOver(s)).collect(),
        }
    }
}

impl fmt::Display for SchemaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SchemaKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::UnknownSchema(s.to_string()))
    }
}

/// Every shape `r×c` with `r ≤ bound.rows()` and `c ≤ bound.cols()`, in
/// shape order.
pub fn shapes_within(bound: Shape) -> Vec<Shape> {
    let mut out = Vec::new();
    for r in 1..=bound.rows() {
        for c in 1..=bound.cols() {
            out.push(Shape::new(r, c).expect("positive"));
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemaInstance {
    SetMatrix(Shape),
    Reduction,
    Omission(Shape),
    DivisionSets(Shape),
    DivisionMatrices(Shape, Shape),
    Epsilon(Shape),
    MatrixExtensionality(Shape),
    Extensionality,
    Empty,
    Separation(SeparationPhi),
    Pairing,
    Union,
    Powerset,
    Infinity,
    Replacement(ReplacementMap),
    MatricesOver(Shape),
}

impl SchemaInstance {
    /// Validates parameters. `variant` names the predicate of separation or
    /// the map of replacement and is rejected elsewhere.
    pub fn new(kind: SchemaKind, params: &[Shape], variant: Option<&str>) -> Result<SchemaInstance, Error> {
        let schema = kind.name();
        if params.len() != kind.arity() {
            return Err(Error::SchemaArity { schema, expected: kind.arity(), found: params.len() });
        }
        let needs_variant = matches!(kind, SchemaKind::Separation | SchemaKind::Replacement);
        match (needs_variant, variant) {
            (true, None) => {
                return Err(Error::SchemaParams {
                    schema,
                    reason: "a predicate or map from the library is required".into(),
                })
            }
            (false, Some(v)) => {
                return Err(Error::SchemaParams { schema, reason: format!("takes no predicate or map, got `{v}`") })
            }
            _ => {}
        }
        let non_unit = |s: Shape| {
            if s.is_unit() {
                Err(Error::SchemaParams { schema, reason: "the shape must have at least two entries".into() })
            } else {
                Ok(s)
            }
        };
        Ok(match kind {
            SchemaKind::SetMatrix => SchemaInstance::SetMatrix(params[0]),
            SchemaKind::Reduction => SchemaInstance::Reduction,
            SchemaKind::Omission => SchemaInstance::Omission(params[0]),
            SchemaKind::DivisionSets => SchemaInstance::DivisionSets(non_unit(params[0])?),
            SchemaKind::DivisionMatrices => {
                let (a, b) = (non_unit(params[0])?, non_unit(params[1])?);
                if a == b {
                    return Err(Error::SchemaParams { schema, reason: "the two shapes must differ".into() });
                }
                SchemaInstance::DivisionMatrices(a, b)
            }
            SchemaKind::Epsilon => SchemaInstance::Epsilon(non_unit(params[0])?),
            SchemaKind::MatrixExtensionality => SchemaInstance::MatrixExtensionality(params[0]),
            SchemaKind::Extensionality => SchemaInstance::Extensionality,
            SchemaKind::Empty => SchemaInstance::Empty,
            SchemaKind::Separation => SchemaInstance::Separation(variant.expect("checked").parse()?),
            SchemaKind::Pairing => SchemaInstance::Pairing,
            SchemaKind::Union => SchemaInstance::Union,
            SchemaKind::Powerset => SchemaInstance::Powerset,
            SchemaKind::Infinity => SchemaInstance::Infinity,
            SchemaKind::Replacement => SchemaInstance::Replacement(variant.expect("checked").parse()?),
            SchemaKind::MatricesOver => SchemaInstance::MatricesOver(params[0]),
        })
    }

    pub fn kind(&self) -> SchemaKind {
        match self {
            SchemaInstance::SetMatrix(_) => SchemaKind::SetMatrix,
            SchemaInstance::Reduction => SchemaKind::Reduction,
            SchemaInstance::Omission(_) => SchemaKind::Omission,
            SchemaInstance::DivisionSets(_) => SchemaKind::DivisionSets,
            SchemaInstance::DivisionMatrices(..) => SchemaKind::DivisionMatrices,
            SchemaInstance::Epsilon(_) => SchemaKind::Epsilon,
            SchemaInstance::MatrixExtensionality(_) => SchemaKind::MatrixExtensionality,
            SchemaInstance::Extensionality => SchemaKind::Extensionality,
            SchemaInstance::Empty => SchemaKind::Empty,
            SchemaInstance::Separation(_) => SchemaKind::Separation,
            SchemaInstance::Pairing => SchemaKind::Pairing,
            SchemaInstance::Union => SchemaKind::Union,
            SchemaInstance::Powerset => SchemaKind::Powerset,
            SchemaInstance::Infinity => SchemaKind::Infinity,
            SchemaInstance::Replacement(_) => SchemaKind::Replacement,
            SchemaInstance::MatricesOver(_) => SchemaKind::MatricesOver,
        }
    }

    pub fn params(&self) -> Vec<Shape> {
        match *self {
            SchemaInstance::SetMatrix(s)
            | SchemaInstance::Omission(s)
            | SchemaInstance::DivisionSets(s)
            | SchemaInstance::Epsilon(s)
            | SchemaInstance::MatrixExtensionality(s)
            | SchemaInstance::MatricesOver(s) => vec![s],
            SchemaInstance::DivisionMatrices(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    pub fn variant(&self) -> Option<&'static str> {
        match self {
            SchemaInstance::Separation(p) => Some(p.name()),
            SchemaInstance::Replacement(m) => Some(m.name()),
            _ => None,
        }
    }

    /// The closed formula of this instance. Existentials whose witness is
    /// one of the constructive operations are marked as witnessed.
    pub fn formula(&self) -> Formula {
        use Formula as F;
        let x = || Term::set_var("x");
        let y = || Term::set_var("y");
        match *self {
            SchemaInstance::SetMatrix(s) => {
                let (vars, m) = matrix_vars("α", s);
                F::forall_all(
                    &vars,
                    F::witnessed(
                        Sort::Matrix,
                        "β",
                        Construction::Matrix(s, entry_terms(&vars)),
                        F::equal(Term::mat_var("β"), m),
                    ),
                )
            }
            SchemaInstance::Reduction => F::forall_set("x", F::equal(Term::Matrix(unit(), vec![x()]), x())),
            SchemaInstance::Omission(s) => {
                let (vars, m) = matrix_vars("α", s);
                F::forall_all(&vars, F::equal(Term::Matrix(unit(), vec![m.clone()]), m))
            }
            SchemaInstance::DivisionSets(s) => {
                let (vars, m) = matrix_vars("α", s);
                F::forall_set("x", F::forall_all(&vars, F::not(F::equal(x(), m))))
            }
            SchemaInstance::DivisionMatrices(a, b) => {
                let (va, ma) = matrix_vars("α", a);
                let (vb, mb) = matrix_vars("β", b);
                F::forall_all(&[va, vb].concat(), F::not(F::equal(ma, mb)))
            }
            SchemaInstance::Epsilon(s) => {
                let (vars, m) = matrix_vars("α", s);
                F::forall_all(&vars, F::forall_mat("β", F::not(F::mem(Term::mat_var("β"), m))))
            }
            SchemaInstance::MatrixExtensionality(s) => {
                let (va, ma) = matrix_vars("α", s);
                let (vb, mb) = matrix_vars("β", s);
                let entrywise = va
                    .iter()
                    .zip(&vb)
                    .map(|((_, a), (_, b))| F::equal(Term::mat_var(a), Term::mat_var(b)))
                    .collect();
                F::forall_all(&[va, vb].concat(), F::iff(F::equal(ma, mb), F::And(entrywise)))
            }
            SchemaInstance::Extensionality => F::forall_set(
                "x",
                F::forall_set(
                    "y",
                    F::iff(
                        F::equal(x(), y()),
                        F::forall_mat("α", F::iff(F::mem(Term::mat_var("α"), x()), F::mem(Term::mat_var("α"), y()))),
                    ),
                ),
            ),
            SchemaInstance::Empty => F::witnessed(
                Sort::Set,
                "x",
                Construction::Empty,
                F::And(vec![
                    F::equal(x(), Term::Empty),
                    F::forall_mat("α", F::not(F::mem(Term::mat_var("α"), x()))),
                ]),
            ),
            SchemaInstance::Separation(phi) => {
                let a = Term::mat_var("α");
                F::forall_set(
                    "x",
                    F::witnessed(
                        Sort::Set,
                        "y",
                        Construction::Separation(x(), phi),
                        F::forall_mat(
                            "α",
                            F::iff(F::mem(a.clone(), y()), F::And(vec![F::mem(a.clone(), x()), phi.formula(&a, "")])),
                        ),
                    ),
                )
            }
            SchemaInstance::Pairing => {
                let (a, b, g) = (Term::mat_var("α"), Term::mat_var("β"), Term::mat_var("γ"));
                F::forall_mat(
                    "α",
                    F::forall_mat(
                        "β",
                        F::witnessed(
                            Sort::Set,
                            "x",
                            Construction::Pair(a.clone(), b.clone()),
                            F::forall_mat(
                                "γ",
                                F::iff(F::mem(g.clone(), x()), F::Or(vec![F::equal(g.clone(), a), F::equal(g, b)])),
                            ),
                        ),
                    ),
                )
            }
            SchemaInstance::Union => {
                let a = Term::mat_var("α");
                let b = Term::mat_var("β");
                let z = Term::set_var("z");
                let all_sets = F::forall_mat(
                    "α",
                    F::implies(F::mem(a.clone(), x()), F::exists_set("u", F::equal(Term::set_var("u"), a))),
                );
                F::forall_set(
                    "x",
                    F::implies(
                        all_sets,
                        F::witnessed(
                            Sort::Set,
                            "y",
                            Construction::Union(x()),
                            F::forall_mat(
                                "β",
                                F::iff(
                                    F::mem(b.clone(), y()),
                                    F::exists_set("z", F::And(vec![F::mem(z.clone(), x()), F::mem(b, z)])),
                                ),
                            ),
                        ),
                    ),
                )
            }
            SchemaInstance::Powerset => {
                let a = Term::mat_var("α");
                let g = Term::mat_var("γ");
                let u = Term::set_var("u");
                let subset = F::forall_mat("γ", F::implies(F::mem(g.clone(), u.clone()), F::mem(g, x())));
                F::forall_set(
                    "x",
                    F::witnessed(
                        Sort::Set,
                        "y",
                        Construction::Powerset(x()),
                        F::forall_mat(
                            "α",
                            F::iff(F::mem(a.clone(), y()), F::exists_set("u", F::And(vec![F::equal(u, a), subset]))),
                        ),
                    ),
                )
            }
            SchemaInstance::Infinity => F::witnessed(
                Sort::Set,
                "x",
                Construction::InfinityStage,
                F::And(vec![
                    F::mem(Term::Empty, x()),
                    F::forall_set("y", F::implies(F::mem(y(), x()), F::mem(Term::singleton(y()), x()))),
                ]),
            ),
            SchemaInstance::Replacement(map) => {
                let g = Term::mat_var("γ");
                let z = Term::mat_var("ζ");
                F::forall_set(
                    "x",
                    F::witnessed(
                        Sort::Set,
                        "y",
                        Construction::Replacement(x(), map),
                        F::forall_mat(
                            "ζ",
                            F::iff(
                                F::mem(z.clone(), y()),
                                F::exists_mat("γ", F::And(vec![F::mem(g.clone(), x()), F::equal(z, map.term(&g))])),
                            ),
                        ),
                    ),
                )
            }
            SchemaInstance::MatricesOver(s) => {
                let (vars, m) = matrix_vars("β", s);
                let a = Term::mat_var("α");
                let mut conj = vec![F::equal(a.clone(), m)];
                conj.extend(vars.iter().map(|(_, v)| F::mem(Term::mat_var(v), x())));
                let body = vars.iter().rev().fold(F::And(conj), |acc, (_, v)| F::exists_mat(v.clone(), acc));
                F::forall_set(
                    "x",
                    F::witnessed(
                        Sort::Set,
                        "y",
                        Construction::MatricesOver(x(), s),
                        F::forall_mat("α", F::iff(F::mem(a, y()), body)),
                    ),
                )
            }
        }
    }
}

impl fmt::Display for SchemaInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        let params = self.params();
        if !params.is_empty() {
            let ps: Vec<String> = params.iter().map(Shape::to_string).collect();
            write!(f, " {}", ps.join(","))?;
        }
        if let Some(v) = self.variant() {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

fn unit() -> Shape {
    Shape::new(1, 1).expect("positive")
}

/// Matrix variables `αij` for a shape, row-major, and the matrix term over
/// them.
fn matrix_vars(prefix: &str, shape: Shape) -> (Vec<(Sort, String)>, Term) {
    let wide = shape.rows() > 9 || shape.cols() > 9;
    let mut vars = Vec::with_capacity(shape.len());
    for i in 1..=shape.rows() {
        for j in 1..=shape.cols() {
            let name = if wide { format!("{prefix}{i}_{j}") } else { format!("{prefix}{i}{j}") };
            vars.push((Sort::Matrix, name));
        }
    }
    let term = Term::Matrix(shape, entry_terms(&vars));
    (vars, term)
}

fn entry_terms(vars: &[(Sort, String)]) -> Vec<Term> {
    vars.iter().map(|(_, v)| Term::mat_var(v)).collect()
}

/// The instance named `name` with shape parameters `params`. Separation and
/// replacement take their library entry after a colon, as in
/// `separation:is-set`.
pub fn instantiate_schema(name: &str, params: &[Shape]) -> Result<Formula, Error> {
    let (kind, variant) = match name.split_once(':') {
        Some((k, v)) => (k, Some(v)),
        None => (name, None),
    };
    Ok(SchemaInstance::new(kind.parse()?, params, variant)?.formula())
}

/// Which schemas make up a theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theory {
    /// All sixteen schemas.
    Smt,
    /// Without set/matrix division and the epsilon schema; the ZFM image is
    /// a model of this fragment.
    SmtMinus,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Smt => "SMT",
            Theory::SmtMinus => "SMT-",
        }
    }

    pub fn kinds(self) -> Vec<SchemaKind> {
        SchemaKind::ALL
            .into_iter()
            .filter(|k| self == Theory::Smt || !matches!(k, SchemaKind::DivisionSets | SchemaKind::Epsilon))
            .collect()
    }

    pub fn instances(self, bound: Shape) -> Vec<SchemaInstance> {
        self.kinds().into_iter().flat_map(|k| k.instances(bound)).collect()
    }
}
