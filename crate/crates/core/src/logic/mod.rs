//! The two-sorted language, bounded universes, and model checking of the
//! axiom schemas.

mod check;
mod eval;
mod formula;
mod library;
mod model;
mod schema;
mod universe;

pub use check::{check_schema, check_suite, check_with, sort_transfer, Bounds, SortTransfer, Verdict};
pub use eval::{eval, Evaluator};
pub use formula::{Construction, Formula, Sort, Term};
pub use library::{ReplacementMap, SeparationPhi};
pub use model::Model;
pub use schema::{instantiate_schema, shapes_within, SchemaInstance, SchemaKind, Theory};
pub use universe::{enum_universe, Universe, DEFAULT_CAP};
