//! Hereditarily finite sets whose members may be set matrices: canonical
//! values, the constructive set operations, the encoding of matrices as pure
//! sets, and a bounded model checker for the axiom schemas of set matrix
//! theory.

pub mod encode;
mod error;
pub mod logic;
pub mod setops;
pub mod textio;
mod value;

pub use error::Error;
pub use value::{mem, Shape, Value, View};
