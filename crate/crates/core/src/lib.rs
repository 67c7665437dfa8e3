//! Exact stability data for representations of small quiver algebras over prime fields.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod field;
pub mod indec;
pub mod phase;
pub mod rational;
pub mod rep;
pub mod stability;
pub mod torsion;
pub mod universe;
pub mod wallchamber;

pub use error::{Error, Result};
