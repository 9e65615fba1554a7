//! Finite algebras, their clones and relational duals.
//!
//! Elements of a domain of size `t` are the bytes `0..t`. Tuples are
//! indexed big-endian, so tuple index order is lexicographic order and an
//! operation table lists the values of `f` in that order.

pub mod acceptance;
pub mod algebra;
pub mod catalog;
pub mod clone;
pub mod config;
pub mod error;
pub mod galois;
pub mod io;
pub mod pp_group;
pub mod wpo;

pub type Element = u8;

pub use algebra::{subpower_closure, Algebra, Domain, OperationTable, Relation};
pub use config::{Config, Limits};
pub use error::{Error, Result};
