//! Computational toolkit for weighted badly approximable points on curves.
//!
//! The crate covers the dynamical side (diagonal flows acting on unimodular
//! lattices, certified orbit floors), the arithmetic side (direct and dual
//! badness tests, Dirichlet witnesses) and the interval-survival construction
//! whose survivors are weighted badly approximable, together with the
//! bookkeeping that scores how much of each generation gets removed.

pub mod cantor;
pub mod cli;
pub mod error;
pub mod exterior;
pub mod curve;
pub mod diophantine;
pub mod flows;
pub mod lattice;

pub use error::{Error, Result};
