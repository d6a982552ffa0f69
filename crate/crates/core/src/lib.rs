//! A desk-scale engine for first-order graded model theory over finite
//! UL-chains.
//!
//! The crate evaluates graded first-order formulas in finite structures,
//! decides relativized semantic consequence and tableau satisfiability by
//! exhaustive search, and runs the classical model-theoretic constructions
//! (Henkin completion, elementary chains and unions, type realization,
//! saturation steps) at finite scale. All arithmetic is exact: truth values
//! are carrier indices of an explicit finite chain, never floats.
//!
//! Modules:
//!
//! - [`algebra`]: finite UL-chains, derived residua, axiom verification.
//! - [`syntax`]: signatures, terms, formulas, parser/printer, enumeration.
//! - [`semantics`]: structures, evaluation, models, relativized consequence.
//! - [`tableaux`]: tableaux, satisfiability, consistency, Henkin completion.
//! - [`modeltheory`]: substructures, elementary chains, unions, diagrams.
//! - [`types`]: types of tableaux and models, realization, saturation.
//!
//! Everything is deterministic: enumeration orders are fixed, searches
//! report least witnesses, and repeated runs yield identical results.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod modeltheory;
pub mod semantics;
pub mod syntax;
pub mod tableaux;
pub mod types;
mod util;

pub use error::{Error, Result};
