//! Exact computations around weight filtrations of commuting nilpotent
//! tuples, partial Koszul complexes and twistor bundles on the projective line.

pub mod cli;
pub mod error;
pub mod exact;
pub mod filtration;
pub mod generality;
pub mod json;
pub mod koszul;
pub mod models;
pub mod nilpotent;
pub mod twistor;

pub use error::{Error, Result};
