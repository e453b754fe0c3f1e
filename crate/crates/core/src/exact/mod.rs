//! Exact scalars, matrices, subspaces and polynomial rings.

mod bareiss;
mod field;
mod gaussian;
mod laurent;
mod matrix;
mod mpoly;
mod poly;
mod ratfunc;
mod rational;
mod smith;
mod subspace;

pub use bareiss::{bareiss_det, bareiss_rank};
pub use field::{ExactDivRing, Field, Ring};
pub use gaussian::GaussianRational;
pub use laurent::{Laurent, LaurentMatrix};
pub use matrix::{Matrix, Rref};
pub use mpoly::MPoly;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use smith::{smith_form, SmithForm};
pub use subspace::Subspace;
