//! Exact scalars and dense univariate polynomials.

mod poly;
mod rational;

pub use poly::Poly;
pub use rational::{rat, Rational};
