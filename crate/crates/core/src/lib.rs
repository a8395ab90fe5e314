//! Exact-arithmetic engine for q-Zhedanov algebras of q-Askey families.
//!
//! - [`exactfield`]: rationals and polynomials.
//! - [`qseries`]: q-shifted factorials and terminating series.
//! - [`verdestar`]: Verde-Star data, Newton expansions, the operator `L`.
//! - [`zhedanov`]: sequence operators, structure constants, vanishing patterns.

pub mod catalog;
pub mod error;
pub mod exactfield;
pub mod qseries;
pub mod report;
pub mod scheme;
pub mod verdestar;
pub mod zhedanov;

pub use error::Error;
pub use exactfield::{rat, Poly, Rational};
pub use report::Report;
