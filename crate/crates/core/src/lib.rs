//! Exact tools for Laurent polynomial Landau-Ginzburg models of Fano
//! threefolds: constant-term series, Picard-Fuchs operators, Newton
//! polytopes and critical values.

pub mod catalog;
pub mod critical;
pub mod laurent;
pub mod linalg;
pub mod parse;
pub mod periods;
pub mod pfops;
pub mod polytope;
pub mod scalar;
pub mod verify;

use num_rational::BigRational;

pub use laurent::{Axis, Exponent, Laurent, UnimodularMatrix};
pub use parse::parse;
pub use polytope::{LatticePolytope, RationalPolytope};

pub type LaurentPolynomial = Laurent<BigRational>;
pub type PowerSeries = periods::Series<BigRational>;
pub type DiffOperator = pfops::DiffOp<BigRational>;
