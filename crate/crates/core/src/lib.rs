//! Conceptual cost estimation for field canal improvement projects: expert
//! survey screening, statistical driver selection, parametric cost models,
//! fuzzy rule systems and scenario analysis.

pub mod bench;
pub mod data;
pub mod error;
pub mod fixtures;
pub mod fuzzy;
pub mod linalg;
pub mod mcdm;
pub mod models;
pub mod scalar;
pub mod screening;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases of the generic kernels.
pub type Tfn = mcdm::TriangularFuzzyNumber<f64>;
pub type Mf = fuzzy::MembershipFunction<f64>;
pub type FuzzySetF64 = fuzzy::FuzzySet<f64>;
pub type PartitionF64 = fuzzy::Partition<f64>;
pub type RuleBaseF64 = fuzzy::RuleBase<f64>;
pub type MatrixF64 = linalg::Matrix<f64>;
