//! Weight enumerators, growth-rate bounds, BEC density evolution and
//! finite-length simulation for LDPC-GM codes: an outer Gallager LDPC code
//! serially concatenated with an inner rate-1 LDGM code.
//!
//! The numeric modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix them to `f64`. The enumerator is exact.

// NaN-rejecting checks are written as `!(x > 0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod asymptotics;
pub mod density_evolution;
pub mod enumerator;
pub mod error;
pub mod optimize;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod simulator;

pub use error::{Error, Result};
pub use scalar::Real;

pub use enumerator::{LdgmParams, LdpcParams, WeightDistribution};
pub use poly::{ExactPolynomial, Polynomial};
pub use simulator::{CodeInstance, DecoderKind, SparseBinaryMatrix};

pub type GrowthRateQuery = asymptotics::GrowthRateQuery<f64>;
pub type Channel = asymptotics::Channel<f64>;
pub type DegreeDistribution = density_evolution::DegreeDistribution<f64>;
pub type EnsembleSpec = density_evolution::EnsembleSpec<f64>;
pub type DeState = density_evolution::DeState<f64>;
pub type InnerCode = density_evolution::InnerCode<f64>;
