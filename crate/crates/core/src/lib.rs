//! Bi-objective miner selection for proof-of-work blockchains.
//!
//! Selecting which miners stay active is a subset-selection problem with two
//! conflicting goals: the daily energy the selected miners burn (minimised) and
//! the aggregate reputation of the selection (maximised). This crate provides
//! the problem model (synthetic instances with per-miner devices, stake and
//! mining history), the two objectives, three solvers (NSGA-II, SPEA2 and a
//! random-search baseline), the exact 2-D hypervolume indicator, and the
//! nonparametric statistics (Wilcoxon rank-sum, Vargha-Delaney A12) used to
//! compare solver performance over repeated seeded runs.
//!
//! Core math is generic over the scalar type via [`scalar::Real`]; the aliases
//! below fix `f64`, which is what the CLI and the experiment harness use.

pub mod error;
pub mod harness;
pub mod instance;
pub mod metrics;
pub mod moea;
pub mod objectives;
pub mod scalar;
pub mod stats;

pub use error::Error;

/// Concrete `f64` aliases for the generic core types.
pub type Device = instance::Device<f64>;
pub type Miner = instance::Miner<f64>;
pub type Instance = instance::Instance<f64>;
pub type ObjectiveVector = objectives::ObjectiveVector<f64>;
pub type NormalizedPoint = objectives::NormalizedPoint<f64>;
pub type Individual = moea::Individual<f64>;
pub type FrontSet = moea::FrontSet<f64>;
pub type FrontMember = moea::FrontMember<f64>;
pub type RunResult = moea::RunResult<f64>;
pub type ReferencePoint = metrics::ReferencePoint<f64>;
pub type TestReport = stats::TestReport<f64>;

/// The one seedable generator used everywhere, so identical seeds reproduce
/// identical runs on every platform.
pub type Rng = rand_chacha::ChaCha8Rng;
