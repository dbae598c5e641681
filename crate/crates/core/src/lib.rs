//! Whole-plane SLE laboratory.
//!
//! * [`sim`] samples driving paths and integrates the reverse radial Loewner flow.
//! * [`moments`] holds closed-form mixed moments and Monte Carlo estimators.
//! * [`spectrum`] evaluates the generalized integral means spectrum and its phase diagram.
//! * [`residual`] checks candidate solutions against the moment ODE and PDE.

pub mod error;
pub mod moments;
pub mod residual;
pub mod scalar;
pub mod sim;
pub mod spectrum;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type SimConfig64 = sim::SimConfig<f64>;
pub type DrivingPath64 = sim::DrivingPath<f64>;
pub type FlowState64 = sim::FlowState<f64>;
pub type WholePlaneSample64 = sim::WholePlaneSample<f64>;
pub type MomentEstimate64 = moments::MomentEstimate<f64>;
pub type LogCoeffStats64 = moments::LogCoeffStats<f64>;
pub type MeansScan64 = moments::MeansScan<f64>;
pub type SpectrumPoint64 = spectrum::SpectrumPoint<f64>;
pub type SpecialPoints64 = spectrum::SpecialPoints<f64>;
pub type GridSpec64 = spectrum::GridSpec<f64>;
pub type UniversalModel64 = spectrum::UniversalModel<f64>;
pub type SeedSystems64 = residual::SeedSystems<f64>;
