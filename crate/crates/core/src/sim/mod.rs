//! Driving paths and the reverse radial Loewner flow.

mod config;
mod diagnostic;
mod driver;
mod flow;
mod sample;

pub use config::{SimConfig, DEFAULT_DT, DEFAULT_HORIZON, DEFAULT_R_MAX, DEFAULT_SINGULAR_DELTA};
pub use diagnostic::{stationarity_diagnostic, StationarityRow};
pub use driver::{sample_driver, stream_rng, DrivingPath};
pub use flow::{evolve, evolve_checkpoints, FlowState};
pub use sample::{
    sample_batch, whole_plane_sample, whole_plane_sample_at, SampleRow, WholePlaneSample,
};
