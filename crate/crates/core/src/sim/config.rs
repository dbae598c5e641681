use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_HORIZON: f64 = 8.0;
pub const DEFAULT_R_MAX: f64 = 0.9;
pub const DEFAULT_SINGULAR_DELTA: f64 = 0.1;

/// Parameters of one reverse radial Loewner run.
///
/// `seed` selects the generator and `stream_id` the independent substream
/// within it, so a batch of samples is addressed by `(seed, 0..n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<T> {
    pub kappa: T,
    /// Flow time `T` at which `e^T f̃_T` is read off.
    pub horizon: T,
    /// Brownian grid step.
    pub dt: T,
    pub seed: u64,
    pub stream_id: u64,
    /// Distance to the driving point below which steps are sub-cycled.
    pub singular_delta: T,
    /// Largest accepted `|z|`.
    pub r_max: T,
}

impl<T: Real> SimConfig<T> {
    /// Default horizon, step and guards for the given `kappa`.
    pub fn new(kappa: T) -> Self {
        SimConfig {
            kappa,
            horizon: lit(DEFAULT_HORIZON),
            dt: lit(DEFAULT_DT),
            seed: 0,
            stream_id: 0,
            singular_delta: lit(DEFAULT_SINGULAR_DELTA),
            r_max: lit(DEFAULT_R_MAX),
        }
    }

    pub fn with_horizon(mut self, horizon: T) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_stream(mut self, stream_id: u64) -> Self {
        self.stream_id = stream_id;
        self
    }

    pub fn with_r_max(mut self, r_max: T) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_singular_delta(mut self, delta: T) -> Self {
        self.singular_delta = delta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: T| x.is_finite();
        if !(finite(self.kappa) && self.kappa > T::zero()) {
            return Err(Error::config(format!(
                "kappa must be > 0, got {}",
                self.kappa
            )));
        }
        if !(finite(self.horizon) && self.horizon > T::zero()) {
            return Err(Error::config(format!(
                "horizon must be > 0, got {}",
                self.horizon
            )));
        }
        if !(finite(self.dt) && self.dt > T::zero()) {
            return Err(Error::config(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.dt > self.horizon {
            return Err(Error::config(format!(
                "dt ({}) must not exceed the horizon ({})",
                self.dt, self.horizon
            )));
        }
        if !(self.singular_delta > T::zero() && self.singular_delta < T::one()) {
            return Err(Error::config(format!(
                "singular_delta must lie in (0,1), got {}",
                self.singular_delta
            )));
        }
        if !(self.r_max > T::zero() && self.r_max < T::one()) {
            return Err(Error::config(format!(
                "r_max must lie in (0,1), got {}",
                self.r_max
            )));
        }
        Ok(())
    }

    /// Number of Brownian steps covering `[0, horizon]`.
    pub fn n_steps(&self) -> usize {
        let ratio = (self.horizon / self.dt).to_f64().unwrap_or(f64::NAN);
        // tolerate 8.0 / 1e-3 = 8000.000000000001
        let n = (ratio - 1e-9 * ratio.max(1.0)).ceil();
        (n.max(1.0)) as usize
    }
}
