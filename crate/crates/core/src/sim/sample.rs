use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::sim::{evolve_checkpoints, sample_driver, FlowState, SimConfig};

/// One approximate realization of the whole-plane map at a set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WholePlaneSample<T> {
    pub seed: u64,
    pub stream_id: u64,
    pub kappa: T,
    pub horizon: T,
    pub points: Vec<Complex<T>>,
    /// `log(f(z)/z)`, well defined at `z = 0`.
    pub logratio: Vec<Complex<T>>,
    /// `log f'(z)`.
    pub logfp: Vec<Complex<T>>,
}

impl<T: Real> WholePlaneSample<T> {
    /// Builds a sample from flow states read at time `horizon`.
    pub fn from_states(cfg: &SimConfig<T>, horizon: T, states: &[FlowState<T>]) -> Self {
        let shift = Complex::new(horizon, T::zero());
        WholePlaneSample {
            seed: cfg.seed,
            stream_id: cfg.stream_id,
            kappa: cfg.kappa,
            horizon,
            points: states.iter().map(|s| s.z0).collect(),
            logratio: states.iter().map(|s| s.logratio + shift).collect(),
            logfp: states.iter().map(|s| s.logderiv + shift).collect(),
        }
    }

    /// `log f(z)` with the principal `log z`; `-∞` at the origin.
    pub fn logf(&self, i: usize) -> Complex<T> {
        let z = self.points[i];
        if z.norm_sqr() == T::zero() {
            return Complex::new(T::neg_infinity(), T::zero());
        }
        self.logratio[i] + z.ln()
    }

    /// Position of `z` among the evaluation points.
    pub fn index_of(&self, z: Complex<T>) -> Result<usize> {
        let tol = lit::<T>(1e-12) * (T::one() + z.norm());
        self.points
            .iter()
            .position(|&w| (w - z).norm() <= tol)
            .ok_or_else(|| Error::usage(format!("point {z} is not among the sample points")))
    }

    /// `f'(z)^{p/2} (f(z)/z)^{-q/2}` on the tracked branches.
    pub fn one_point_integrand(&self, i: usize, p: T, q: T) -> Complex<T> {
        let half = lit::<T>(0.5);
        (self.logfp[i].scale(p * half) - self.logratio[i].scale(q * half)).exp()
    }

    /// `|z|^q |f'(z)|^p / |f(z)|^q`.
    pub fn moduli_integrand(&self, i: usize, p: T, q: T) -> T {
        (p * self.logfp[i].re - q * self.logratio[i].re).exp()
    }
}

/// Samples one driver and reads off the map at `cfg.horizon`.
pub fn whole_plane_sample<T: Real>(
    cfg: &SimConfig<T>,
    points: &[Complex<T>],
) -> Result<WholePlaneSample<T>> {
    let path = sample_driver(cfg)?;
    let states = evolve_checkpoints(&path, cfg, points, &[cfg.horizon])?;
    Ok(WholePlaneSample::from_states(cfg, cfg.horizon, &states[0]))
}

/// Samples at several horizons from the same driver (one driver up to the last one).
pub fn whole_plane_sample_at<T: Real>(
    cfg: &SimConfig<T>,
    points: &[Complex<T>],
    horizons: &[T],
) -> Result<Vec<WholePlaneSample<T>>> {
    let last = *horizons
        .last()
        .ok_or_else(|| Error::usage("no horizons given"))?;
    let cfg = cfg.with_horizon(last);
    let path = sample_driver(&cfg)?;
    let states = evolve_checkpoints(&path, &cfg, points, horizons)?;
    Ok(horizons
        .iter()
        .zip(&states)
        .map(|(&h, s)| WholePlaneSample::from_states(&cfg, h, s))
        .collect())
}

/// Independent samples on streams `cfg.stream_id .. cfg.stream_id + n`, in stream order.
///
/// Work is spread over the current rayon pool; the output does not depend on
/// the number of workers.
pub fn sample_batch<T: Real>(
    cfg: &SimConfig<T>,
    points: &[Complex<T>],
    n: usize,
) -> Result<Vec<WholePlaneSample<T>>> {
    cfg.validate()?;
    let first = cfg.stream_id;
    let results: Vec<Result<WholePlaneSample<T>>> = (0..n as u64)
        .into_par_iter()
        .map(|k| whole_plane_sample(&cfg.with_stream(first + k), points))
        .collect();
    results.into_iter().collect()
}

/// Row of the sample dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub stream_id: u64,
    pub z_re: f64,
    pub z_im: f64,
    pub logf_re: f64,
    pub logf_im: f64,
    pub logfp_re: f64,
    pub logfp_im: f64,
}

impl<T: Real> WholePlaneSample<T> {
    pub fn rows(&self) -> Vec<SampleRow> {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        (0..self.points.len())
            .map(|i| {
                let lf = self.logf(i);
                SampleRow {
                    stream_id: self.stream_id,
                    z_re: f(self.points[i].re),
                    z_im: f(self.points[i].im),
                    logf_re: f(lf.re),
                    logf_im: f(lf.im),
                    logfp_re: f(self.logfp[i].re),
                    logfp_im: f(self.logfp[i].im),
                }
            })
            .collect()
    }
}
