use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{whole_plane_sample_at, SimConfig};
use crate::stats::mean_stderr;

/// Moduli moment estimate at one horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityRow<T> {
    pub horizon: T,
    pub estimate: T,
    pub stderr: T,
    pub n_samples: usize,
}

/// Tracks `E(|z|^q |f'|^p / |f|^q)` across increasing horizons.
///
/// Each sample is read at every horizon from one driver, so rows are
/// positively correlated and pooled standard errors are conservative.
pub fn stationarity_diagnostic<T: Real>(
    cfg: &SimConfig<T>,
    z: Complex<T>,
    horizons: &[T],
    n: usize,
    p: T,
    q: T,
) -> Result<Vec<StationarityRow<T>>> {
    if horizons.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::usage("horizons must be strictly increasing"));
    }
    if n == 0 || horizons.is_empty() {
        return Ok(Vec::new());
    }
    cfg.validate()?;
    let first = cfg.stream_id;
    let values: Vec<Result<Vec<T>>> = (0..n as u64)
        .into_par_iter()
        .map(|k| {
            let samples = whole_plane_sample_at(&cfg.with_stream(first + k), &[z], horizons)?;
            Ok(samples
                .iter()
                .map(|s| s.moduli_integrand(0, p, q))
                .collect())
        })
        .collect();
    let values: Vec<Vec<T>> = values.into_iter().collect::<Result<_>>()?;
    Ok(horizons
        .iter()
        .enumerate()
        .map(|(j, &h)| {
            let (mean, stderr) = mean_stderr(values.iter().map(|v| v[j]));
            StationarityRow {
                horizon: h,
                estimate: mean,
                stderr,
                n_samples: n,
            }
        })
        .collect())
}
