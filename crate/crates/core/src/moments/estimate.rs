use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::WholePlaneSample;
use crate::stats::{mean_stderr, median_of_means};

/// Blocks used by the median-of-means companion estimate.
pub const MOM_BLOCKS: usize = 16;

/// Monte Carlo estimate with its standard error.
///
/// Real-valued estimators leave the imaginary parts at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate<T> {
    pub value: Complex<T>,
    /// Standard error of the real part.
    pub stderr_re: T,
    /// Standard error of the imaginary part.
    pub stderr_im: T,
    pub n_samples: usize,
    /// Median of block means, reported for the heavy-tailed moduli moment.
    pub median_of_means: Option<T>,
    pub kappa: T,
    pub horizon: T,
    pub seed: u64,
}

impl<T: Real> MomentEstimate<T> {
    /// Combined standard error `√(se_re² + se_im²)`.
    pub fn stderr(&self) -> T {
        self.stderr_re.hypot(self.stderr_im)
    }

    /// True if `target` lies within `max(k·stderr, floor)` componentwise.
    pub fn agrees_with(&self, target: Complex<T>, k: T, floor: T) -> bool {
        let ok = |v: T, t: T, se: T| (v - t).abs() <= (k * se).max(floor);
        ok(self.value.re, target.re, self.stderr_re) && ok(self.value.im, target.im, self.stderr_im)
    }
}

fn header<T: Real>(samples: &[WholePlaneSample<T>]) -> Result<(T, T, u64)> {
    let first = samples.first().ok_or_else(|| Error::usage("no samples"))?;
    if samples
        .iter()
        .any(|s| s.kappa != first.kappa || s.points.len() != first.points.len())
    {
        return Err(Error::usage("samples come from different configurations"));
    }
    Ok((first.kappa, first.horizon, first.seed))
}

/// Locates `z` in every sample; `None` stands for the origin when it was not
/// evolved (the flow fixes it, so every integrand equals 1 there).
fn locate<T: Real>(samples: &[WholePlaneSample<T>], z: Complex<T>) -> Result<Option<usize>> {
    let idx = match samples[0].index_of(z) {
        Ok(i) => i,
        Err(_) if z.norm_sqr() == T::zero() => return Ok(None),
        Err(e) => return Err(e),
    };
    if samples
        .iter()
        .any(|s| s.points.get(idx) != Some(&samples[0].points[idx]))
    {
        return Err(Error::usage("samples disagree on their evaluation points"));
    }
    Ok(Some(idx))
}

fn complex_estimate<T: Real>(
    samples: &[WholePlaneSample<T>],
    values: &[Complex<T>],
) -> Result<MomentEstimate<T>> {
    let (kappa, horizon, seed) = header(samples)?;
    let (re, se_re) = mean_stderr(values.iter().map(|v| v.re));
    let (im, se_im) = mean_stderr(values.iter().map(|v| v.im));
    Ok(MomentEstimate {
        value: Complex::new(re, im),
        stderr_re: se_re,
        stderr_im: se_im,
        n_samples: values.len(),
        median_of_means: None,
        kappa,
        horizon,
        seed,
    })
}

fn one_point_values<T: Real>(
    samples: &[WholePlaneSample<T>],
    idx: Option<usize>,
    p: T,
    q: T,
) -> Vec<Complex<T>> {
    match idx {
        Some(i) => samples
            .iter()
            .map(|s| s.one_point_integrand(i, p, q))
            .collect(),
        None => vec![Complex::new(T::one(), T::zero()); samples.len()],
    }
}

/// Estimates `E(f'(z)^{p/2} (f(z)/z)^{-q/2})`.
pub fn estimate_one_point<T: Real>(
    samples: &[WholePlaneSample<T>],
    p: T,
    q: T,
    z: Complex<T>,
) -> Result<MomentEstimate<T>> {
    header(samples)?;
    let idx = locate(samples, z)?;
    complex_estimate(samples, &one_point_values(samples, idx, p, q))
}

/// Estimates `E(|z|^q |f'(z)|^p / |f(z)|^q)`.
pub fn estimate_moduli<T: Real>(
    samples: &[WholePlaneSample<T>],
    p: T,
    q: T,
    z: Complex<T>,
) -> Result<MomentEstimate<T>> {
    header(samples)?;
    let values: Vec<T> = match locate(samples, z)? {
        Some(i) => samples
            .iter()
            .map(|s| s.moduli_integrand(i, p, q))
            .collect(),
        None => vec![T::one(); samples.len()],
    };
    let lifted: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    let mut est = complex_estimate(samples, &lifted)?;
    est.median_of_means = Some(median_of_means(&values, MOM_BLOCKS));
    Ok(est)
}

/// Estimates `E(X(z₁) conj(X(z₂)))` with `X = f'^{p/2} (f/z)^{-q/2}`.
pub fn estimate_two_point<T: Real>(
    samples: &[WholePlaneSample<T>],
    p: T,
    q: T,
    z1: Complex<T>,
    z2: Complex<T>,
) -> Result<MomentEstimate<T>> {
    header(samples)?;
    let x1 = one_point_values(samples, locate(samples, z1)?, p, q);
    let x2 = one_point_values(samples, locate(samples, z2)?, p, q);
    let prod: Vec<Complex<T>> = x1.iter().zip(&x2).map(|(a, b)| a * b.conj()).collect();
    complex_estimate(samples, &prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{sample_batch, SimConfig};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn batch(n: usize) -> Vec<WholePlaneSample<f64>> {
        let cfg = SimConfig::new(2.0)
            .with_horizon(2.0)
            .with_dt(0.01)
            .with_seed(8);
        sample_batch(&cfg, &[c(0.5, 0.0), c(0.2, 0.1)], n).unwrap()
    }

    #[test]
    fn zero_exponents_are_exact() {
        let s = batch(10);
        let e = estimate_one_point(&s, 0.0, 0.0, c(0.5, 0.0)).unwrap();
        assert_eq!(e.value, c(1.0, 0.0));
        assert_eq!(e.stderr(), 0.0);
        let m = estimate_moduli(&s, 0.0, 0.0, c(0.5, 0.0)).unwrap();
        assert_eq!(m.value, c(1.0, 0.0));
        assert_eq!(m.median_of_means, Some(1.0));
    }

    #[test]
    fn two_point_at_origin_reduces_to_one_point() {
        let s = batch(10);
        let a = estimate_two_point(&s, 1.75, 1.5, c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        let b = estimate_one_point(&s, 1.75, 1.5, c(0.5, 0.0)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn diagonal_two_point_is_moduli() {
        let s = batch(10);
        let a = estimate_two_point(&s, 1.75, 1.5, c(0.2, 0.1), c(0.2, 0.1)).unwrap();
        let b = estimate_moduli(&s, 1.75, 1.5, c(0.2, 0.1)).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
    }

    #[test]
    fn missing_points_are_usage_errors() {
        let s = batch(3);
        assert!(matches!(
            estimate_one_point(&s, 1.0, 1.0, c(0.4, 0.0)),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            estimate_two_point(&s, 1.0, 1.0, c(0.5, 0.0), c(0.1, 0.0)),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            estimate_one_point::<f64>(&[], 1.0, 1.0, c(0.5, 0.0)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn tolerance_rule() {
        let e = MomentEstimate {
            value: c(0.5, 0.0),
            stderr_re: 0.001,
            stderr_im: 0.0,
            n_samples: 1,
            median_of_means: None,
            kappa: 2.0,
            horizon: 8.0,
            seed: 0,
        };
        assert!(e.agrees_with(c(0.509, 0.0), 3.0, 0.01));
        assert!(!e.agrees_with(c(0.52, 0.0), 3.0, 0.01));
    }
}
