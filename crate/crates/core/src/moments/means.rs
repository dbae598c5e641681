use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{closed_moduli, parabola_point};
use crate::scalar::{from_usize, lit, Real};
use crate::sim::WholePlaneSample;

pub const DEFAULT_ANGULAR_POINTS: usize = 4096;

/// What is integrated around each circle: `E(|f'(z)|^p / |f(z)|^q)`.
pub enum MeansIntegrand<'a, T> {
    /// Closed form on the integrable parabola with parameter `gamma`.
    ClosedForm { gamma: T },
    /// Sample average; the samples must contain every grid point.
    MonteCarlo(&'a [WholePlaneSample<T>]),
    /// Any function of `z`.
    Function(&'a (dyn Fn(Complex<T>) -> T + Sync)),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    Fitted,
    /// `|1−z|^{2γ}` is not integrable on the unit circle; the tip dominates.
    TipDominated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeansScan<T> {
    pub radii: Vec<T>,
    pub integrals: Vec<T>,
    pub beta: Option<T>,
    pub status: ScanStatus,
}

/// Radii `1 − 10^{-k}` log-spaced from `1 − r_lo` down to `1 − r_hi`.
pub fn log_radius_grid<T: Real>(r_lo: T, r_hi: T, n: usize) -> Vec<T> {
    let (a, b) = ((T::one() - r_lo).ln(), (T::one() - r_hi).ln());
    let last = from_usize::<T>(n.max(2) - 1);
    (0..n.max(2))
        .map(|k| T::one() - (a + (b - a) * from_usize::<T>(k) / last).exp())
        .collect()
}

/// Angular integrals `∫ E(|f'|^p/|f|^q)(re^{iθ}) dθ` and the fitted growth exponent.
///
/// The exponent is the least-squares slope of `log I(r)` against `−log(1−r)`
/// over the upper half of `radii`.
pub fn integral_means_scan<T: Real>(
    integrand: &MeansIntegrand<'_, T>,
    p: T,
    q: T,
    kappa: T,
    radii: &[T],
    angular_points: usize,
) -> Result<MeansScan<T>> {
    if radii.is_empty()
        || radii.windows(2).any(|w| !(w[0] < w[1]))
        || radii[0] <= T::zero()
        || radii[radii.len() - 1] >= T::one()
    {
        return Err(Error::usage("radii must be increasing inside (0, 1)"));
    }
    if angular_points < 3 {
        return Err(Error::usage("need at least three angular points"));
    }
    if let MeansIntegrand::ClosedForm { gamma } = integrand {
        let (pp, qq) = parabola_point(kappa, *gamma);
        let scale = T::one() + p.abs() + q.abs();
        if (pp - p).abs() > lit::<T>(1e-9) * scale || (qq - q).abs() > lit::<T>(1e-9) * scale {
            return Err(Error::usage(format!(
                "(p, q) = ({p}, {q}) is not the parabola point of gamma = {gamma}"
            )));
        }
        if lit::<T>(2.0) * *gamma <= -T::one() {
            return Ok(MeansScan {
                radii: radii.to_vec(),
                integrals: Vec::new(),
                beta: None,
                status: ScanStatus::TipDominated,
            });
        }
    }

    let step = T::TAU() / from_usize::<T>(angular_points);
    let mut integrals = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut total = T::zero();
        for j in 0..angular_points {
            let z = Complex::from_polar(r, step * from_usize::<T>(j));
            let v = match integrand {
                MeansIntegrand::ClosedForm { gamma } => closed_moduli(z, kappa, *gamma) / r.powf(q),
                MeansIntegrand::Function(f) => f(z),
                MeansIntegrand::MonteCarlo(samples) => monte_carlo_value(samples, z, p, q)?,
            };
            total = total + v;
        }
        // periodic trapezoid rule
        integrals.push(total * step);
    }
    let beta = fit_slope(radii, &integrals);
    Ok(MeansScan {
        radii: radii.to_vec(),
        integrals,
        beta: Some(beta),
        status: ScanStatus::Fitted,
    })
}

fn monte_carlo_value<T: Real>(
    samples: &[WholePlaneSample<T>],
    z: Complex<T>,
    p: T,
    q: T,
) -> Result<T> {
    let first = samples.first().ok_or_else(|| Error::usage("no samples"))?;
    let i = first.index_of(z)?;
    let sum = samples
        .iter()
        .fold(T::zero(), |a, s| a + s.moduli_integrand(i, p, q));
    Ok(sum / from_usize::<T>(samples.len()) / z.norm().powf(q))
}

fn fit_slope<T: Real>(radii: &[T], integrals: &[T]) -> T {
    let start = radii.len() / 2;
    let xs: Vec<T> = radii[start..]
        .iter()
        .map(|&r| -(T::one() - r).ln())
        .collect();
    let ys: Vec<T> = integrals[start..].iter().map(|&v| v.ln()).collect();
    let n = from_usize::<T>(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxy = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (x - mx) * (y - my))
        .sum::<T>();
    let sxx = xs.iter().map(|&x| (x - mx) * (x - mx)).sum::<T>();
    if sxx == T::zero() {
        T::zero()
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_has_zero_exponent() {
        let one = |_: Complex<f64>| 1.0;
        let radii = log_radius_grid(0.5, 0.999, 12);
        let scan = integral_means_scan(&MeansIntegrand::Function(&one), 0.0, 0.0, 2.0, &radii, 64)
            .unwrap();
        assert!(scan.beta.unwrap().abs() < 1e-12);
        assert!((scan.integrals[0] - std::f64::consts::TAU).abs() < 1e-12);
    }

    #[test]
    fn closed_form_slopes() {
        let radii = log_radius_grid(0.5, 0.999, 16);
        let scan: MeansScan<f64> = integral_means_scan(
            &MeansIntegrand::ClosedForm { gamma: 0.5 },
            1.75,
            1.5,
            6.0,
            &radii,
            4096,
        )
        .unwrap();
        assert!(
            (scan.beta.unwrap() / 0.75 - 1.0).abs() < 0.02,
            "{:?}",
            scan.beta
        );
        let scan: MeansScan<f64> = integral_means_scan(
            &MeansIntegrand::ClosedForm { gamma: 1.0 },
            2.0,
            2.0,
            2.0,
            &radii,
            4096,
        )
        .unwrap();
        assert!((scan.beta.unwrap() - 1.0).abs() < 0.02, "{:?}", scan.beta);
    }

    #[test]
    fn divergent_angular_integral_is_tip_dominated() {
        let (p, q) = parabola_point(6.0, -0.6);
        let radii = log_radius_grid(0.5, 0.99, 8);
        let scan = integral_means_scan(
            &MeansIntegrand::ClosedForm { gamma: -0.6 },
            p,
            q,
            6.0,
            &radii,
            64,
        )
        .unwrap();
        assert_eq!(scan.status, ScanStatus::TipDominated);
        assert_eq!(scan.beta, None);
    }

    #[test]
    fn closed_form_requires_matching_exponents() {
        let radii = [0.5, 0.9];
        assert!(integral_means_scan(
            &MeansIntegrand::ClosedForm { gamma: 0.5 },
            1.0,
            1.0,
            6.0,
            &radii,
            64
        )
        .is_err());
        assert!(integral_means_scan(
            &MeansIntegrand::ClosedForm { gamma: 0.5 },
            1.75,
            1.5,
            6.0,
            &[0.9, 0.5],
            64
        )
        .is_err());
    }
}
