use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rustfft::{FftNum, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::sim::WholePlaneSample;
use crate::stats::mean_stderr;

pub const DEFAULT_COEFF_RADIUS: f64 = 0.7;
pub const DEFAULT_FFT_SIZE: usize = 256;
pub const DEFAULT_N_MAX: usize = 10;

/// `M` equispaced points on the circle of radius `r`, starting on the positive axis.
pub fn circle_points<T: Real>(r: T, m: usize) -> Vec<Complex<T>> {
    (0..m)
        .map(|j| Complex::from_polar(r, T::TAU() * from_usize::<T>(j) / from_usize::<T>(m)))
        .collect()
}

/// Aggregates for one coefficient index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow<T> {
    pub n: usize,
    /// `Ê γ_n`.
    pub mean: Complex<T>,
    pub mean_stderr_re: T,
    pub mean_stderr_im: T,
    /// `Ê |γ_n|²`.
    pub mean_sq: T,
    pub mean_sq_stderr: T,
    /// `Ê γ_n conj(γ_{n+1})`, absent for the last index.
    pub cross: Option<Complex<T>>,
    pub cross_stderr_re: T,
    pub cross_stderr_im: T,
}

/// Statistics of the logarithmic coefficients `log(f(z)/z) = 2 Σ γ_n z^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogCoeffStats<T> {
    pub n_max: usize,
    pub radius: T,
    pub fft_size: usize,
    pub n_samples: usize,
    pub rows: Vec<CoeffRow<T>>,
    /// `r^{-2 n_max}`: factor by which per-sample errors grow in `|γ_{n_max}|²`.
    pub noise_amplification: T,
    /// `r^M`: relative size of the aliased tail in each coefficient.
    pub aliasing_factor: T,
}

impl<T: Real> LogCoeffStats<T> {
    pub fn row(&self, n: usize) -> Option<&CoeffRow<T>> {
        self.rows.get(n.checked_sub(1)?)
    }
}

/// Per-sample coefficients `γ_1 ..= γ_{n_max}` from values on the circle.
pub fn log_coeffs_of<T: Real + FftNum>(
    sample: &WholePlaneSample<T>,
    indices: &[usize],
    r: T,
    n_max: usize,
    fft: &dyn rustfft::Fft<T>,
) -> Vec<Complex<T>> {
    let m = indices.len();
    let mut buf: Vec<Complex<T>> = indices.iter().map(|&i| sample.logratio[i]).collect();
    fft.process(&mut buf);
    let scale = lit::<T>(0.5) / from_usize::<T>(m);
    (1..=n_max)
        .map(|n| buf[n].scale(scale * r.powi(-(n as i32))))
        .collect()
}

/// Extracts `γ_n` from samples evaluated at `circle_points(r, m)`.
pub fn extract_log_coeffs<T: Real + FftNum>(
    samples: &[WholePlaneSample<T>],
    r: T,
    m: usize,
    n_max: usize,
) -> Result<LogCoeffStats<T>> {
    if n_max == 0 || 2 * n_max >= m {
        return Err(Error::usage(format!(
            "aliasing guard needs 1 <= n_max < M/2, got n_max = {n_max}, M = {m}"
        )));
    }
    let first = samples.first().ok_or_else(|| Error::usage("no samples"))?;
    let indices: Vec<usize> = circle_points(r, m)
        .into_iter()
        .map(|z| first.index_of(z))
        .collect::<Result<_>>()?;
    if samples.iter().any(|s| s.points != first.points) {
        return Err(Error::usage("samples disagree on their evaluation points"));
    }
    let fft = FftPlanner::<T>::new().plan_fft_forward(m);
    let per_sample: Vec<Vec<Complex<T>>> = samples
        .iter()
        .map(|s| log_coeffs_of(s, &indices, r, n_max, fft.as_ref()))
        .collect();

    let rows = (0..n_max)
        .map(|k| {
            let col = || per_sample.iter().map(move |g| g[k]);
            let (re, se_re) = mean_stderr(col().map(|g| g.re));
            let (im, se_im) = mean_stderr(col().map(|g| g.im));
            let (sq, se_sq) = mean_stderr(col().map(|g| g.norm_sqr()));
            let (cross, cse_re, cse_im) = if k + 1 < n_max {
                let prod = || per_sample.iter().map(move |g| g[k] * g[k + 1].conj());
                let (cr, cse_re) = mean_stderr(prod().map(|v| v.re));
                let (ci, cse_im) = mean_stderr(prod().map(|v| v.im));
                (Some(Complex::new(cr, ci)), cse_re, cse_im)
            } else {
                (None, T::zero(), T::zero())
            };
            CoeffRow {
                n: k + 1,
                mean: Complex::new(re, im),
                mean_stderr_re: se_re,
                mean_stderr_im: se_im,
                mean_sq: sq,
                mean_sq_stderr: se_sq,
                cross,
                cross_stderr_re: cse_re,
                cross_stderr_im: cse_im,
            }
        })
        .collect();

    Ok(LogCoeffStats {
        n_max,
        radius: r,
        fft_size: m,
        n_samples: samples.len(),
        rows,
        noise_amplification: r.powi(-2 * n_max as i32),
        aliasing_factor: r.powi(m as i32),
    })
}

/// Known expectations at `κ = 2`: `(E γ_n, E|γ_n|², E γ_n conj(γ_{n+1}))`.
///
/// Read off from `E|zf'/f|² = |1−z|²/(1−|z|²)` with
/// `|zf'/f|² = |1 + 2Σ nγ_n zⁿ|²`; the double sum carries `4nm γ_n γ̄_m`,
/// so the cross term is `−1/(4n(n+1))`.
pub fn kappa2_theory(n: usize) -> (f64, f64, f64) {
    let nf = n as f64;
    let mean = if n == 1 { -0.5 } else { 0.0 };
    (mean, 1.0 / (2.0 * nf * nf), -1.0 / (4.0 * nf * (nf + 1.0)))
}

/// Exact `−((n+1)/2) Σ_{k=2}^{n+1} 1/k`.
pub fn milin_expectation_exact(n: usize) -> BigRational {
    let mut h = BigRational::zero();
    for k in 2..=n + 1 {
        h += BigRational::new(BigInt::from(1), BigInt::from(k));
    }
    -(h * BigRational::new(BigInt::from(n + 1), BigInt::from(2)))
}

/// Expected Milin sum `E Σ_{m=1}^n Σ_{k=1}^m (k|γ_k|² − 1/k)` at `κ = 2`.
pub fn milin_expectation(n: usize) -> f64 {
    milin_expectation_exact(n).to_f64().unwrap_or(f64::NAN)
}

/// Milin sum built from estimated `Ê|γ_k|²`, for `n ≤ n_max`.
pub fn milin_estimate<T: Real>(stats: &LogCoeffStats<T>, n: usize) -> Result<T> {
    if n == 0 || n > stats.n_max {
        return Err(Error::usage(format!("n = {n} outside 1..={}", stats.n_max)));
    }
    let mut total = T::zero();
    for m in 1..=n {
        for k in 1..=m {
            let kf = from_usize::<T>(k);
            total = total + kf * stats.rows[k - 1].mean_sq - kf.recip();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{evolve, whole_plane_sample, DrivingPath, SimConfig, WholePlaneSample};

    #[test]
    fn milin_values() {
        assert_eq!(milin_expectation(1), -0.5);
        assert_eq!(milin_expectation(2), -1.25);
        for n in 1..30 {
            assert!(milin_expectation(n + 1) < milin_expectation(n));
        }
    }

    #[test]
    fn milin_matches_double_sum() {
        // Σ_m Σ_{k≤m} (k · 1/(2k²) − 1/k) = −Σ_m Σ_{k≤m} 1/(2k)
        for n in 1..40 {
            let mut direct = BigRational::zero();
            for m in 1..=n {
                for k in 1..=m {
                    direct -= BigRational::new(BigInt::from(1), BigInt::from(2 * k));
                }
            }
            assert_eq!(direct, milin_expectation_exact(n));
        }
    }

    #[test]
    fn aliasing_guard() {
        let cfg = SimConfig::new(2.0).with_horizon(0.5).with_dt(0.05);
        let s = whole_plane_sample(&cfg, &circle_points(0.5, 8)).unwrap();
        assert!(matches!(
            extract_log_coeffs(&[s.clone()], 0.5, 8, 4),
            Err(Error::Usage(_))
        ));
        assert!(extract_log_coeffs(&[s], 0.5, 8, 3).is_ok());
    }

    /// Series of `log(f(z)/z)` for the frozen driver, computed independently by
    /// integrating the coefficient ODEs of `w = Σ b_n z^n` and `log(w/z)`.
    fn frozen_series(t_end: f64, order: usize) -> Vec<f64> {
        // dw/dt = w(w+1)/(w−1) with real coefficients; truncated power-series
        // arithmetic, classical RK4 in time with a fine step.
        let mul = |a: &[f64], b: &[f64]| {
            let mut c = vec![0.0; order + 1];
            for i in 0..=order {
                for j in 0..=order - i {
                    c[i + j] += a[i] * b[j];
                }
            }
            c
        };
        // 1/(w − 1) = −Σ w^k as a series since w(0) = 0
        let rhs = |w: &[f64]| {
            let mut geo = vec![0.0; order + 1];
            let mut pw = vec![0.0; order + 1];
            pw[0] = 1.0;
            for _ in 0..=order {
                for i in 0..=order {
                    geo[i] -= pw[i];
                }
                pw = mul(&pw, w);
            }
            let mut wp1 = w.to_vec();
            wp1[0] += 1.0;
            mul(&mul(w, &wp1), &geo)
        };
        let mut w = vec![0.0; order + 1];
        w[1] = 1.0;
        let steps = 4000;
        let h = t_end / steps as f64;
        let axpy = |a: &[f64], s: f64, b: &[f64]| {
            a.iter().zip(b).map(|(x, y)| x + s * y).collect::<Vec<_>>()
        };
        for _ in 0..steps {
            let k1 = rhs(&w);
            let k2 = rhs(&axpy(&w, h / 2.0, &k1));
            let k3 = rhs(&axpy(&w, h / 2.0, &k2));
            let k4 = rhs(&axpy(&w, h, &k3));
            for i in 0..=order {
                w[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        // log(w/z) = log b1 + log(1 + u), u = Σ_{n≥1} (b_{n+1}/b1) z^n
        let b1 = w[1];
        let mut u = vec![0.0; order + 1];
        for n in 1..order {
            u[n] = w[n + 1] / b1;
        }
        let mut out = vec![0.0; order + 1];
        out[0] = b1.ln();
        let mut pw = u.clone();
        for k in 1..=order {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            for i in 0..=order {
                out[i] += sign * pw[i] / k as f64;
            }
            pw = mul(&pw, &u);
        }
        out
    }

    #[test]
    fn frozen_driver_reproduces_series() {
        let t = 1.0;
        let series = frozen_series(t, 24);
        let (r, m, n_max) = (0.3, 64, 6);
        let cfg = SimConfig::new(2.0).with_horizon(t).with_dt(1e-3);
        let path = DrivingPath::constant(t, 1e-3, 0.0);
        let points = circle_points(r, m);
        let states = evolve(&path, &cfg, &points).unwrap();
        let sample = WholePlaneSample::from_states(&cfg, t, &states);
        let stats = extract_log_coeffs(&[sample], r, m, n_max).unwrap();
        for n in 1..=n_max {
            // γ_n of e^t f̃_t: the constant shift only affects n = 0
            let expect = series[n] / 2.0;
            let got = stats.row(n).unwrap().mean;
            assert!(
                (got.re - expect).abs() < 1e-6 && got.im.abs() < 1e-6,
                "n={n}: {got} vs {expect}"
            );
        }
        assert!((series[0] + t).abs() < 1e-9);
    }

    #[test]
    fn theory_table() {
        assert_eq!(kappa2_theory(1), (-0.5, 0.5, -0.125));
        assert_eq!(kappa2_theory(2).1, 0.125);
    }

    /// Coefficient of `z^j z̄^k` in `(1 − z − z̄ + zz̄) Σ (zz̄)^i`.
    fn closed_coeff(j: usize, k: usize) -> f64 {
        let diag = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let shift = |a: usize, b: usize, da: usize, db: usize| {
            if a >= da && b >= db {
                diag(a - da, b - db)
            } else {
                0.0
            }
        };
        shift(j, k, 0, 0) - shift(j, k, 1, 0) - shift(j, k, 0, 1) + shift(j, k, 1, 1)
    }

    #[test]
    fn theory_matches_bivariate_expansion() {
        // E|1 + 2Σ nγ_n zⁿ|² term by term, with E γ_n γ̄_{n+k} = 0 for k ≥ 2
        for n in 1..=8usize {
            let nf = n as f64;
            let (mean, sq, cross) = kappa2_theory(n);
            assert_eq!(closed_coeff(n, 0), 2.0 * nf * mean);
            assert!((closed_coeff(n, n) - 4.0 * nf * nf * sq).abs() < 1e-15);
            assert!((closed_coeff(n + 1, n) - 4.0 * nf * (nf + 1.0) * cross).abs() < 1e-15);
            assert_eq!(closed_coeff(n + 2, n), 0.0);
        }
    }
}
