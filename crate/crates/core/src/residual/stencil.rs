use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Step used by the residual checks unless overridden.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Step at which the convergence ratio is measured; at the default step the
/// truncation error sits below roundoff.
pub const CONVERGENCE_STEP: f64 = 1e-2;

pub(crate) fn principal_pow<T: Real>(w: Complex<T>, a: T) -> Complex<T> {
    (w.ln().scale(a)).exp()
}

pub(crate) fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

pub(crate) fn check_step<T: Real>(h: T) -> Result<()> {
    if !(h > T::zero() && h <= lit(0.05)) {
        return Err(Error::domain(format!("step h = {h} must lie in (0, 0.05]")));
    }
    Ok(())
}

/// `|w| < 1` and `|1 − w| ≥ 10h`, so the stencil stays inside the disk and away from `1`.
pub(crate) fn check_point<T: Real>(w: Complex<T>, h: T, name: &str) -> Result<()> {
    if !(w.norm() + h < T::one()) {
        return Err(Error::domain(format!(
            "{name} = {w} and its stencil must lie inside the unit disk"
        )));
    }
    if (one::<T>() - w).norm() < lit::<T>(10.0) * h {
        return Err(Error::domain(format!(
            "{name} = {w} is within 10h of the singular point 1"
        )));
    }
    Ok(())
}

/// `(z∂G, (z∂)²G)` from central differences along the real axis.
pub(crate) fn euler_derivs<T: Real>(
    g: &dyn Fn(Complex<T>) -> Complex<T>,
    z: Complex<T>,
    h: T,
) -> (Complex<T>, Complex<T>) {
    let hc = Complex::new(h, T::zero());
    let (gp, g0, gm) = (g(z + hc), g(z), g(z - hc));
    let d1 = (gp - gm).unscale(h + h);
    let d2 = (gp - g0 - g0 + gm).unscale(h * h);
    (z * d1, z * d1 + z * z * d2)
}

/// Rejects evaluators whose real- and imaginary-direction derivatives disagree.
pub(crate) fn cauchy_riemann_probe<T: Real>(
    g: &dyn Fn(Complex<T>) -> Complex<T>,
    z: Complex<T>,
    h: T,
) -> Result<()> {
    let hr = Complex::new(h, T::zero());
    let hi = Complex::new(T::zero(), h);
    let dr = (g(z + hr) - g(z - hr)).unscale(h + h);
    let di = (g(z + hi) - g(z - hi)) / (hi + hi);
    let scale = T::one() + dr.norm() + di.norm();
    if (dr - di).norm() > lit::<T>(1e-5) * scale {
        return Err(Error::usage(format!(
            "candidate is not holomorphic near {z}: ∂x = {dr}, −i∂y = {di}"
        )));
    }
    Ok(())
}

/// Residuals at `h` and `h/2` and the implied convergence order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderReport<T> {
    pub h: T,
    pub residual_h: T,
    pub residual_half: T,
    pub ratio: T,
    pub order: T,
}

pub fn order_report<T: Real>(
    h: T,
    mut residual: impl FnMut(T) -> Result<Complex<T>>,
) -> Result<OrderReport<T>> {
    let r1 = residual(h)?.norm();
    let r2 = residual(h * lit(0.5))?.norm();
    let ratio = r1 / r2;
    Ok(OrderReport {
        h,
        residual_h: r1,
        residual_half: r2,
        ratio,
        order: ratio.log2(),
    })
}

/// Richardson combination `(4·R(h/2) − R(h))/3` cancelling the `h²` term.
pub fn richardson<T: Real>(
    h: T,
    mut residual: impl FnMut(T) -> Result<Complex<T>>,
) -> Result<Complex<T>> {
    let r1 = residual(h)?;
    let r2 = residual(h * lit(0.5))?;
    Ok((r2.scale(lit(4.0)) - r1).unscale(lit(3.0)))
}
