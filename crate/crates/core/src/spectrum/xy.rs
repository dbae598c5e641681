use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectrum::delta0_abscissa;

/// `(p, q) ↦ (x, y) = (√((4+κ)² − 8κp), √(1 + 2κ(p−q)))` on the open sector
/// where both roots are positive.
pub fn xy_forward<T: Real>(p: T, q: T, kappa: T) -> Result<(T, T)> {
    let a = lit::<T>(4.0) + kappa;
    let x2 = a * a - lit::<T>(8.0) * kappa * p;
    let y2 = T::one() + lit::<T>(2.0) * kappa * (p - q);
    if !(x2 > T::zero()) {
        return Err(Error::domain(format!(
            "Delta0 violated: p = {p} must be < {}",
            delta0_abscissa(kappa)
        )));
    }
    if !(y2 > T::zero()) {
        return Err(Error::domain(format!(
            "Delta1 violated: 1 + 2κ(p−q) = {y2} must be > 0"
        )));
    }
    Ok((x2.sqrt(), y2.sqrt()))
}

pub fn xy_inverse<T: Real>(x: T, y: T, kappa: T) -> Result<(T, T)> {
    if !(x > T::zero() && y > T::zero()) {
        return Err(Error::domain(format!(
            "x and y must be positive, got ({x}, {y})"
        )));
    }
    let a = lit::<T>(4.0) + kappa;
    let k8 = lit::<T>(8.0) * kappa;
    let p = (a * a - x * x) / k8;
    let q = (lit::<T>(4.0) + a * a - x * x - lit::<T>(4.0) * y * y) / k8;
    Ok((p, q))
}

/// The four spectra written in `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XySpectra<T> {
    pub tip: T,
    pub bulk: T,
    pub lin: T,
    pub mixed: T,
}

pub fn xy_spectra<T: Real>(x: T, y: T, kappa: T) -> XySpectra<T> {
    let a = lit::<T>(4.0) + kappa;
    let k8 = lit::<T>(8.0) * kappa;
    let x2 = x * x;
    XySpectra {
        tip: x2 / k8 - x / lit(4.0) - a * a / k8 + kappa / lit(4.0),
        bulk: x2 / k8 - a * x / (lit::<T>(4.0) * kappa) + a * a / k8,
        lin: -x2 / k8 + a * a / (lit::<T>(16.0) * kappa),
        mixed: -x2 / k8 + y * y / kappa - y / lit(2.0) + a * a / k8 - lit(0.5) - kappa.recip(),
    }
}

/// Factors `(2y + x − κ − 2, 2y − x + 2)` whose product is `4κ(β₁ − β₀)`.
pub fn mixed_bulk_factors<T: Real>(x: T, y: T, kappa: T) -> (T, T) {
    let two = lit::<T>(2.0);
    (two * y + x - kappa - two, two * y - x + two)
}

/// Quartic as a hyperbola centred at `(κ/2, κ/4)`:
/// `4(y − κ/4)² − (x − κ/2)² + 6(κ+2)`, equal to `4κ(β₁ − β_tip)`.
pub fn quartic_hyperbola_residual<T: Real>(x: T, y: T, kappa: T) -> T {
    let dy = y - kappa / lit(4.0);
    let dx = x - kappa / lit(2.0);
    lit::<T>(4.0) * dy * dy - dx * dx + lit::<T>(6.0) * (kappa + lit(2.0))
}

/// Line `a·x + b·y + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyLine<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// Asymptotic data of the quartic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticAsymptotes<T> {
    pub center: (T, T),
    /// `x − 2y = 0`, approached by the upper (tip-relevant) component.
    pub upper: XyLine<T>,
    /// `x + 2y − κ = 0`.
    pub lower: XyLine<T>,
    /// The tip branch approaches `q = 2p − line_offset` in the `(p, q)` plane.
    pub line_offset: T,
    /// Limit of `(2p − q − 1/4)² − κ(p − q)/2` along the parabolic direction.
    pub parabola_constant: T,
    /// Whether the lower component meets the sector `x, y > 0` far out, i.e. `κ > 12 + 8√3`.
    pub lower_component_relevant: bool,
}

pub fn quartic_asymptotes<T: Real>(kappa: T) -> QuarticAsymptotes<T> {
    let two = lit::<T>(2.0);
    QuarticAsymptotes {
        center: (kappa / two, kappa / lit(4.0)),
        upper: XyLine {
            a: T::one(),
            b: -two,
            c: T::zero(),
        },
        lower: XyLine {
            a: T::one(),
            b: two,
            c: -kappa,
        },
        line_offset: (kappa + two) / lit(8.0),
        parabola_constant: lit::<T>(0.625) + lit::<T>(3.0) * kappa / lit(16.0),
        lower_component_relevant: kappa > lit::<T>(12.0) + lit::<T>(8.0) * lit::<T>(3.0).sqrt(),
    }
}
