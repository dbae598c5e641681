use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// Coefficients of `P(∂)[(1−z)^α] = A·φ_α + B·φ_{α−1} + C·φ_{α−2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffTriple<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> CoeffTriple<T> {
    pub fn new(p: T, q: T, alpha: T, kappa: T) -> Self {
        CoeffTriple {
            a: coeff_a(p, q, alpha, kappa),
            b: coeff_b(q, alpha, kappa),
            c: coeff_c(p, alpha, kappa),
        }
    }

    pub fn sum(&self) -> T {
        self.a + self.b + self.c
    }

    /// `A − C`, zero exactly when `2p − q = (1 + κ/2)α`.
    pub fn parabola_condition(&self) -> T {
        self.a - self.c
    }
}

/// `A = p − q + α − (κ/2)α²`.
pub fn coeff_a<T: Real>(p: T, q: T, alpha: T, kappa: T) -> T {
    p - q + alpha - kappa * lit(0.5) * alpha * alpha
}

/// `B = q − (3 + κ/2)α + κα²`.
pub fn coeff_b<T: Real>(q: T, alpha: T, kappa: T) -> T {
    q - (lit::<T>(3.0) + kappa * lit(0.5)) * alpha + kappa * alpha * alpha
}

/// `C = −p + (2 + κ/2)α − (κ/2)α²`.
pub fn coeff_c<T: Real>(p: T, alpha: T, kappa: T) -> T {
    -p + (lit::<T>(2.0) + kappa * lit(0.5)) * alpha - kappa * lit(0.5) * alpha * alpha
}

pub fn abc_check<T: Real>(p: T, q: T, alpha: T, kappa: T) -> (CoeffTriple<T>, T) {
    let t = CoeffTriple::new(p, q, alpha, kappa);
    (t, t.sum())
}

/// Spectrum function `β(p, γ) = κγ² − (2 + κ/2)γ + p`.
pub fn spectrum_function<T: Real>(p: T, gamma: T, kappa: T) -> T {
    kappa * gamma * gamma - (lit::<T>(2.0) + kappa * lit(0.5)) * gamma + p
}

/// Dual parameter `γ' = 2/κ + 1/2 − γ`.
pub fn dual_gamma<T: Real>(gamma: T, kappa: T) -> T {
    lit::<T>(2.0) / kappa + lit(0.5) - gamma
}

/// `|β(p, γ) − β(p, γ')|`.
pub fn duality_check<T: Real>(p: T, gamma: T, kappa: T) -> T {
    (spectrum_function(p, gamma, kappa) - spectrum_function(p, dual_gamma(gamma, kappa), kappa))
        .abs()
}
