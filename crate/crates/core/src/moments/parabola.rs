use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Root of the quadratic `p(γ)` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Minus,
    Plus,
}

/// Exponent pair `(p, q)` of the mixed moment `E(|f'|^p / |f|^q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec<T> {
    pub p: T,
    pub q: T,
    /// Parameter along the integrable parabola, when `(p, q)` lies on it.
    pub gamma: Option<T>,
}

impl<T: Real> MomentSpec<T> {
    pub fn new(p: T, q: T) -> Self {
        MomentSpec { p, q, gamma: None }
    }

    /// The point of the integrable parabola with parameter `gamma`.
    pub fn on_parabola(kappa: T, gamma: T) -> Self {
        let (p, q) = parabola_point(kappa, gamma);
        MomentSpec {
            p,
            q,
            gamma: Some(gamma),
        }
    }

    /// Attaches the parabola parameter if `(p, q)` lies on the parabola.
    pub fn with_gamma_for(mut self, kappa: T) -> Self {
        self.gamma = parabola_gamma_of(kappa, self.p, self.q);
        self
    }

    /// `q/p − 1`, undefined at `p = 0`.
    pub fn sigma(&self) -> Option<T> {
        (self.p != T::zero()).then(|| self.q / self.p - T::one())
    }
}

/// `(p, q)` on the integrable parabola at parameter `gamma`.
pub fn parabola_point<T: Real>(kappa: T, gamma: T) -> (T, T) {
    let half_k = kappa * lit(0.5);
    let p = -half_k * gamma * gamma + (lit::<T>(2.0) + half_k) * gamma;
    let q = lit::<T>(2.0) * p - (T::one() + half_k) * gamma;
    (p, q)
}

/// Cartesian equation of the integrable parabola; zero on the curve.
pub fn parabola_residual<T: Real>(kappa: T, p: T, q: T) -> T {
    let two = lit::<T>(2.0);
    let g = (two * p - q) / (two + kappa);
    two * kappa * g * g - (lit::<T>(4.0) + kappa) * g + p
}

/// Parameter `γ` of `(p, q)` if it lies on the parabola (to `1e-10`).
pub fn parabola_gamma_of<T: Real>(kappa: T, p: T, q: T) -> Option<T> {
    let scale = T::one() + p.abs() + q.abs();
    (parabola_residual(kappa, p, q).abs() <= lit::<T>(1e-10) * scale)
        .then(|| (lit::<T>(2.0) * p - q) / (T::one() + kappa * lit(0.5)))
}

/// `γ` on the requested branch with `p(γ) = p`.
pub fn parabola_gamma<T: Real>(kappa: T, p: T, branch: Branch) -> Result<T> {
    let a = lit::<T>(4.0) + kappa;
    let disc = a * a - lit::<T>(8.0) * kappa * p;
    let tol = lit::<T>(64.0) * T::epsilon() * a * a;
    if disc < -tol {
        return Err(Error::domain(format!(
            "p = {p} lies beyond the parabola vertex (4+κ)²/8κ = {}",
            a * a / (lit::<T>(8.0) * kappa)
        )));
    }
    let root = disc.max(T::zero()).sqrt();
    let two_k = lit::<T>(2.0) * kappa;
    Ok(match branch {
        Branch::Minus => (a - root) / two_k,
        Branch::Plus => (a + root) / two_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parameter_values() {
        assert_eq!(parabola_point(2.0, 1.0), (2.0, 2.0));
        assert_eq!(parabola_point(2.0, 0.0), (0.0, 0.0));
        // q vanishes at γ = (3+κ/2)/κ, which is 1 for κ = 6
        let (p, q) = parabola_point(6.0, 1.0);
        assert!((p - 2.0f64).abs() < 1e-15 && q.abs() < 1e-15);
    }

    #[test]
    fn branches() {
        assert!((parabola_gamma(6.0, 2.0, Branch::Minus).unwrap() - 2.0 / 3.0f64).abs() < 1e-14);
        assert!((parabola_gamma(6.0, 2.0, Branch::Plus).unwrap() - 1.0f64).abs() < 1e-14);
        let vertex = 100.0 / 48.0;
        let lo = parabola_gamma(6.0, vertex, Branch::Minus).unwrap();
        let hi = parabola_gamma(6.0, vertex, Branch::Plus).unwrap();
        assert!((lo - 10.0 / 12.0f64).abs() < 1e-7 && (hi - 10.0 / 12.0f64).abs() < 1e-7);
        assert!(matches!(
            parabola_gamma(6.0, vertex + 0.1, Branch::Plus),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn spec_records_gamma_and_sigma() {
        let m = MomentSpec::new(1.75, 1.5).with_gamma_for(6.0);
        assert!((m.gamma.unwrap() - 0.5f64).abs() < 1e-14);
        assert!((m.sigma().unwrap() - (1.5 / 1.75 - 1.0)).abs() < 1e-15);
        assert_eq!(MomentSpec::new(1.0, 0.3).with_gamma_for(6.0).gamma, None);
        assert_eq!(MomentSpec::new(0.0, 0.3).sigma(), None);
    }

    proptest! {
        #[test]
        fn points_satisfy_cartesian_equation(kappa in 0.05f64..60.0, gamma in -5.0f64..5.0) {
            let (p, q) = parabola_point(kappa, gamma);
            let scale = 1.0 + p.abs() + q.abs();
            prop_assert!(parabola_residual(kappa, p, q).abs() < 1e-12 * scale);
            prop_assert!((2.0 * p - q - (1.0 + kappa / 2.0) * gamma).abs() < 1e-12 * scale);
        }

        #[test]
        fn gamma_round_trips(kappa in 0.05f64..60.0, gamma in -5.0f64..5.0) {
            let (p, _) = parabola_point(kappa, gamma);
            let vertex = (4.0 + kappa) / (2.0 * kappa);
            let branch = if gamma <= vertex { Branch::Minus } else { Branch::Plus };
            let back = parabola_gamma(kappa, p, branch).unwrap();
            // conditioning degrades near the vertex where dp/dγ vanishes
            let tol = 1e-9 / (gamma - vertex).abs().max(1e-3);
            prop_assert!((back - gamma).abs() < tol.max(1e-9), "{back} vs {gamma}");
        }
    }
}
