use num_complex::Complex;

use crate::error::Result;
use crate::residual::ode::apply_operator;
use crate::residual::stencil::{
    cauchy_riemann_probe, check_point, check_step, euler_derivs, one, principal_pow,
};
use crate::scalar::{lit, Real};

/// Candidate two-point function of `(z₁, z̄₂)`, holomorphic in each argument.
#[derive(Clone, Copy)]
pub enum TwoPointCandidate<'a, T> {
    /// `(1−z₁)^γ (1−z̄₂)^γ (1 − z₁z̄₂)^{−β}`.
    ClosedForm {
        gamma: T,
        beta: T,
    },
    Function(&'a dyn Fn(Complex<T>, Complex<T>) -> Complex<T>),
}

impl<T: Real> TwoPointCandidate<'_, T> {
    /// Closed form with the exponent `β = κγ²/2`.
    pub fn integrable(kappa: T, gamma: T) -> Self {
        TwoPointCandidate::ClosedForm {
            gamma,
            beta: kappa * gamma * gamma * lit(0.5),
        }
    }

    pub fn eval(&self, z1: Complex<T>, w: Complex<T>) -> Complex<T> {
        match self {
            TwoPointCandidate::ClosedForm { gamma, beta } => {
                let one = one::<T>();
                principal_pow(one - z1, *gamma) * principal_pow(one - w, *gamma)
                    / principal_pow(one - z1 * w, *beta)
            }
            TwoPointCandidate::Function(f) => f(z1, w),
        }
    }
}

/// `[P(∂₁) + P(∂̄₂) + κ z₁∂₁ z̄₂∂̄₂] G` at `(z₁, z̄₂)`.
pub fn pde_residual<T: Real>(
    candidate: &TwoPointCandidate<'_, T>,
    z1: Complex<T>,
    z2bar: Complex<T>,
    p: T,
    q: T,
    kappa: T,
    h: T,
) -> Result<Complex<T>> {
    check_step(h)?;
    check_point(z1, h, "z1")?;
    check_point(z2bar, h, "z2bar")?;
    let g1 = |w: Complex<T>| candidate.eval(w, z2bar);
    let g2 = |w: Complex<T>| candidate.eval(z1, w);
    if matches!(candidate, TwoPointCandidate::Function(_)) {
        cauchy_riemann_probe(&g1, z1, h)?;
        cauchy_riemann_probe(&g2, z2bar, h)?;
    }
    let g0 = candidate.eval(z1, z2bar);
    let (a1, a2) = euler_derivs(&g1, z1, h);
    let (b1, b2) = euler_derivs(&g2, z2bar, h);
    let hc = Complex::new(h, T::zero());
    let mixed = (candidate.eval(z1 + hc, z2bar + hc)
        - candidate.eval(z1 + hc, z2bar - hc)
        - candidate.eval(z1 - hc, z2bar + hc)
        + candidate.eval(z1 - hc, z2bar - hc))
    .unscale(lit::<T>(4.0) * h * h);
    Ok(apply_operator(z1, p, q, kappa, g0, a1, a2)
        + apply_operator(z2bar, p, q, kappa, g0, b1, b2)
        + (z1 * z2bar * mixed).scale(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::parabola_point;
    use crate::residual::ode::{ode_residual, OnePointCandidate};
    use crate::residual::stencil::{order_report, CONVERGENCE_STEP, DEFAULT_STEP};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn closed_form_solves_the_pde() {
        let cand = TwoPointCandidate::integrable(2.0, 1.0);
        let r = pde_residual(&cand, c(0.3, 0.0), c(0.0, 0.2), 2.0, 2.0, 2.0, DEFAULT_STEP).unwrap();
        assert!(r.norm() < 1e-6, "{r}");
        let rep = order_report(CONVERGENCE_STEP, |h| {
            pde_residual(&cand, c(0.3, 0.1), c(-0.2, 0.2), 2.0, 2.0, 2.0, h)
        })
        .unwrap();
        assert!((3.0..=5.0).contains(&rep.ratio), "{rep:?}");
    }

    #[test]
    fn wrong_exponent_detected() {
        let cand = TwoPointCandidate::ClosedForm {
            gamma: 1.0,
            beta: 1.1,
        };
        let r = pde_residual(&cand, c(0.3, 0.0), c(0.0, 0.2), 2.0, 2.0, 2.0, DEFAULT_STEP).unwrap();
        assert!(r.norm() > 1e-2, "{r}");
    }

    #[test]
    fn reduces_to_ode_at_zero() {
        let (p, q) = parabola_point(6.0, 0.5);
        let two = TwoPointCandidate::integrable(6.0, 0.5);
        let z = c(0.25, -0.3);
        let r2 = pde_residual(&two, z, c(0.0, 0.0), p, q, 6.0, 1e-3).unwrap();
        let r1 = ode_residual(
            &OnePointCandidate::ClosedForm { gamma: 0.5 },
            z,
            p,
            q,
            6.0,
            1e-3,
        )
        .unwrap();
        assert!((r2 - r1).norm() < 1e-10, "{r2} vs {r1}");
    }
}
