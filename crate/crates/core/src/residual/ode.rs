use num_complex::Complex;

use crate::error::Result;
use crate::residual::stencil::{
    cauchy_riemann_probe, check_point, check_step, euler_derivs, one, principal_pow,
};
use crate::scalar::{lit, Real};

/// Candidate one-point function of `z`.
#[derive(Clone, Copy)]
pub enum OnePointCandidate<'a, T> {
    /// `(1 − z)^γ`.
    ClosedForm { gamma: T },
    /// Evaluator assumed holomorphic; probed before use.
    Function(&'a dyn Fn(Complex<T>) -> Complex<T>),
}

impl<T: Real> OnePointCandidate<'_, T> {
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        match self {
            OnePointCandidate::ClosedForm { gamma } => principal_pow(one::<T>() - z, *gamma),
            OnePointCandidate::Function(f) => f(z),
        }
    }
}

/// `P(∂)[G]` at `z` with
/// `P(∂) = −(κ/2)(z∂)² − ((1+z)/(1−z))z∂ − p/(1−z)² + q/(1−z) + p − q`.
pub fn ode_residual<T: Real>(
    candidate: &OnePointCandidate<'_, T>,
    z: Complex<T>,
    p: T,
    q: T,
    kappa: T,
    h: T,
) -> Result<Complex<T>> {
    check_step(h)?;
    check_point(z, h, "z")?;
    let g = |w: Complex<T>| candidate.eval(w);
    if matches!(candidate, OnePointCandidate::Function(_)) {
        cauchy_riemann_probe(&g, z, h)?;
    }
    let (d1, d2) = euler_derivs(&g, z, h);
    Ok(apply_operator(z, p, q, kappa, g(z), d1, d2))
}

/// One-variable operator given `G`, `z∂G` and `(z∂)²G`.
pub(crate) fn apply_operator<T: Real>(
    z: Complex<T>,
    p: T,
    q: T,
    kappa: T,
    g: Complex<T>,
    d1: Complex<T>,
    d2: Complex<T>,
) -> Complex<T> {
    let one = one::<T>();
    let inv = (one - z).inv();
    let potential = -(inv * inv).scale(p) + inv.scale(q) + Complex::new(p - q, T::zero());
    -d2.scale(kappa * lit(0.5)) - (one + z) * inv * d1 + potential * g
}
