use num_complex::Complex;

use crate::error::{Error, Result};
use crate::residual::stencil::{check_point, check_step, one};
use crate::scalar::{lit, Real};

/// Candidate moduli function of `(x, y)`, `z = x + iy`.
#[derive(Clone, Copy)]
pub enum ModuliCandidate<'a, T> {
    /// `|1−z|^{2γ} (1−|z|²)^{−β}`, the diagonal of the two-point form.
    ClosedForm {
        gamma: T,
        beta: T,
    },
    Function(&'a dyn Fn(T, T) -> Complex<T>),
}

impl<T: Real> ModuliCandidate<'_, T> {
    pub fn integrable(kappa: T, gamma: T) -> Self {
        ModuliCandidate::ClosedForm {
            gamma,
            beta: kappa * gamma * gamma * lit(0.5),
        }
    }

    fn eval(&self, x: T, y: T) -> Complex<T> {
        match self {
            ModuliCandidate::ClosedForm { gamma, beta } => {
                let z = Complex::new(x, y);
                let v = (one::<T>() - z).norm().powf(lit::<T>(2.0) * *gamma)
                    / (T::one() - z.norm_sqr()).powf(*beta);
                Complex::new(v, T::zero())
            }
            ModuliCandidate::Function(f) => f(x, y),
        }
    }
}

struct Derivs<T> {
    f: Complex<T>,
    /// `z∂F`
    zd: Complex<T>,
    /// `z̄∂̄F`
    zbd: Complex<T>,
    /// `∂θ²F`
    dtheta2: Complex<T>,
}

/// Central differences in `(ln r, θ)`, where `r∂r = z∂ + z̄∂̄` and `∂θ = i(z∂ − z̄∂̄)`.
fn derivs<T: Real>(f: &dyn Fn(T, T) -> Complex<T>, z: Complex<T>, h: T) -> Derivs<T> {
    let (r, theta) = z.to_polar();
    let at = |u: T, t: T| {
        let w = Complex::from_polar(r * u.exp(), theta + t);
        f(w.re, w.im)
    };
    let f0 = f(z.re, z.im);
    let fu = (at(h, T::zero()) - at(-h, T::zero())).unscale(h + h);
    let (tp, tm) = (at(T::zero(), h), at(T::zero(), -h));
    let ft = (tp - tm).unscale(h + h);
    let ftt = (tp - f0 - f0 + tm).unscale(h * h);
    let i = Complex::new(T::zero(), T::one());
    let half = lit::<T>(0.5);
    Derivs {
        f: f0,
        zd: (fu - i * ft).scale(half),
        zbd: (fu + i * ft).scale(half),
        dtheta2: ftt,
    }
}

fn drift<T: Real>(z: Complex<T>, d: &Derivs<T>) -> Complex<T> {
    let one = one::<T>();
    let zb = z.conj();
    (one + z) / (one - z) * d.zd + (one + zb) / (one - zb) * d.zbd
}

fn check_moduli_point<T: Real>(z: Complex<T>, q: T, h: T) -> Result<()> {
    check_step(h)?;
    check_point(z, h, "z")?;
    if z.norm() * h.exp() >= T::one() {
        return Err(Error::domain(format!(
            "z = {z} and its stencil must lie inside the unit disk"
        )));
    }
    if z == Complex::new(T::zero(), T::zero()) || (q != T::zero() && z.norm() < lit::<T>(10.0) * h)
    {
        return Err(Error::domain(format!(
            "z = {z} is within 10h of the origin where |z|^q is not smooth"
        )));
    }
    Ok(())
}

/// `F = G/|z|^q` residual written with `σ = q/p − 1`:
/// `(κ/2)∂θ²F − ((1+z)/(1−z))z∂F − c.c. − p[1/(1−z)² + 1/(1−z̄)² + σ − 1]F`.
pub fn moduli_residual<T: Real>(
    candidate: &ModuliCandidate<'_, T>,
    z: Complex<T>,
    p: T,
    q: T,
    kappa: T,
    h: T,
) -> Result<Complex<T>> {
    check_moduli_point(z, q, h)?;
    let f = |x: T, y: T| {
        let v = candidate.eval(x, y);
        match candidate {
            ModuliCandidate::ClosedForm { .. } if q != T::zero() => {
                v.unscale((x * x + y * y).powf(q * lit(0.5)))
            }
            _ => v,
        }
    };
    let d = derivs(&f, z, h);
    let one = one::<T>();
    let (a, b) = ((one - z).inv(), (one - z.conj()).inv());
    // p(σ − 1) = q − 2p also covers p = 0
    let shift = if p != T::zero() {
        p * (q / p - T::one() - T::one())
    } else {
        q
    };
    let potential = (a * a + b * b).scale(p) + Complex::new(shift, T::zero());
    Ok(d.dtheta2.scale(kappa * lit(0.5)) - drift(z, &d) - potential * d.f)
}

/// Residual of the same equation written for `G = |z|^q F`:
/// `(κ/2)∂θ²G − drift − [p/(1−z)² + p/(1−z̄)² − q/(1−z) − q/(1−z̄) − 2p + 2q]G`.
pub fn moduli_g_residual<T: Real>(
    candidate: &ModuliCandidate<'_, T>,
    z: Complex<T>,
    p: T,
    q: T,
    kappa: T,
    h: T,
) -> Result<Complex<T>> {
    check_moduli_point(z, q, h)?;
    let g = |x: T, y: T| candidate.eval(x, y);
    let d = derivs(&g, z, h);
    let one = one::<T>();
    let (a, b) = ((one - z).inv(), (one - z.conj()).inv());
    let two = lit::<T>(2.0);
    let potential =
        (a * a + b * b).scale(p) - (a + b).scale(q) + Complex::new(two * q - two * p, T::zero());
    Ok(d.dtheta2.scale(kappa * lit(0.5)) - drift(z, &d) - potential * d.f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::parabola_point;
    use crate::residual::stencil::{order_report, richardson, CONVERGENCE_STEP, DEFAULT_STEP};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn integrable_diagonal_solves_both_forms() {
        let cand = ModuliCandidate::integrable(2.0, 1.0);
        let z = c(0.4, 0.1);
        assert!(
            moduli_residual(&cand, z, 2.0, 2.0, 2.0, DEFAULT_STEP)
                .unwrap()
                .norm()
                < 1e-6
        );
        assert!(
            moduli_g_residual(&cand, z, 2.0, 2.0, 2.0, DEFAULT_STEP)
                .unwrap()
                .norm()
                < 1e-6
        );
        let (p, q) = parabola_point(6.0, 0.5);
        let cand = ModuliCandidate::integrable(6.0, 0.5);
        assert!(
            moduli_residual(&cand, c(-0.2, 0.35), p, q, 6.0, DEFAULT_STEP)
                .unwrap()
                .norm()
                < 1e-6
        );
        let rep = order_report(CONVERGENCE_STEP, |h| {
            moduli_residual(&cand, c(-0.2, 0.35), p, q, 6.0, h)
        })
        .unwrap();
        assert!((3.0..=5.0).contains(&rep.ratio), "{rep:?}");
    }

    #[test]
    fn constant_solves_the_trivial_case() {
        let f = |_: f64, _: f64| c(1.0, 0.0);
        let r = moduli_residual(
            &ModuliCandidate::Function(&f),
            c(0.3, -0.2),
            0.0,
            0.0,
            4.0,
            DEFAULT_STEP,
        )
        .unwrap();
        assert_eq!(r, c(0.0, 0.0));
    }

    #[test]
    fn sigma_form_matches_unscaled_form() {
        // a non-solution, so both residuals are O(1)
        let (p, q, kappa) = (1.3, 0.7, 3.0);
        let f = |x: f64, y: f64| c((1.0 + 0.3 * x - 0.2 * y * x).exp(), 0.0);
        let g = |x: f64, y: f64| f(x, y).scale((x * x + y * y).powf(q / 2.0));
        let z = c(0.35, -0.25);
        let rf = richardson(1e-3, |h| {
            moduli_residual(&ModuliCandidate::Function(&f), z, p, q, kappa, h)
        })
        .unwrap();
        let rg = richardson(1e-3, |h| {
            moduli_g_residual(&ModuliCandidate::Function(&g), z, p, q, kappa, h)
        })
        .unwrap();
        assert!(rf.norm() > 0.1);
        assert!(
            (rg - rf.scale(z.norm().powf(q))).norm() < 1e-8,
            "{rg} vs {rf}"
        );
    }

    #[test]
    fn origin_guard() {
        let cand = ModuliCandidate::integrable(2.0, 1.0);
        assert!(moduli_residual(&cand, c(1e-4, 0.0), 2.0, 2.0, 2.0, 1e-4).is_err());
        assert!(moduli_residual(&cand, c(1e-4, 0.0), 0.0, 0.0, 2.0, 1e-4).is_ok());
    }
}
