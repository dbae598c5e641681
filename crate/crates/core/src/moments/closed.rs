use num_complex::Complex;

use crate::scalar::{lit, Real};

/// `E(f'(z)^{p/2} (f(z)/z)^{-q/2}) = (1 − z)^γ` on the integrable parabola.
pub fn closed_one_point<T: Real>(z: Complex<T>, _kappa: T, gamma: T) -> Complex<T> {
    principal_pow(Complex::new(T::one(), T::zero()) - z, gamma)
}

/// Two-point function `(1−z₁)^γ (1−z̄₂)^γ / (1−z₁z̄₂)^{κγ²/2}`.
pub fn closed_two_point<T: Real>(
    z1: Complex<T>,
    z2bar: Complex<T>,
    kappa: T,
    gamma: T,
) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let beta = kappa * gamma * gamma * lit(0.5);
    principal_pow(one - z1, gamma) * principal_pow(one - z2bar, gamma)
        / principal_pow(one - z1 * z2bar, beta)
}

/// Diagonal `E(|z|^q |f'|^p / |f|^q) = |1−z|^{2γ} / (1−|z|²)^{κγ²/2}`.
pub fn closed_moduli<T: Real>(z: Complex<T>, kappa: T, gamma: T) -> T {
    let beta = kappa * gamma * gamma * lit(0.5);
    let one = Complex::new(T::one(), T::zero());
    (one - z).norm().powf(lit::<T>(2.0) * gamma) / (T::one() - z.norm_sqr()).powf(beta)
}

fn principal_pow<T: Real>(w: Complex<T>, a: T) -> Complex<T> {
    (w.ln().scale(a)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn one_point_values() {
        assert_eq!(closed_one_point(c(0.0, 0.0), 2.0, 1.7), c(1.0, 0.0));
        assert!((closed_one_point(c(0.5, 0.0), 2.0, 1.0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((closed_one_point(c(0.5, 0.0), 6.0, 0.5) - c(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_point_values() {
        let v = closed_two_point(c(0.5, 0.0), c(0.5, 0.0), 2.0, 1.0);
        assert!((v - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let v = closed_two_point(c(0.4, 0.0), c(0.2, 0.0), 6.0, 0.5);
        let expect = 0.6f64.sqrt() * 0.8f64.sqrt() * 0.92f64.powf(-0.75);
        assert!((v - c(expect, 0.0)).norm() < 1e-14);
        let z = c(0.3, -0.4);
        assert!(
            (closed_moduli(z, 6.0, 0.5) - closed_two_point(z, z.conj(), 6.0, 0.5).re).abs() < 1e-14
        );
    }

    proptest! {
        #[test]
        fn two_point_reduces_and_is_hermitian(
            r1 in 0.0f64..0.95, a1 in -3.1f64..3.1, r2 in 0.0f64..0.95, a2 in -3.1f64..3.1,
            kappa in 0.1f64..20.0, gamma in -2.0f64..2.0,
        ) {
            let z1 = Complex::from_polar(r1, a1);
            let z2 = Complex::from_polar(r2, a2);
            let zero = c(0.0, 0.0);
            prop_assert!((closed_two_point(z1, zero, kappa, gamma) - closed_one_point(z1, kappa, gamma)).norm() < 1e-12);
            let a = closed_two_point(z1, z2.conj(), kappa, gamma);
            let b = closed_two_point(z2, z1.conj(), kappa, gamma).conj();
            prop_assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
        }
    }
}
