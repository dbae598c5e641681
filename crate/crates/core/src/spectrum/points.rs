use serde::{Deserialize, Serialize};

use crate::moments::parabola_point;
use crate::scalar::{lit, Real};
use crate::spectrum::curves::green_point;

/// Distinguished points and abscissae of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoints<T> {
    pub kappa: T,
    /// Red/green crossing where the bulk spectrum turns linear.
    pub p0_point: (T, T),
    /// Second red/green crossing.
    pub p1_point: (T, T),
    /// Quartic/green crossing on the tip line.
    pub q0_point: (T, T),
    /// Quartic/red crossing on the tip line.
    pub q1_point: (T, T),
    /// Red parabola tangent to the vertical domain edge.
    pub t0_point: (T, T),
    /// Red parabola tangent to the oblique domain edge.
    pub t1_point: (T, T),
    /// Green parabola tangent to the oblique domain edge.
    pub t2_point: (T, T),
    /// Interior-case transition abscissa, where the green parabola crosses `q = 0`.
    pub p_star: T,
    pub p0: T,
    pub q0: T,
    pub p0prime: T,
    pub q0prime: T,
    /// Green parabola crossing of the line `q = 2p`.
    pub p0dblprime: T,
}

pub fn special_points<T: Real>(kappa: T) -> SpecialPoints<T> {
    let four = lit::<T>(4.0);
    let eight = lit::<T>(8.0);
    let a = four + kappa;
    let p0 = lit::<T>(3.0) * a * a / (lit::<T>(32.0) * kappa);
    let q0 = a * (eight + kappa) / (lit::<T>(16.0) * kappa);
    let p1 = (eight + kappa) * (eight + lit::<T>(3.0) * kappa) / (lit::<T>(32.0) * kappa);
    let p0prime = -T::one() - lit::<T>(3.0) * kappa / eight;
    let q0prime = -lit::<T>(2.0) - lit::<T>(7.0) * kappa / eight;
    let q1 = -(lit::<T>(3.0) + kappa) / lit(2.0);
    let s = (lit::<T>(2.0) * a * a + four).sqrt();
    let p_star = (a * a - four - lit::<T>(2.0) * s) / (lit::<T>(16.0) * kappa);
    let p0dblprime = -a * a * (eight + kappa) / lit(128.0);
    let inv_k = kappa.recip();
    SpecialPoints {
        kappa,
        p0_point: (p0, q0),
        p1_point: (p1, q0),
        q0_point: (p0prime, q0prime),
        q1_point: (p0prime, q1),
        t0_point: parabola_point(kappa, lit::<T>(2.0) * inv_k + lit(0.5)),
        t1_point: parabola_point(kappa, inv_k),
        t2_point: green_point(kappa, inv_k),
        p_star,
        p0,
        q0,
        p0prime,
        q0prime,
        p0dblprime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_six_values() {
        let sp = special_points(6.0f64);
        assert!((sp.p0 - 1.5625).abs() < 1e-15);
        assert!((sp.q0 - 35.0 / 24.0).abs() < 1e-15);
        assert_eq!(sp.q0_point, (-3.25, -7.25));
        assert_eq!(sp.q1_point, (-3.25, -4.5));
        assert!((sp.p_star - 0.7024).abs() < 1e-4);
        // the factored form of p*
        let s = (2.0 * 100.0f64 + 4.0).sqrt();
        assert!((sp.p_star - (s - 6.0) * (s + 2.0) / (32.0 * 6.0)).abs() < 1e-14);
    }

    #[test]
    fn p_star_precedes_p0() {
        for k in [0.5, 2.0, 4.0, 6.0, 8.0, 30.0, 60.0] {
            let sp = special_points(k);
            assert!(sp.p_star < sp.p0);
            assert!(sp.p0dblprime <= sp.p0prime);
        }
    }
}
