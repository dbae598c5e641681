use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// `(4+κ)²/8κ`, the right edge of the domain of the tip and bulk spectra.
pub fn delta0_abscissa<T: Real>(kappa: T) -> T {
    let a = lit::<T>(4.0) + kappa;
    a * a / (lit::<T>(8.0) * kappa)
}

fn bulk_root<T: Real>(p: T, kappa: T) -> Result<T> {
    let a = lit::<T>(4.0) + kappa;
    let disc = a * a - lit::<T>(8.0) * kappa * p;
    if disc < T::zero() {
        return Err(Error::domain(format!(
            "Delta0 violated: p = {p} > (4+κ)²/8κ = {}",
            delta0_abscissa(kappa)
        )));
    }
    Ok(disc.sqrt())
}

/// Tip spectrum `−p − 1 + (4+κ − √((4+κ)² − 8κp))/4`.
pub fn beta_tip<T: Real>(p: T, kappa: T) -> Result<T> {
    let x = bulk_root(p, kappa)?;
    Ok(-p - T::one() + (lit::<T>(4.0) + kappa - x) / lit(4.0))
}

/// Bulk spectrum `−p + (4+κ)/(4κ) · (4+κ − √((4+κ)² − 8κp))`.
pub fn beta_0<T: Real>(p: T, kappa: T) -> Result<T> {
    let x = bulk_root(p, kappa)?;
    let a = lit::<T>(4.0) + kappa;
    Ok(-p + a / (lit::<T>(4.0) * kappa) * (a - x))
}

/// Linear spectrum `p − (4+κ)²/16κ`.
pub fn beta_lin<T: Real>(p: T, kappa: T) -> T {
    let a = lit::<T>(4.0) + kappa;
    p - a * a / (lit::<T>(16.0) * kappa)
}

/// Mixed spectrum `3p − 2q − 1/2 − √(1 + 2κ(p−q))/2`.
pub fn beta_1<T: Real>(p: T, q: T, kappa: T) -> Result<T> {
    let y2 = T::one() + lit::<T>(2.0) * kappa * (p - q);
    if y2 < T::zero() {
        return Err(Error::domain(format!(
            "Delta1 violated: 1 + 2κ(p−q) = {y2} < 0 at (p, q) = ({p}, {q})"
        )));
    }
    let half = lit::<T>(0.5);
    Ok(lit::<T>(3.0) * p - lit::<T>(2.0) * q - half - half * y2.sqrt())
}

/// m-fold mixed spectrum `(1+2/m)p − (2/m)q − 1/2 − √(1 + 2κ(p−q)/m)/2`.
pub fn beta_m<T: Real>(p: T, q: T, kappa: T, m: i32) -> Result<T> {
    if m == 0 {
        return Err(Error::domain("m-fold spectrum needs m != 0"));
    }
    let mf = T::from_i32(m).expect("small integer");
    let two = lit::<T>(2.0);
    let y2 = T::one() + two * kappa * (p - q) / mf;
    if y2 < T::zero() {
        return Err(Error::domain(format!(
            "Delta1 violated for m = {m}: 1 + 2κ(p−q)/m = {y2} < 0"
        )));
    }
    let half = lit::<T>(0.5);
    Ok((T::one() + two / mf) * p - two / mf * q - half - half * y2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_values() {
        for k in [0.5, 2.0, 6.0, 50.0] {
            assert_eq!(beta_0(0.0, k).unwrap(), 0.0);
            assert!((beta_1(1.7, 1.7, k).unwrap() - 0.7f64).abs() < 1e-15);
        }
        assert!((beta_0(2.0, 6.0).unwrap() - 4.0 / 3.0f64).abs() < 1e-14);
        assert!(
            (beta_tip(-4.0, 6.0).unwrap() - (3.0 + (10.0 - 292f64.sqrt()) / 4.0)).abs() < 1e-14
        );
        assert!((beta_tip(-4.0f64, 6.0).unwrap() - 1.22800).abs() < 1e-5);
        assert!((beta_lin(10.0, 6.0) - (10.0 - 100.0 / 96.0f64)).abs() < 1e-14);
    }

    #[test]
    fn domain_errors_name_the_constraint() {
        match beta_0(3.0, 6.0) {
            Err(Error::Domain(msg)) => assert!(msg.contains("Delta0")),
            other => panic!("{other:?}"),
        }
        match beta_1(0.0, 1.0, 6.0) {
            Err(Error::Domain(msg)) => assert!(msg.contains("Delta1")),
            other => panic!("{other:?}"),
        }
        assert!(beta_m(0.0, 0.0, 6.0, 0).is_err());
    }

    #[test]
    fn m_fold_spectrum_is_pullback() {
        let (p, q, k) = (0.7, 0.65, 6.0);
        for m in [-5, -1, 1, 2, 7] {
            let qm = (1.0 - 1.0 / m as f64) * p + q / m as f64;
            assert!((beta_m(p, q, k, m).unwrap() - beta_1(p, qm, k).unwrap()).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn mixed_dominates_linear(p in -50.0f64..50.0, d in 0.0f64..60.0, kappa in 0.1f64..60.0) {
            // d = p − q ≥ 0 keeps the square root real
            let q = p - d + 0.25 / kappa;
            let y = (1.0 + 2.0 * kappa * (p - q)).sqrt();
            let diff = beta_1(p, q, kappa).unwrap() - beta_lin(p, kappa);
            let expect = (kappa / 4.0 - y).powi(2) / kappa;
            prop_assert!(diff >= -1e-12);
            prop_assert!((diff - expect).abs() < 1e-12 * (1.0 + p.abs() + q.abs() + kappa));
        }
    }
}
