use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::WholePlaneSample;

/// Exponent `q_m = p + (q − p)/m` seen by the m-fold transform.
pub fn mfold_q<T: Real>(p: T, q: T, m: i32) -> T {
    p + (q - p) / T::from_i32(m).expect("small integer")
}

/// Checks `|z|^q |(f^[m])'(z)|^p / |f^[m](z)|^q = |ζ|^{q_m} |f'(ζ)|^p / |f(ζ)|^{q_m}`
/// at `ζ = z^m` for one sample.
///
/// The left side is assembled from the transformed map and its derivative;
/// for `m < 0` through the exterior map `1/f^[−m](1/z)`. Returns the absolute
/// difference of the two sides.
pub fn mfold_identity_check<T: Real>(
    sample: &WholePlaneSample<T>,
    m: i32,
    z: Complex<T>,
    p: T,
    q: T,
) -> Result<T> {
    if m == 0 {
        return Err(Error::domain("m-fold transform needs m != 0"));
    }
    let zeta = z.powi(m);
    let i = sample.index_of(zeta)?;
    let n = m.unsigned_abs() as i32;
    let nf = T::from_i32(n).expect("small integer");
    let logratio = sample.logratio[i];
    let logf = sample.logf(i);
    let logfp = sample.logfp[i];

    // g = f^[n] at u: g(u) = f(u^n)^{1/n}, g'(u) = u^{n−1} f'(u^n) f(u^n)^{1/n − 1}
    let u = if m > 0 { z } else { z.inv() };
    let g = u * logratio.unscale(nf).exp();
    let gp = u.powi(n - 1) * logfp.exp() * logf.scale(nf.recip() - T::one()).exp();
    let (value, deriv) = if m > 0 {
        (g, gp)
    } else {
        (g.inv(), gp / (g * g * z * z))
    };

    let lhs = z.norm().powf(q) * deriv.norm().powf(p) / value.norm().powf(q);
    let rhs = sample.moduli_integrand(i, p, mfold_q(p, q, m));
    Ok((lhs - rhs).abs())
}
