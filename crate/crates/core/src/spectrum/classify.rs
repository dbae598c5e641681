use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectrum::{
    beta_0, beta_1, beta_lin, beta_tip, d1_offset, delta0_abscissa, quartic_point, special_points,
};

/// Region of the phase diagram, named after the spectrum valid there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Tip spectrum.
    I,
    /// Bulk spectrum.
    II,
    /// Linear spectrum.
    III,
    /// Mixed spectrum.
    IV,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
        })
    }
}

/// Classified point with its spectrum value.
///
/// Points on a separatrix carry the lowest adjacent region as `region` and
/// list the other adjacent regions in `adjacent`; the spectra agree there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint<T> {
    pub p: T,
    pub q: T,
    pub kappa: T,
    pub m: i32,
    pub region: Region,
    pub beta: T,
    pub adjacent: Vec<Region>,
}

impl<T> SpectrumPoint<T> {
    pub fn on_boundary(&self) -> bool {
        !self.adjacent.is_empty()
    }
}

const BISECTION_STEPS: usize = 200;

/// Ordinate of the tip-relevant quartic branch above abscissa `p ≤ p0'`.
///
/// `p` decreases monotonically along the branch `γ ≥ 1 + 2/κ`, so `γ` is
/// found by bisection.
pub fn quartic_ordinate<T: Real>(kappa: T, p: T) -> Result<T> {
    let g_start = T::one() + lit::<T>(2.0) / kappa;
    let p_start = quartic_point(kappa, g_start).0;
    if p > p_start + lit::<T>(1e-12) * (T::one() + p.abs()) {
        return Err(Error::domain(format!(
            "p = {p} lies right of the quartic branch start {p_start}"
        )));
    }
    let mut lo = g_start;
    let mut width = T::one();
    let mut hi = g_start + width;
    while quartic_point(kappa, hi).0 > p {
        lo = hi;
        width = width * lit(2.0);
        hi = g_start + width;
        if !hi.is_finite() {
            return Err(Error::domain(format!("no quartic point at p = {p}")));
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if quartic_point(kappa, mid).0 > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let g = (lo + hi) * lit(0.5);
    // one Newton correction in p sharpens the bisection end point
    let (pg, qg) = quartic_point(kappa, g);
    let h = lit::<T>(1e-6) * (T::one() + g.abs());
    let (pa, qa) = quartic_point(kappa, g + h);
    let (pb, qb) = quartic_point(kappa, g - h);
    let dp = (pa - pb) / (h + h);
    let dq = (qa - qb) / (h + h);
    if dp != T::zero() && dp.is_finite() {
        Ok(qg + dq * (p - pg) / dp)
    } else {
        Ok(qg)
    }
}

/// Ordinate of the green arc between `Q0` and `P0` at `p`.
pub fn green_arc_ordinate<T: Real>(kappa: T, p: T) -> T {
    let a = delta0_abscissa(kappa);
    let gp = (lit::<T>(2.0) * (a - p) / kappa).max(T::zero()).sqrt();
    a + gp - kappa * gp * gp
}

/// Lower boundary of the tip/bulk/linear regions: quartic, green arc, then `D1`.
pub fn lower_boundary<T: Real>(kappa: T, p: T) -> Result<T> {
    let sp = special_points(kappa);
    if p <= sp.p0prime {
        quartic_ordinate(kappa, p)
    } else if p <= sp.p0 {
        Ok(green_arc_ordinate(kappa, p))
    } else {
        Ok(p + d1_offset(kappa))
    }
}

/// Relative tolerance for deciding that a point sits on a separatrix.
pub const BOUNDARY_TOL: f64 = 1e-10;

fn upper_region<T: Real>(p: T, p0prime: T, p0: T, tol: T) -> (Region, Vec<Region>) {
    if (p - p0prime).abs() <= tol {
        (Region::I, vec![Region::II])
    } else if (p - p0).abs() <= tol {
        (Region::II, vec![Region::III])
    } else if p < p0prime {
        (Region::I, vec![])
    } else if p < p0 {
        (Region::II, vec![])
    } else {
        (Region::III, vec![])
    }
}

fn region_beta<T: Real>(region: Region, p: T, q: T, kappa: T) -> Result<T> {
    match region {
        Region::I => beta_tip(p, kappa),
        Region::II => beta_0(p, kappa),
        Region::III => Ok(beta_lin(p, kappa)),
        Region::IV => beta_1(p, q, kappa),
    }
}

/// Region and spectrum value of `(p, q)`.
pub fn classify<T: Real>(p: T, q: T, kappa: T) -> Result<SpectrumPoint<T>> {
    if !(kappa > T::zero() && kappa.is_finite()) {
        return Err(Error::domain(format!("kappa must be > 0, got {kappa}")));
    }
    if !(p.is_finite() && q.is_finite()) {
        return Err(Error::domain("p and q must be finite"));
    }
    let sp = special_points(kappa);
    let tol_p = lit::<T>(BOUNDARY_TOL) * (T::one() + p.abs());
    let qb = lower_boundary(kappa, p)?;
    let tol_q = lit::<T>(BOUNDARY_TOL) * (T::one() + q.abs().max(qb.abs()));
    let (region, adjacent) = if q < qb - tol_q {
        (Region::IV, vec![])
    } else {
        let (r, mut adj) = upper_region(p, sp.p0prime, sp.p0, tol_p);
        if (q - qb).abs() <= tol_q {
            adj.push(Region::IV);
        } else if !adj.is_empty() {
            // vertical separatrices only exist above the lower boundary
        }
        (r, adj)
    };
    let beta = region_beta(region, p, q, kappa)?;
    Ok(SpectrumPoint {
        p,
        q,
        kappa,
        m: 1,
        region,
        beta,
        adjacent,
    })
}

/// `T_m(p, q) = (p, (1 − 1/m)p + q/m)`.
pub fn mfold_map<T: Real>(m: i32, p: T, q: T) -> Result<(T, T)> {
    let mf = check_m::<T>(m)?;
    Ok((p, (T::one() - mf.recip()) * p + q / mf))
}

/// `T_m⁻¹(p, q) = (p, (1 − m)p + mq)`.
pub fn mfold_inverse<T: Real>(m: i32, p: T, q: T) -> Result<(T, T)> {
    let mf = check_m::<T>(m)?;
    Ok((p, (T::one() - mf) * p + mf * q))
}

fn check_m<T: Real>(m: i32) -> Result<T> {
    if m == 0 {
        return Err(Error::domain("m-fold transform needs m != 0"));
    }
    Ok(T::from_i32(m).expect("small integer"))
}

/// Region and spectrum of the m-fold transform, pulled back through `T_m`.
pub fn classify_mfold<T: Real>(p: T, q: T, kappa: T, m: i32) -> Result<SpectrumPoint<T>> {
    let (pm, qm) = mfold_map(m, p, q)?;
    let mut pt = classify(pm, qm, kappa)?;
    pt.p = p;
    pt.q = q;
    pt.m = m;
    Ok(pt)
}

/// Distinct regions met, in order, along the line `q = slope·p + intercept`
/// for `p` in `[p_lo, p_hi]`, ignoring points that sit on a separatrix.
pub fn region_sequence<T: Real>(
    kappa: T,
    m: i32,
    slope: T,
    intercept: T,
    p_lo: T,
    p_hi: T,
    steps: usize,
) -> Result<Vec<Region>> {
    let mut seq: Vec<Region> = Vec::new();
    let n = lit::<T>(steps.max(1) as f64);
    for k in 0..=steps.max(1) {
        let p = p_lo + (p_hi - p_lo) * lit::<T>(k as f64) / n;
        let pt = classify_mfold(p, slope * p + intercept, kappa, m)?;
        if !pt.on_boundary() && seq.last() != Some(&pt.region) {
            seq.push(pt.region);
        }
    }
    Ok(seq)
}

/// Samples the quartic branch and reports whether `p` decreases strictly.
pub fn quartic_branch_is_monotone<T: Real>(kappa: T, samples: usize, span: T) -> bool {
    let g0 = T::one() + lit::<T>(2.0) / kappa;
    let n = lit::<T>(samples.max(2) as f64);
    let mut prev = quartic_point(kappa, g0).0;
    (1..=samples.max(2)).all(|k| {
        let p = quartic_point(kappa, g0 + span * lit::<T>(k as f64) / n).0;
        let ok = p < prev;
        prev = p;
        ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::green_point;
    use proptest::prelude::*;

    #[test]
    fn reference_classifications() {
        let pt = classify(0.0f64, 0.0, 6.0).unwrap();
        assert_eq!((pt.region, pt.beta), (Region::II, 0.0));
        let pt = classify(10.0f64, 10.0, 6.0).unwrap();
        assert_eq!(pt.region, Region::III);
        assert!((pt.beta - 8.958333333333334).abs() < 1e-12);
        assert_eq!(classify(10.0, 9.0, 6.0).unwrap().region, Region::IV);
        let pt = classify(-4.0f64, 0.0, 6.0).unwrap();
        assert_eq!(pt.region, Region::I);
        assert!((pt.beta - 1.22800).abs() < 1e-5);
    }

    #[test]
    fn quartic_ordinate_matches_hyperbola_form() {
        // upper component of the hyperbola: 2y = κ/2 + √((x − κ/2)² − 6(κ+2))
        for kappa in [2.0f64, 6.0, 50.0] {
            let sp = special_points(kappa);
            for dp in [0.0, 0.5, 3.0, 40.0, 900.0] {
                let p = sp.p0prime - dp;
                let x = ((4.0 + kappa).powi(2) - 8.0 * kappa * p).sqrt();
                let y =
                    kappa / 4.0 + ((x - kappa / 2.0).powi(2) - 6.0 * (kappa + 2.0)).sqrt() / 2.0;
                let q = p - (y * y - 1.0) / (2.0 * kappa);
                let got = quartic_ordinate(kappa, p).unwrap();
                assert!(
                    (got - q).abs() < 1e-10 * (1.0 + q.abs()),
                    "κ={kappa} p={p}: {got} vs {q}"
                );
            }
        }
    }

    #[test]
    fn quartic_branch_monotone() {
        for kappa in [0.5, 2.0, 6.0, 8.0, 30.0, 50.0, 60.0] {
            assert!(quartic_branch_is_monotone(kappa, 2000, 200.0));
        }
    }

    #[test]
    fn boundary_points_report_neighbours() {
        let sp = special_points(6.0f64);
        let pt = classify(sp.p0, sp.q0, 6.0).unwrap();
        assert_eq!(pt.region, Region::II);
        assert_eq!(pt.adjacent, vec![Region::III, Region::IV]);
        let pt = classify(sp.p0prime, sp.q0prime, 6.0).unwrap();
        assert_eq!(pt.region, Region::I);
        assert_eq!(pt.adjacent, vec![Region::II, Region::IV]);
        let (p, q) = green_point(6.0, 1.0);
        let pt = classify(p, q, 6.0).unwrap();
        assert_eq!(
            (pt.region, pt.adjacent.clone()),
            (Region::II, vec![Region::IV])
        );
        assert!((pt.beta - beta_1(p, q, 6.0f64).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn m_fold_region_sequences() {
        let seq = region_sequence(30.0, 10, 0.0, 0.0, -2000.0, 2000.0, 40000).unwrap();
        assert_eq!(seq, vec![Region::I, Region::II, Region::III, Region::IV]);
        let seq = region_sequence(2.0, -30, 0.0, 0.0, -2000.0, 2000.0, 40000).unwrap();
        assert_eq!(seq, vec![Region::I, Region::II, Region::IV, Region::III]);
    }

    #[test]
    fn m_zero_rejected() {
        assert!(mfold_map(0, 1.0, 1.0).is_err());
        assert!(classify_mfold(1.0, 1.0, 2.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn transform_round_trip(m in -30i32..=30, p in -100.0f64..100.0, q in -100.0f64..100.0) {
            prop_assume!(m != 0);
            let (a, b) = mfold_map(m, p, q).unwrap();
            let (c, d) = mfold_inverse(m, a, b).unwrap();
            prop_assert!((c - p).abs() < 1e-14 * (1.0 + p.abs()));
            prop_assert!((d - q).abs() < 1e-12 * (1.0 + p.abs() + q.abs()));
        }

        #[test]
        fn mfold_beta_is_pullback(m in -10i32..=10, p in -20.0f64..20.0, q in -20.0f64..20.0, kappa in 0.5f64..40.0) {
            prop_assume!(m != 0);
            let (pm, qm) = mfold_map(m, p, q).unwrap();
            prop_assert_eq!(classify_mfold(p, q, kappa, m).unwrap().beta, classify(pm, qm, kappa).unwrap().beta);
        }

        #[test]
        fn classify_is_total(p in -200.0f64..200.0, q in -400.0f64..400.0, kappa in 0.2f64..60.0) {
            let pt = classify(p, q, kappa).unwrap();
            prop_assert!(pt.beta.is_finite());
        }
    }
}
