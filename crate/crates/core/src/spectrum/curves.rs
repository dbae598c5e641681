use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{parabola_point, parabola_residual};
use crate::scalar::{lit, Real};
use crate::spectrum::{delta0_abscissa, special_points};

/// Separatrix curves and domain edges of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CurveId {
    RedParabola,
    GreenParabola,
    BlueQuartic,
    D0,
    D1,
    D0prime,
    Delta0,
    Delta1,
}

impl CurveId {
    pub const ALL: [CurveId; 8] = [
        CurveId::RedParabola,
        CurveId::GreenParabola,
        CurveId::BlueQuartic,
        CurveId::D0,
        CurveId::D1,
        CurveId::D0prime,
        CurveId::Delta0,
        CurveId::Delta1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveId::RedParabola => "redParabola",
            CurveId::GreenParabola => "greenParabola",
            CurveId::BlueQuartic => "blueQuartic",
            CurveId::D0 => "D0",
            CurveId::D1 => "D1",
            CurveId::D0prime => "D0prime",
            CurveId::Delta0 => "Delta0",
            CurveId::Delta1 => "Delta1",
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::usage(format!("unknown curve id '{s}'")))
    }
}

/// One sampled point of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample<T> {
    pub curve: CurveId,
    pub param: T,
    pub p: T,
    pub q: T,
}

/// Green parabola at parameter `γ'`.
pub fn green_point<T: Real>(kappa: T, gp: T) -> (T, T) {
    let a = delta0_abscissa(kappa);
    (a - kappa * gp * gp * lit(0.5), a + gp - kappa * gp * gp)
}

/// `Δ(γ) = 4κ²γ² − 2κ(4+κ)γ + (8+κ)²/4 + 4κ`, positive for every real `γ`.
pub fn quartic_discriminant<T: Real>(kappa: T, gamma: T) -> T {
    let four = lit::<T>(4.0);
    let e = lit::<T>(8.0) + kappa;
    four * kappa * kappa * gamma * gamma - lit::<T>(2.0) * kappa * (four + kappa) * gamma
        + e * e / four
        + four * kappa
}

/// Quartic branch at parameter `γ` (tip-relevant for `γ ≥ 1 + 2/κ`).
pub fn quartic_point<T: Real>(kappa: T, gamma: T) -> (T, T) {
    let half_k = kappa * lit(0.5);
    let p = kappa / lit(16.0) + (T::one() + kappa / lit(4.0)) * gamma
        - half_k * gamma * gamma
        - quartic_discriminant(kappa, gamma).sqrt() / lit(8.0);
    (p, p + gamma - half_k * gamma * gamma)
}

/// Slope-one offset `q − p` of `D1`.
pub fn d1_offset<T: Real>(kappa: T) -> T {
    (lit::<T>(16.0) - kappa * kappa) / (lit::<T>(32.0) * kappa)
}

/// Point of `curve` at `param`.
///
/// Parabolas and the quartic take their curve parameter; vertical lines take
/// `q` and oblique lines take `p`.
pub fn curve_eval<T: Real>(curve: CurveId, kappa: T, param: T) -> (T, T) {
    let sp = special_points(kappa);
    match curve {
        CurveId::RedParabola => parabola_point(kappa, param),
        CurveId::GreenParabola => green_point(kappa, param),
        CurveId::BlueQuartic => quartic_point(kappa, param),
        CurveId::D0 => (sp.p0, param),
        CurveId::D1 => (param, param + d1_offset(kappa)),
        CurveId::D0prime => (sp.p0prime, param),
        CurveId::Delta0 => (delta0_abscissa(kappa), param),
        CurveId::Delta1 => (param, param + (lit::<T>(2.0) * kappa).recip()),
    }
}

/// Green parabola in Cartesian form; zero on the curve.
pub fn green_residual<T: Real>(kappa: T, p: T, q: T) -> T {
    let a2 = (lit::<T>(4.0) + kappa) * (lit::<T>(4.0) + kappa);
    let s = lit::<T>(2.0) * p - q;
    kappa * lit(0.5) * s * s - a2 * s / lit(8.0) + p + a2 * (lit::<T>(8.0) + kappa) / lit(128.0)
}

/// Quartic in Cartesian form; zero on the curve.
pub fn quartic_residual<T: Real>(kappa: T, p: T, q: T) -> T {
    let s = lit::<T>(2.0) * p - q;
    let e = lit::<T>(8.0) + kappa;
    let c = e * e / lit(64.0) + kappa / lit(4.0);
    let a = s - kappa / lit(16.0);
    let b = s - lit::<T>(0.25) - kappa / lit(8.0);
    (a * a - c / lit(4.0)) * (s - T::one() - kappa / lit(8.0)) * s
        - kappa * lit(0.5) * (p - q) * b * b
}

/// Cartesian residual of `(p, q)` with respect to `curve`.
pub fn cartesian_residual<T: Real>(curve: CurveId, kappa: T, p: T, q: T) -> T {
    let sp = special_points(kappa);
    match curve {
        CurveId::RedParabola => parabola_residual(kappa, p, q),
        CurveId::GreenParabola => green_residual(kappa, p, q),
        CurveId::BlueQuartic => quartic_residual(kappa, p, q),
        CurveId::D0 => p - sp.p0,
        CurveId::D1 => q - p - d1_offset(kappa),
        CurveId::D0prime => p - sp.p0prime,
        CurveId::Delta0 => p - delta0_abscissa(kappa),
        CurveId::Delta1 => q - p - (lit::<T>(2.0) * kappa).recip(),
    }
}

/// Scale for comparing a Cartesian residual against a tolerance.
pub fn residual_scale<T: Real>(curve: CurveId, p: T, q: T) -> T {
    let r = T::one() + p.abs() + q.abs();
    match curve {
        CurveId::BlueQuartic => r.powi(4),
        CurveId::RedParabola | CurveId::GreenParabola => r * r,
        _ => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_points_on_curves() {
        let (p, q) = curve_eval(CurveId::RedParabola, 2.0f64, 1.0);
        assert_eq!((p, q), (2.0, 2.0));
        assert!(cartesian_residual(CurveId::RedParabola, 2.0, p, q).abs() < 1e-12);

        assert!((quartic_discriminant(6.0f64, 4.0 / 3.0) - 169.0f64).abs() < 1e-12);
        let (p, q) = curve_eval(CurveId::BlueQuartic, 6.0, 4.0 / 3.0);
        assert!((p + 3.25f64).abs() < 1e-12 && (q + 7.25f64).abs() < 1e-12);

        let (p, q) = curve_eval(CurveId::GreenParabola, 6.0f64, 0.25 + 1.0 / 6.0);
        let sp = special_points(6.0);
        assert!((p - sp.p0).abs() < 1e-12 && (q - sp.q0).abs() < 1e-12);
    }

    #[test]
    fn curve_ids_parse() {
        assert_eq!(
            "blueQuartic".parse::<CurveId>().unwrap(),
            CurveId::BlueQuartic
        );
        assert!(matches!("purple".parse::<CurveId>(), Err(Error::Usage(_))));
        for c in CurveId::ALL {
            assert_eq!(c.name().parse::<CurveId>().unwrap(), c);
        }
    }

    proptest! {
        #[test]
        fn parametric_points_satisfy_cartesian_equations(kappa in 0.2f64..60.0, t in -20.0f64..20.0) {
            for c in CurveId::ALL {
                let (p, q) = curve_eval(c, kappa, t);
                let r = cartesian_residual(c, kappa, p, q);
                prop_assert!(r.abs() < 1e-10 * residual_scale(c, p, q), "{c}: {r}");
            }
        }

        #[test]
        fn discriminant_is_positive(kappa in 0.05f64..100.0, gamma in -100.0f64..100.0) {
            prop_assert!(quartic_discriminant(kappa, gamma) > 0.0);
        }
    }
}
