use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Model for the unknown bulk part `B₀(p)` of the universal spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum B0Model<T> {
    /// `B₀(p) = p²/4`.
    Kraetzer,
    /// Piecewise linear through `(p, B₀(p))` knots sorted by `p`.
    Table(Vec<(T, T)>),
}

impl<T: Real> B0Model<T> {
    pub fn eval(&self, p: T) -> Result<T> {
        match self {
            B0Model::Kraetzer => Ok(p * p / lit(4.0)),
            B0Model::Table(knots) => interpolate(knots, p),
        }
    }
}

fn interpolate<T: Real>(knots: &[(T, T)], p: T) -> Result<T> {
    if knots.len() < 2 {
        return Err(Error::config("B0 table needs at least two knots"));
    }
    if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::config(
            "B0 table abscissae must be strictly increasing",
        ));
    }
    let (first, last) = (knots[0].0, knots[knots.len() - 1].0);
    if p < first || p > last {
        return Err(Error::domain(format!(
            "p = {p} outside the B0 table range [{first}, {last}]"
        )));
    }
    let k = knots
        .partition_point(|&(x, _)| x <= p)
        .clamp(1, knots.len() - 1);
    let ((x0, y0), (x1, y1)) = (knots[k - 1], knots[k]);
    Ok(y0 + (y1 - y0) * (p - x0) / (x1 - x0))
}

/// Universal spectrum model: tip line, bulk model on `[p†, 2]`, linear line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalModel<T> {
    pub b0: B0Model<T>,
    pub p_dagger: T,
}

pub const DEFAULT_P_DAGGER: f64 = -2.0;

impl<T: Real> UniversalModel<T> {
    pub fn kraetzer() -> Self {
        UniversalModel {
            b0: B0Model::Kraetzer,
            p_dagger: lit(DEFAULT_P_DAGGER),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_dagger <= lit(-2.0)) {
            return Err(Error::config(format!(
                "p_dagger must be <= -2, got {}",
                self.p_dagger
            )));
        }
        if let B0Model::Table(knots) = &self.b0 {
            interpolate(knots, self.p_dagger)?;
            interpolate(knots, lit(2.0))?;
        }
        Ok(())
    }

    /// One-parameter universal spectrum `B(p)`.
    pub fn b_of_p(&self, p: T) -> Result<T> {
        if p <= self.p_dagger {
            Ok(-p - T::one())
        } else if p >= lit(2.0) {
            Ok(p - T::one())
        } else {
            self.b0.eval(p)
        }
    }
}

/// Koebe bound `3p − 2q − 1`.
pub fn koebe_bound<T: Real>(p: T, q: T) -> T {
    lit::<T>(3.0) * p - lit::<T>(2.0) * q - T::one()
}

/// `B(p, q) = max{B(p), 3p − 2q − 1}`.
pub fn universal_b<T: Real>(p: T, q: T, model: &UniversalModel<T>) -> Result<T> {
    Ok(model.b_of_p(p)?.max(koebe_bound(p, q)))
}

/// Domain `p ≥ 0, q < min{2, 5p/4 − 1/2}` where the Koebe bound is attained.
pub fn feng_mcgregor_domain<T: Real>(p: T, q: T) -> bool {
    p >= T::zero() && q < lit::<T>(2.0).min(lit::<T>(1.25) * p - lit(0.5))
}

/// Pieces of the universal partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum UniversalCurve {
    /// `q = 2p` for `p ≤ p†`.
    TipLine,
    /// `2q = 3p − 1 − B₀(p)` on `[p†, 2]`.
    BulkEdge,
    /// `q = p` for `p ≥ 2`.
    LinearLine,
    /// `p = p†` above the tip line.
    TipWall,
    /// `p = 2` above the linear line.
    LinearWall,
}

impl UniversalCurve {
    pub fn name(self) -> &'static str {
        match self {
            UniversalCurve::TipLine => "tipLine",
            UniversalCurve::BulkEdge => "bulkEdge",
            UniversalCurve::LinearLine => "linearLine",
            UniversalCurve::TipWall => "tipWall",
            UniversalCurve::LinearWall => "linearWall",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalSample<T> {
    pub curve: UniversalCurve,
    pub p: T,
    pub q: T,
}

/// Samples the partition curves with `n` points each over `[p_lo, p_hi]`;
/// walls run `span` upward from their foot.
pub fn universal_partition<T: Real>(
    model: &UniversalModel<T>,
    p_lo: T,
    p_hi: T,
    span: T,
    n: usize,
) -> Result<Vec<UniversalSample<T>>> {
    model.validate()?;
    let two = lit::<T>(2.0);
    let n = n.max(2);
    let lerp = |a: T, b: T, k: usize| a + (b - a) * lit::<T>(k as f64) / lit::<T>((n - 1) as f64);
    let mut out = Vec::with_capacity(5 * n);
    if p_lo < model.p_dagger {
        for k in 0..n {
            let p = lerp(p_lo, model.p_dagger, k);
            out.push(UniversalSample {
                curve: UniversalCurve::TipLine,
                p,
                q: two * p,
            });
        }
    }
    for k in 0..n {
        let p = lerp(model.p_dagger, two, k);
        let q = (lit::<T>(3.0) * p - T::one() - model.b0.eval(p)?) / two;
        out.push(UniversalSample {
            curve: UniversalCurve::BulkEdge,
            p,
            q,
        });
    }
    if p_hi > two {
        for k in 0..n {
            let p = lerp(two, p_hi, k);
            out.push(UniversalSample {
                curve: UniversalCurve::LinearLine,
                p,
                q: p,
            });
        }
    }
    let foot_tip =
        (lit::<T>(3.0) * model.p_dagger - T::one() - model.b0.eval(model.p_dagger)?) / two;
    let foot_lin = (lit::<T>(6.0) - T::one() - model.b0.eval(two)?) / two;
    for k in 0..n {
        out.push(UniversalSample {
            curve: UniversalCurve::TipWall,
            p: model.p_dagger,
            q: lerp(foot_tip, foot_tip + span, k),
        });
    }
    for k in 0..n {
        out.push(UniversalSample {
            curve: UniversalCurve::LinearWall,
            p: two,
            q: lerp(foot_lin, foot_lin + span, k),
        });
    }
    Ok(out)
}

/// Regions of the small-κ limit of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KoebeRegion {
    /// `β = −p − 1`.
    I,
    /// `β = 0`.
    II,
    /// `β = 3p − 2q − 1`.
    IV,
}

/// Limit curves as `κ → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KoebeLimit {
    /// Red parabola limit `3p − 2q = 0`, as `(a, b, c)` in `a·p + b·q + c = 0`.
    pub red: (f64, f64, f64),
    /// Green parabola limit `3p − 2q − 1 = 0`.
    pub green: (f64, f64, f64),
    /// Lower quartic branch limit `q = 2p`.
    pub quartic: (f64, f64, f64),
    pub q0: (f64, f64),
}

pub fn koebe_limit_partition() -> KoebeLimit {
    KoebeLimit {
        red: (3.0, -2.0, 0.0),
        green: (3.0, -2.0, -1.0),
        quartic: (2.0, -1.0, 0.0),
        q0: (-1.0, -2.0),
    }
}

/// Region and spectrum of the `κ → 0` diagram.
pub fn koebe_limit_classify<T: Real>(p: T, q: T) -> (KoebeRegion, T) {
    let two = lit::<T>(2.0);
    let koebe = koebe_bound(p, q);
    if p <= -T::one() {
        if q >= two * p {
            (KoebeRegion::I, -p - T::one())
        } else {
            (KoebeRegion::IV, koebe)
        }
    } else if koebe <= T::zero() {
        (KoebeRegion::II, T::zero())
    } else {
        (KoebeRegion::IV, koebe)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{classify, special_points, Region};

    #[test]
    fn reference_values() {
        let m = UniversalModel::<f64>::kraetzer();
        assert_eq!(universal_b(3.0, 3.0, &m).unwrap(), 2.0);
        assert!(feng_mcgregor_domain(2.0, 1.0));
        assert!(!feng_mcgregor_domain(-0.1, -5.0));
        assert!(!feng_mcgregor_domain(4.0, 2.0));
        assert_eq!(m.b_of_p(-2.0).unwrap(), 1.0);
        assert_eq!(m.b_of_p(2.0).unwrap(), 1.0);
    }

    #[test]
    fn kraetzer_triple_point() {
        let m = UniversalModel::<f64>::kraetzer();
        let q_tip = 2.0 * -2.0;
        let q_bulk = (3.0 * -2.0 - 1.0 - m.b0.eval(-2.0).unwrap()) / 2.0;
        assert_eq!((q_tip, q_bulk), (-4.0, -4.0));
        assert_eq!(universal_b(-2.0, -4.0, &m).unwrap(), 1.0);
        assert_eq!(koebe_bound(-2.0, -4.0), 1.0);
    }

    #[test]
    fn partition_curves_balance_both_sides() {
        let m = UniversalModel::<f64>::kraetzer();
        let samples = universal_partition(&m, -6.0, 6.0, 4.0, 50).unwrap();
        for s in samples.iter().filter(|s| {
            matches!(
                s.curve,
                UniversalCurve::TipLine | UniversalCurve::BulkEdge | UniversalCurve::LinearLine
            )
        }) {
            assert!(
                (m.b_of_p(s.p).unwrap() - koebe_bound(s.p, s.q)).abs() < 1e-12,
                "{s:?}"
            );
        }
    }

    #[test]
    fn table_model() {
        let m = UniversalModel {
            b0: B0Model::Table(vec![(-2.0, 1.0), (0.0, 0.0), (2.0, 1.0)]),
            p_dagger: -2.0,
        };
        m.validate().unwrap();
        assert_eq!(m.b_of_p(-1.0).unwrap(), 0.5);
        assert_eq!(m.b_of_p(1.5).unwrap(), 0.75);
        let short = UniversalModel {
            b0: B0Model::Table(vec![(-1.0, 1.0), (2.0, 1.0)]),
            p_dagger: -2.0,
        };
        assert!(matches!(short.validate(), Err(Error::Domain(_))));
        let unsorted = B0Model::Table(vec![(1.0, 1.0), (0.0, 0.0)]);
        assert!(matches!(unsorted.eval(0.5), Err(Error::Config(_))));
    }

    #[test]
    fn koebe_limit_values() {
        let l = koebe_limit_partition();
        let (a, b, c) = l.green;
        assert_eq!(a * 1.0 + b * 1.0 + c, 0.0);
        assert_eq!(l.q0, (-1.0, -2.0));
        assert_eq!(koebe_limit_classify(0.0f64, 0.0), (KoebeRegion::II, 0.0));
        assert_eq!(koebe_limit_classify(-3.0f64, 0.0), (KoebeRegion::I, 2.0));
        assert_eq!(koebe_limit_classify(2.0f64, 0.0), (KoebeRegion::IV, 5.0));
    }

    #[test]
    fn small_kappa_approaches_the_limit() {
        let k = 1e-4f64;
        let sp = special_points(k);
        assert!((sp.q0_point.0 + 1.0).abs() < 1e-3 && (sp.q0_point.1 + 2.0).abs() < 1e-3);
        for (p, q) in [
            (0.0f64, 0.0f64),
            (-3.0, 0.0),
            (2.0, 0.0),
            (0.5, 1.0),
            (-2.0, -6.0),
        ] {
            let pt = classify(p, q, k).unwrap();
            let (r, beta) = koebe_limit_classify(p, q);
            let want = match r {
                KoebeRegion::I => Region::I,
                KoebeRegion::II => Region::II,
                KoebeRegion::IV => Region::IV,
            };
            assert_eq!(pt.region, want, "({p}, {q})");
            assert!(
                (pt.beta - beta).abs() < 1e-2,
                "({p}, {q}): {} vs {beta}",
                pt.beta
            );
        }
    }
}
