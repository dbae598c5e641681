use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::parabola_residual;
use crate::residual::algebra::{coeff_a, coeff_c, dual_gamma, spectrum_function};
use crate::scalar::{lit, Real};
use crate::spectrum::{curve_eval, green_residual, quartic_discriminant, special_points, CurveId};

const NEWTON_STEPS: usize = 60;
const BISECTION_STEPS: usize = 200;

/// Solves `F(u, v) = 0` by Newton's method with a central-difference Jacobian.
pub fn newton2<T: Real>(f: impl Fn(T, T) -> (T, T), start: (T, T), tol: T) -> Result<(T, T)> {
    let (mut u, mut v) = start;
    for _ in 0..NEWTON_STEPS {
        let (f1, f2) = f(u, v);
        if f1.abs().max(f2.abs()) <= tol {
            return Ok((u, v));
        }
        let hu = lit::<T>(1e-6) * (T::one() + u.abs());
        let hv = lit::<T>(1e-6) * (T::one() + v.abs());
        let (a1, a2) = f(u + hu, v);
        let (b1, b2) = f(u - hu, v);
        let (c1, c2) = f(u, v + hv);
        let (d1, d2) = f(u, v - hv);
        let j11 = (a1 - b1) / (hu + hu);
        let j21 = (a2 - b2) / (hu + hu);
        let j12 = (c1 - d1) / (hv + hv);
        let j22 = (c2 - d2) / (hv + hv);
        let det = j11 * j22 - j12 * j21;
        if det == T::zero() || !det.is_finite() {
            return Err(Error::domain("singular Jacobian in seed solve"));
        }
        u = u - (j22 * f1 - j12 * f2) / det;
        v = v - (j11 * f2 - j21 * f1) / det;
    }
    let (f1, f2) = f(u, v);
    if f1.abs().max(f2.abs()) <= tol * lit(1e3) {
        Ok((u, v))
    } else {
        Err(Error::domain(format!(
            "seed solve did not converge: residual ({f1}, {f2})"
        )))
    }
}

/// Red parabola point from `A(p, q, γ) = C(p, γ) = 0`.
pub fn red_from_seeds<T: Real>(kappa: T, gamma: T) -> Result<(T, T)> {
    newton2(
        |p, q| (coeff_a(p, q, gamma, kappa), coeff_c(p, gamma, kappa)),
        (T::zero(), T::zero()),
        tol_for(kappa, gamma),
    )
}

/// Green parabola point from `A(p, q, γ') = C(p, γ'') = 0` with dual `γ''`.
pub fn green_from_seeds<T: Real>(kappa: T, gp: T) -> Result<(T, T)> {
    let gpp = dual_gamma(gp, kappa);
    newton2(
        |p, q| (coeff_a(p, q, gp, kappa), coeff_c(p, gpp, kappa)),
        (T::zero(), T::zero()),
        tol_for(kappa, gp),
    )
}

fn tol_for<T: Real>(kappa: T, g: T) -> T {
    lit::<T>(1e-13) * (T::one() + kappa * g * g + g.abs())
}

/// Quartic point and its bulk parameter `γ₀` solved from the tip system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticSeed<T> {
    pub p: T,
    pub q: T,
    pub gamma0: T,
}

/// Solves `β(p, γ) = β(p, γ₀) − 2γ₀ − 1`, `C(p, γ₀) = 0`, `A(p, q, γ) = 0`
/// on the smaller `γ₀` root, which is the tip-relevant one.
pub fn quartic_from_seeds<T: Real>(kappa: T, gamma: T) -> Result<QuarticSeed<T>> {
    let p_of = |g0: T| (lit::<T>(2.0) + kappa * lit(0.5)) * g0 - kappa * lit(0.5) * g0 * g0;
    let tip = |g0: T| {
        let p = p_of(g0);
        spectrum_function(p, gamma, kappa) - spectrum_function(p, g0, kappa)
            + lit::<T>(2.0) * g0
            + T::one()
    };
    // tip(γ₀) is a downward parabola in γ₀; bracket its left root
    let vertex = (lit::<T>(4.0) + kappa * lit(0.5)) / (lit::<T>(2.0) * kappa);
    if tip(vertex) < T::zero() {
        return Err(Error::domain(format!(
            "no real bulk parameter for γ = {gamma}"
        )));
    }
    let mut width = T::one();
    while tip(vertex - width) > T::zero() {
        width = width + width;
        if !width.is_finite() {
            return Err(Error::domain("bulk parameter bracket diverged"));
        }
    }
    let (mut lo, mut hi) = (vertex - width, vertex);
    for _ in 0..BISECTION_STEPS {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if tip(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let gamma0 = (lo + hi) * lit(0.5);
    let p = p_of(gamma0);
    let q = p + gamma - kappa * lit(0.5) * gamma * gamma;
    Ok(QuarticSeed { p, q, gamma0 })
}

/// Lower branch `γ₀⁻ = (8+κ)/4κ − √Δ(γ)/2κ`.
pub fn gamma0_minus<T: Real>(kappa: T, gamma: T) -> T {
    (lit::<T>(8.0) + kappa) / (lit::<T>(4.0) * kappa)
        - quartic_discriminant(kappa, gamma).sqrt() / (lit::<T>(2.0) * kappa)
}

/// Sign-change roots of `f` on `[lo, hi]`, refined by bisection.
pub fn scan_roots<T: Real>(f: impl Fn(T) -> Result<T>, lo: T, hi: T, n: usize) -> Result<Vec<T>> {
    let n = n.max(2);
    let at = |k: usize| lo + (hi - lo) * lit::<T>(k as f64) / lit::<T>(n as f64);
    let mut roots = Vec::new();
    let mut prev = (at(0), f(at(0))?);
    for k in 1..=n {
        let x = at(k);
        let fx = f(x)?;
        if fx == T::zero() {
            roots.push(x);
        } else if prev.1 != T::zero() && (prev.1 < T::zero()) != (fx < T::zero()) {
            let (mut a, mut b, fa) = (prev.0, x, prev.1);
            for _ in 0..BISECTION_STEPS {
                let m = (a + b) * lit(0.5);
                if m <= a || m >= b {
                    break;
                }
                let fm = f(m)?;
                if (fm < T::zero()) == (fa < T::zero()) {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push((a + b) * lit(0.5));
        }
        prev = (x, fx);
    }
    Ok(roots)
}

/// Stationary point of `f` on `[lo, hi]`: the root of its central-difference derivative.
fn stationary<T: Real>(f: impl Fn(T) -> Result<T>, lo: T, hi: T) -> Result<T> {
    let e = lit::<T>(1e-4);
    let df = |g: T| Ok((f(g + e)? - f(g - e)?) / (e + e));
    scan_roots(df, lo, hi, 200)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::domain("no stationary point in range"))
}

/// Named point recomputed from the seed systems next to its closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedPoint<T> {
    pub name: String,
    pub seed: (T, T),
    pub expected: (T, T),
    pub deviation: T,
}

/// Everything re-derived from the seed systems for one `κ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSystems<T> {
    pub kappa: T,
    /// Largest distance between seed solutions and the parametric curves.
    pub red_deviation: T,
    pub green_deviation: T,
    pub quartic_deviation: T,
    /// Largest `|γ₀ − γ₀⁻|` along the quartic.
    pub gamma0_branch_deviation: T,
    /// Smallest `Δ(γ)` on the sampled range.
    pub discriminant_min: T,
    /// Quartic crossings of the red parabola, by increasing quartic parameter.
    pub quartic_red_crossings: Vec<(T, T)>,
    pub points: Vec<SeedPoint<T>>,
}

impl<T: Real> SeedSystems<T> {
    pub fn max_point_deviation(&self) -> T {
        self.points
            .iter()
            .fold(T::zero(), |m, p| m.max(p.deviation))
    }
}

fn dist<T: Real>(a: (T, T), b: (T, T)) -> T {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn sweep<T: Real>(lo: T, hi: T, n: usize) -> impl Iterator<Item = T> {
    (0..=n).map(move |k| lo + (hi - lo) * lit::<T>(k as f64) / lit::<T>(n as f64))
}

pub fn seed_systems<T: Real>(kappa: T) -> Result<SeedSystems<T>> {
    if !(kappa > T::zero()) {
        return Err(Error::domain(format!("kappa must be > 0, got {kappa}")));
    }
    let sp = special_points(kappa);
    let n = 400;
    let (lo, hi) = (lit::<T>(-2.0), lit::<T>(3.0));

    let mut red_deviation = T::zero();
    let mut green_deviation = T::zero();
    let mut quartic_deviation = T::zero();
    let mut gamma0_branch_deviation = T::zero();
    for g in sweep(lo, hi, n) {
        let scale = T::one() + kappa * g * g;
        red_deviation = red_deviation.max(
            dist(
                red_from_seeds(kappa, g)?,
                curve_eval(CurveId::RedParabola, kappa, g),
            ) / scale,
        );
        green_deviation = green_deviation.max(
            dist(
                green_from_seeds(kappa, g)?,
                curve_eval(CurveId::GreenParabola, kappa, g),
            ) / scale,
        );
    }
    let g_tip = T::one() + lit::<T>(2.0) / kappa;
    for g in sweep(lit::<T>(-4.0), g_tip + lit(20.0), n) {
        let s = quartic_from_seeds(kappa, g)?;
        let scale = T::one() + kappa * g * g;
        quartic_deviation = quartic_deviation
            .max(dist((s.p, s.q), curve_eval(CurveId::BlueQuartic, kappa, g)) / scale);
        gamma0_branch_deviation =
            gamma0_branch_deviation.max((s.gamma0 - gamma0_minus(kappa, g)).abs());
    }
    let discriminant_min = sweep(lit::<T>(-100.0), lit(100.0), 20000)
        .map(|g| quartic_discriminant(kappa, g))
        .fold(T::infinity(), T::min);

    let mut points = Vec::new();
    let mut push = |name: &str, seed: (T, T), expected: (T, T)| {
        points.push(SeedPoint {
            name: name.to_string(),
            seed,
            expected,
            deviation: dist(seed, expected),
        });
    };

    // red ∩ green: the green seed point lies on the red Cartesian parabola
    let green_on_red =
        |gp: T| green_from_seeds(kappa, gp).map(|(p, q)| parabola_residual(kappa, p, q));
    let rg = scan_roots(
        green_on_red,
        lit(-3.0),
        lit::<T>(3.0) + lit::<T>(4.0) / kappa,
        2000,
    )?;
    let rg: Vec<(T, T)> = rg
        .into_iter()
        .map(|g| green_from_seeds(kappa, g))
        .collect::<Result<_>>()?;
    push("P0", nearest(&rg, sp.p0_point)?, sp.p0_point);
    push("P1", nearest(&rg, sp.p1_point)?, sp.p1_point);

    // quartic ∩ red and quartic ∩ green
    let on_red = |g: T| quartic_from_seeds(kappa, g).map(|s| parabola_residual(kappa, s.p, s.q));
    let qr: Vec<(T, T)> = scan_roots(on_red, lit(-4.0), g_tip + lit(20.0), 4000)?
        .into_iter()
        .map(|g| quartic_from_seeds(kappa, g).map(|s| (s.p, s.q)))
        .collect::<Result<_>>()?;
    push("Q1", nearest(&qr, sp.q1_point)?, sp.q1_point);
    let on_green = |g: T| quartic_from_seeds(kappa, g).map(|s| green_residual(kappa, s.p, s.q));
    let qg: Vec<(T, T)> = scan_roots(on_green, lit(-4.0), g_tip + lit(20.0), 4000)?
        .into_iter()
        .map(|g| quartic_from_seeds(kappa, g).map(|s| (s.p, s.q)))
        .collect::<Result<_>>()?;
    push("Q0", nearest(&qg, sp.q0_point)?, sp.q0_point);

    // tangencies: red reaches furthest right (Δ0) and highest in q − p (Δ1); green highest in q − p
    let red_p = |g: T| red_from_seeds(kappa, g).map(|(p, _)| p);
    let red_up = |g: T| red_from_seeds(kappa, g).map(|(p, q)| q - p);
    let green_up = |g: T| green_from_seeds(kappa, g).map(|(p, q)| q - p);
    let span = lit::<T>(4.0) + lit::<T>(4.0) / kappa;
    push(
        "T0",
        red_from_seeds(kappa, stationary(red_p, -span, span)?)?,
        sp.t0_point,
    );
    push(
        "T1",
        red_from_seeds(kappa, stationary(red_up, -span, span)?)?,
        sp.t1_point,
    );
    push(
        "T2",
        green_from_seeds(kappa, stationary(green_up, -span, span)?)?,
        sp.t2_point,
    );

    Ok(SeedSystems {
        kappa,
        red_deviation,
        green_deviation,
        quartic_deviation,
        gamma0_branch_deviation,
        discriminant_min,
        quartic_red_crossings: qr,
        points,
    })
}

fn nearest<T: Real>(cands: &[(T, T)], target: (T, T)) -> Result<(T, T)> {
    cands
        .iter()
        .copied()
        .min_by(|a, b| {
            dist(*a, target)
                .partial_cmp(&dist(*b, target))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .ok_or_else(|| {
            Error::domain(format!(
                "no seed intersection found near ({}, {})",
                target.0, target.1
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce_curves_and_points() {
        for kappa in [2.0f64, 6.0, 50.0] {
            let s = seed_systems(kappa).unwrap();
            assert!(s.red_deviation < 1e-10, "κ={kappa} red {}", s.red_deviation);
            assert!(
                s.green_deviation < 1e-10,
                "κ={kappa} green {}",
                s.green_deviation
            );
            assert!(
                s.quartic_deviation < 1e-10,
                "κ={kappa} quartic {}",
                s.quartic_deviation
            );
            assert!(
                s.gamma0_branch_deviation < 1e-9,
                "κ={kappa} γ0 {}",
                s.gamma0_branch_deviation
            );
            assert!(s.discriminant_min > 0.0);
            for pt in &s.points {
                assert!(
                    pt.deviation < 1e-9 * (1.0 + pt.expected.0.abs()),
                    "κ={kappa} {pt:?}"
                );
            }
        }
    }

    #[test]
    fn quartic_meets_red_at_q1_then_origin() {
        let s = seed_systems(6.0f64).unwrap();
        assert_eq!(
            s.quartic_red_crossings.len(),
            2,
            "{:?}",
            s.quartic_red_crossings
        );
        let (a, b) = (s.quartic_red_crossings[0], s.quartic_red_crossings[1]);
        assert!(dist(a, (-3.25, -4.5)) < 1e-9);
        assert!(dist(b, (0.0, 0.0)) < 1e-9);
    }

    #[test]
    fn red_from_seeds_matches_parametrization() {
        for k in 0..=50 {
            let g = -2.0 + 5.0 * k as f64 / 50.0;
            let a = red_from_seeds(6.0, g).unwrap();
            let b = curve_eval(CurveId::RedParabola, 6.0, g);
            assert!(dist(a, b) < 1e-10);
        }
    }
}
