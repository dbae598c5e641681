use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{closed_moduli, parabola_point};
use crate::residual::{
    abc_check, duality_check, moduli_g_residual, moduli_residual, ode_residual, order_report,
    pde_residual, richardson, seed_systems, ModuliCandidate, OnePointCandidate, OrderReport,
    TwoPointCandidate, CONVERGENCE_STEP, DEFAULT_STEP,
};
use crate::sim::stream_rng;
use crate::spectrum::{
    beta_0, beta_1, beta_lin, brennan_line_margin, curve_eval, delta0_abscissa,
    feng_mcgregor_domain, green_residual, koebe_limit_classify, koebe_limit_partition,
    mfold_inverse, mfold_map, mixed_bulk_factors, quartic_branch_is_monotone, quartic_residual,
    region_sequence, residual_scale, separatrix_gaps, special_points, universal_b, xy_forward,
    xy_inverse, xy_spectra, CurveId, KoebeRegion, Region, UniversalModel,
};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: BTreeMap<String, f64>,
    pub residual: f64,
    pub order_estimate: Option<f64>,
    pub pass: bool,
}

impl CheckReport {
    fn new(check: &str, inputs: &[(&str, f64)], residual: f64, pass: bool) -> Self {
        CheckReport {
            check: check.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            residual,
            order_estimate: None,
            pass,
        }
    }

    fn below(check: &str, inputs: &[(&str, f64)], residual: f64, tol: f64) -> Self {
        Self::new(check, inputs, residual, residual < tol)
    }

    fn with_order(mut self, ratio: Option<f64>) -> Self {
        self.order_estimate = ratio.map(f64::log2);
        self
    }
}

/// Groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Residual,
    Separatrix,
    Mfold,
    Universal,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Residual,
        Suite::Separatrix,
        Suite::Mfold,
        Suite::Universal,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Residual => "residual",
            Suite::Separatrix => "separatrix",
            Suite::Mfold => "mfold",
            Suite::Universal => "universal",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::usage(format!("unknown suite '{s}'")))
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::Algebra => algebra_suite(seed),
        Suite::Residual => residual_suite(),
        Suite::Separatrix => separatrix_suite(),
        Suite::Mfold => mfold_suite(seed),
        Suite::Universal => universal_suite(),
        Suite::All => {
            let mut out = algebra_suite(seed)?;
            out.extend(residual_suite()?);
            out.extend(separatrix_suite()?);
            out.extend(mfold_suite(seed)?);
            out.extend(universal_suite()?);
            Ok(out)
        }
    }
}

const KAPPAS: [f64; 3] = [2.0, 6.0, 50.0];
const IDENTITY_TOL: f64 = 1e-12;

/// Point of the open sector where `(x, y)` coordinates exist.
fn sector_point(rng: &mut impl Rng, kappa: f64) -> (f64, f64) {
    let p = delta0_abscissa(kappa) - rng.gen_range(1e-3..40.0);
    let q = p + 0.5 / kappa - rng.gen_range(1e-3..40.0);
    (p, q)
}

pub fn algebra_suite(seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = stream_rng(seed, 1);
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (p, q) = (rng.gen_range(-50.0f64..50.0), rng.gen_range(-50.0f64..50.0));
        let (a, k) = (rng.gen_range(-10.0f64..10.0), rng.gen_range(0.01f64..60.0));
        let (_, sum) = abc_check(p, q, a, k);
        worst = worst.max(sum.abs() / (1.0 + p.abs() + q.abs() + a.abs() + k * a * a));
    }
    out.push(CheckReport::below(
        "abc_sum",
        &[("samples", 1e4)],
        worst,
        IDENTITY_TOL,
    ));

    let (t, sum) = abc_check(2.0f64, 2.0, 1.0, 2.0);
    let r = t.a.abs().max(t.b.abs()).max(t.c.abs()).max(sum.abs());
    out.push(CheckReport::below(
        "abc_red_seed",
        &[("kappa", 2.0), ("p", 2.0), ("q", 2.0), ("alpha", 1.0)],
        r,
        IDENTITY_TOL,
    ));

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (p, g, k) = (
            rng.gen_range(-50.0f64..50.0),
            rng.gen_range(-10.0f64..10.0),
            rng.gen_range(0.1f64..60.0),
        );
        worst =
            worst.max(duality_check(p, g, k) / (1.0 + p.abs() + k * g * g + g.abs() * (2.0 + k)));
    }
    out.push(CheckReport::below(
        "duality",
        &[("samples", 1e3)],
        worst,
        IDENTITY_TOL,
    ));
    out.push(CheckReport::below(
        "duality_fixed_point",
        &[("kappa", 6.0), ("p", 1.0), ("gamma", 0.2)],
        duality_check(1.0, 0.2, 6.0),
        IDENTITY_TOL,
    ));

    for kappa in KAPPAS {
        let (mut fact, mut lin, mut trip, mut neg) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..1000 {
            let (p, q) = sector_point(&mut rng, kappa);
            let (x, y) = xy_forward(p, q, kappa)?;
            let b1 = beta_1(p, q, kappa)?;
            let b0 = beta_0(p, kappa)?;
            let (r, g) = mixed_bulk_factors(x, y, kappa);
            let scale = 1.0 + x * x + y * y + kappa * (b1.abs() + b0.abs());
            fact = fact.max((4.0 * kappa * (b1 - b0) - r * g).abs() / scale);
            let s = xy_spectra(x, y, kappa);
            let d = b1 - beta_lin(p, kappa);
            lin =
                lin.max((d - (kappa / 4.0 - y).powi(2) / kappa).abs() / (1.0 + b1.abs() + p.abs()));
            lin = lin.max((s.mixed - b1).abs() / (1.0 + b1.abs() + p.abs() + q.abs()));
            neg = neg.max(-d);
            let (p2, q2) = xy_inverse(x, y, kappa)?;
            trip = trip.max((p2 - p).abs().max((q2 - q).abs()) / (1.0 + p.abs() + q.abs()));
        }
        let inputs = [("kappa", kappa), ("samples", 1e3)];
        out.push(CheckReport::below(
            "xy_factorization",
            &inputs,
            fact,
            IDENTITY_TOL,
        ));
        out.push(CheckReport::below(
            "mixed_minus_linear",
            &inputs,
            lin,
            IDENTITY_TOL,
        ));
        out.push(CheckReport::new(
            "mixed_dominates_linear",
            &inputs,
            neg.max(0.0),
            neg <= IDENTITY_TOL,
        ));
        out.push(CheckReport::below(
            "xy_round_trip",
            &inputs,
            trip,
            IDENTITY_TOL,
        ));
    }
    Ok(out)
}

/// Twenty points with `|z| ≤ 1/2`, spread in angle.
pub fn residual_grid() -> Vec<Complex<f64>> {
    let mut pts = Vec::with_capacity(20);
    for r in [0.1, 0.2, 0.3, 0.4, 0.5] {
        for k in 0..4 {
            pts.push(Complex::from_polar(
                r,
                0.4 + k as f64 * std::f64::consts::FRAC_PI_2 + r,
            ));
        }
    }
    pts
}

const RESIDUAL_TOL: f64 = 1e-6;
const REJECT_TOL: f64 = 1e-2;
/// Probe points for the non-solution checks; the perturbations scale with `|z|`,
/// so they are evaluated away from the origin.
const PROBE_Z1: Complex<f64> = Complex::new(0.3, 0.2);
const PROBE_Z2BAR: Complex<f64> = Complex::new(0.0, 0.2);

/// Residual at the convergence step below which the stencil is exact for the
/// candidate (e.g. polynomials of degree two) and no order can be measured.
const STENCIL_EXACT: f64 = 1e-10;

/// Folds one order report into the running worst ratio; returns whether it is acceptable.
fn track_ratio(rep: &OrderReport<f64>, worst_ratio: &mut Option<f64>) -> bool {
    if rep.residual_h < STENCIL_EXACT {
        return true;
    }
    if worst_ratio.map_or(true, |w| (rep.ratio - 4.0).abs() > (w - 4.0).abs()) {
        *worst_ratio = Some(rep.ratio);
    }
    (3.0..=5.0).contains(&rep.ratio)
}

pub fn residual_suite() -> Result<Vec<CheckReport>> {
    let grid = residual_grid();
    let mut out = Vec::new();
    for (kappa, gamma) in [(6.0, 0.5), (2.0, 1.0)] {
        let (p, q) = parabola_point(kappa, gamma);
        let inputs = [
            ("kappa", kappa),
            ("gamma", gamma),
            ("p", p),
            ("q", q),
            ("points", grid.len() as f64),
        ];

        let one = OnePointCandidate::ClosedForm { gamma };
        let (mut worst, mut worst_ratio, mut ratios_ok) = (0.0f64, None, true);
        for &z in &grid {
            worst = worst.max(ode_residual(&one, z, p, q, kappa, DEFAULT_STEP)?.norm());
            let rep = order_report(CONVERGENCE_STEP, |h| ode_residual(&one, z, p, q, kappa, h))?;
            ratios_ok &= track_ratio(&rep, &mut worst_ratio);
        }
        out.push(
            CheckReport::new(
                "ode_one_point",
                &inputs,
                worst,
                worst < RESIDUAL_TOL && ratios_ok,
            )
            .with_order(worst_ratio),
        );
        let off = ode_residual(&one, PROBE_Z1, p, q + 0.1, kappa, DEFAULT_STEP)?.norm();
        out.push(CheckReport::new(
            "ode_rejects_off_parabola",
            &inputs,
            off,
            off > REJECT_TOL,
        ));

        let two = TwoPointCandidate::integrable(kappa, gamma);
        let wrong = match two {
            TwoPointCandidate::ClosedForm { gamma, beta } => TwoPointCandidate::ClosedForm {
                gamma,
                beta: beta + 0.1,
            },
            f => f,
        };
        let (mut worst, mut worst_ratio, mut ratios_ok) = (0.0f64, None, true);
        for (k, &z1) in grid.iter().enumerate() {
            let z2bar = grid[(k + 7) % grid.len()].conj();
            worst = worst.max(pde_residual(&two, z1, z2bar, p, q, kappa, DEFAULT_STEP)?.norm());
            let rep = order_report(CONVERGENCE_STEP, |h| {
                pde_residual(&two, z1, z2bar, p, q, kappa, h)
            })?;
            ratios_ok &= track_ratio(&rep, &mut worst_ratio);
        }
        out.push(
            CheckReport::new(
                "pde_two_point",
                &inputs,
                worst,
                worst < RESIDUAL_TOL && ratios_ok,
            )
            .with_order(worst_ratio),
        );
        let off = pde_residual(&wrong, PROBE_Z1, PROBE_Z2BAR, p, q, kappa, DEFAULT_STEP)?.norm();
        out.push(CheckReport::new(
            "pde_rejects_wrong_exponent",
            &inputs,
            off,
            off > REJECT_TOL,
        ));

        let moduli = ModuliCandidate::integrable(kappa, gamma);
        let (mut worst, mut worst_ratio, mut ratios_ok, mut gap) = (0.0f64, None, true, 0.0f64);
        for &z in &grid {
            // the equation is homogeneous in F and F = G/|z|^q grows near the origin,
            // so the residual is measured relative to the candidate value
            let scale = (closed_moduli(z, kappa, gamma) / z.norm().powf(q)).max(1.0);
            worst =
                worst.max(moduli_residual(&moduli, z, p, q, kappa, DEFAULT_STEP)?.norm() / scale);
            let rep = order_report(CONVERGENCE_STEP, |h| {
                moduli_residual(&moduli, z, p, q, kappa, h)
            })?;
            ratios_ok &= track_ratio(&rep, &mut worst_ratio);
            // the two forms of the equation on a non-solution
            let f = |x: f64, y: f64| Complex::new((1.0 + 0.3 * x - 0.2 * x * y).exp(), 0.0);
            let g = |x: f64, y: f64| f(x, y).scale((x * x + y * y).powf(q / 2.0));
            let rf = richardson(1e-3, |h| {
                moduli_residual(&ModuliCandidate::Function(&f), z, p, q, kappa, h)
            })?;
            let rg = richardson(1e-3, |h| {
                moduli_g_residual(&ModuliCandidate::Function(&g), z, p, q, kappa, h)
            })?;
            gap = gap.max((rg - rf.scale(z.norm().powf(q))).norm());
        }
        out.push(
            CheckReport::new(
                "moduli_sigma_form",
                &inputs,
                worst,
                worst < RESIDUAL_TOL && ratios_ok,
            )
            .with_order(worst_ratio),
        );
        out.push(CheckReport::below("moduli_forms_agree", &inputs, gap, 1e-8));
    }
    Ok(out)
}

pub fn separatrix_suite() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for kappa in KAPPAS {
        for g in separatrix_gaps(kappa, 20.0, 100)? {
            out.push(CheckReport::below(
                &format!("separatrix_{}", g.curve),
                &[("kappa", kappa), ("points", g.n_points as f64)],
                g.max_gap,
                1e-9,
            ));
        }
        let seeds = seed_systems(kappa)?;
        let curve_dev = seeds
            .red_deviation
            .max(seeds.green_deviation)
            .max(seeds.quartic_deviation);
        out.push(CheckReport::below(
            "seed_curves",
            &[("kappa", kappa)],
            curve_dev,
            1e-9,
        ));
        out.push(CheckReport::below(
            "seed_gamma0_branch",
            &[("kappa", kappa)],
            seeds.gamma0_branch_deviation,
            1e-9,
        ));
        out.push(CheckReport::new(
            "quartic_discriminant_positive",
            &[("kappa", kappa)],
            seeds.discriminant_min,
            seeds.discriminant_min > 0.0,
        ));
        for pt in &seeds.points {
            let scaled = pt.deviation / (1.0 + pt.expected.0.abs());
            out.push(CheckReport::below(
                &format!("seed_point_{}", pt.name),
                &[("kappa", kappa)],
                scaled,
                1e-9,
            ));
        }
        let sp = special_points(kappa);
        let r = green_residual(kappa, sp.p_star, 0.0)
            / residual_scale(CurveId::GreenParabola, sp.p_star, 0.0);
        out.push(CheckReport::below(
            "p_star_on_green",
            &[("kappa", kappa), ("p_star", sp.p_star)],
            r.abs(),
            1e-9,
        ));
        out.push(CheckReport::new(
            "quartic_branch_monotone",
            &[("kappa", kappa)],
            0.0,
            quartic_branch_is_monotone(kappa, 2000, 200.0),
        ));
    }
    for kappa in [2.0, 6.0, 8.0] {
        let margin = brennan_line_margin(kappa, -500.0, 500.0, 20001)?;
        out.push(CheckReport::new(
            "brennan_line_clear_of_mixed_region",
            &[("kappa", kappa)],
            margin,
            margin > 0.0,
        ));
    }
    Ok(out)
}

pub fn mfold_suite(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let mut rng = stream_rng(seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = loop {
            let m = rng.gen_range(-30..=30);
            if m != 0 {
                break m;
            }
        };
        let (p, q) = (
            rng.gen_range(-100.0f64..100.0),
            rng.gen_range(-100.0f64..100.0),
        );
        let (a, b) = mfold_map(m, p, q)?;
        let (c, d) = mfold_inverse(m, a, b)?;
        worst = worst.max((c - p).abs().max((d - q).abs()) / (1.0 + p.abs() + q.abs()));
    }
    out.push(CheckReport::below(
        "mfold_round_trip",
        &[("samples", 1e3)],
        worst,
        1e-14,
    ));

    let expected = [
        (
            30.0,
            10,
            vec![Region::I, Region::II, Region::III, Region::IV],
        ),
        (
            2.0,
            -30,
            vec![Region::I, Region::II, Region::IV, Region::III],
        ),
    ];
    for (kappa, m, want) in expected {
        let got = region_sequence(kappa, m, 0.0, 0.0, -2000.0, 2000.0, 40000)?;
        out.push(CheckReport::new(
            "mfold_region_sequence",
            &[("kappa", kappa), ("m", m as f64)],
            0.0,
            got == want,
        ));
    }

    for kappa in KAPPAS {
        let sp = special_points(kappa);
        let (p, q) = curve_eval(CurveId::GreenParabola, kappa, delta0_abscissa(kappa));
        let (_, q_m) = mfold_inverse(-1, p, q)?;
        let r = (p - sp.p0dblprime).abs().max(q_m.abs()) / (1.0 + p.abs());
        out.push(CheckReport::below(
            "mfold_minus_one_green_crossing",
            &[("kappa", kappa), ("p0dblprime", sp.p0dblprime)],
            r,
            1e-9,
        ));
        // q = 2p meets the quartic where the residual vanishes, which is only p = 0
        let at_origin = quartic_residual(kappa, 0.0, 0.0).abs();
        let away = (1..=400)
            .map(|k| {
                let p = -200.0 + k as f64 - 0.5;
                (quartic_residual(kappa, p, 2.0 * p)
                    / residual_scale(CurveId::BlueQuartic, p, 2.0 * p))
                .abs()
            })
            .fold(f64::INFINITY, f64::min);
        out.push(CheckReport::new(
            "brennan_line_meets_quartic_only_at_origin",
            &[("kappa", kappa)],
            at_origin,
            at_origin == 0.0 && away > 1e-12,
        ));
    }
    Ok(out)
}

pub fn universal_suite() -> Result<Vec<CheckReport>> {
    let model = UniversalModel::<f64>::kraetzer();
    let mut out = Vec::new();
    let b = universal_b(3.0, 3.0, &model)?;
    out.push(CheckReport::below(
        "universal_max_form",
        &[("p", 3.0), ("q", 3.0)],
        (b - 2.0).abs(),
        IDENTITY_TOL,
    ));
    let fm = feng_mcgregor_domain(2.0, 1.0)
        && !feng_mcgregor_domain(2.0, 2.0)
        && !feng_mcgregor_domain(-0.5, -3.0);
    out.push(CheckReport::new(
        "feng_mcgregor_domain",
        &[("p", 2.0), ("q", 1.0)],
        0.0,
        fm,
    ));
    let q_bulk = (3.0 * -2.0 - 1.0 - model.b0.eval(-2.0)?) / 2.0;
    let r = (q_bulk + 4.0).abs().max((2.0 * -2.0 + 4.0f64).abs());
    out.push(CheckReport::below(
        "kraetzer_triple_point",
        &[("p", -2.0), ("q", -4.0)],
        r,
        IDENTITY_TOL,
    ));
    let limit = koebe_limit_partition();
    let (a, b2, c) = limit.green;
    let ok = a + b2 + c == 0.0
        && limit.q0 == (-1.0, -2.0)
        && koebe_limit_classify(0.0, 0.0) == (KoebeRegion::II, 0.0)
        && koebe_limit_classify(2.0, 0.0) == (KoebeRegion::IV, 5.0);
    out.push(CheckReport::new("koebe_limit", &[], 0.0, ok));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in [
            Suite::Algebra,
            Suite::Residual,
            Suite::Separatrix,
            Suite::Mfold,
            Suite::Universal,
        ] {
            let reps = run_suite(suite, 7).unwrap();
            assert!(!reps.is_empty());
            for r in reps {
                assert!(r.pass, "{suite}: {r:?}");
            }
        }
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("ALGEBRA".parse::<Suite>().unwrap(), Suite::Algebra);
        assert!("nope".parse::<Suite>().is_err());
    }
}
