use num_complex::Complex64;
use serde::Serialize;
use sle_lab::moments::{
    circle_points, closed_moduli, closed_one_point, closed_two_point, estimate_moduli,
    estimate_one_point, estimate_two_point, extract_log_coeffs, integral_means_scan, kappa2_theory,
    log_radius_grid, parabola_gamma_of, parabola_point, MeansIntegrand, MomentEstimate,
    DEFAULT_ANGULAR_POINTS, DEFAULT_COEFF_RADIUS, DEFAULT_FFT_SIZE, DEFAULT_N_MAX,
};
use sle_lab::residual::{run_suite, Suite};
use sle_lab::sim::{sample_batch, stationarity_diagnostic, SimConfig, WholePlaneSample};
use sle_lab::spectrum::{
    classify_mfold, feng_mcgregor_domain, koebe_bound, koebe_limit_classify, mfold_inverse,
    phase_diagram, quartic_asymptotes, quartic_hyperbola_residual, separatrix_catalog,
    special_points, universal_b, universal_partition, xy_inverse, xy_spectra, GridSpec,
    SpectrumPoint, UniversalModel, XyLine, DEFAULT_GRID_MARGIN, DEFAULT_GRID_SIZE,
};
use sle_lab::SimConfig64;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::emit;

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SUITE_SEED: u64 = 7;
const TOL_K: f64 = 3.0;
const TOL_FLOOR: f64 = 0.01;

fn sim_config(cfg: &RunConfig, kappa: f64) -> Result<SimConfig64, CliError> {
    let mut sim = SimConfig::new(kappa).with_seed(cfg.seed.unwrap_or(0));
    if let Some(h) = cfg.horizon {
        sim = sim.with_horizon(h);
    }
    if let Some(dt) = cfg.dt {
        sim = sim.with_dt(dt);
    }
    sim.validate()?;
    Ok(sim)
}

fn points(cfg: &RunConfig) -> Result<&[Complex64], CliError> {
    if cfg.z.is_empty() {
        return Err(CliError::Validation("--z needs at least one point".into()));
    }
    Ok(&cfg.z)
}

/// `(p, q)` and the parabola parameter when the pair is integrable.
fn exponents(cfg: &RunConfig, kappa: f64) -> Result<(f64, f64, Option<f64>), CliError> {
    if let Some(g) = cfg.gamma {
        let (p, q) = parabola_point(kappa, g);
        let clash = |given: Option<f64>, v: f64| {
            given.is_some_and(|x| (x - v).abs() > 1e-9 * (1.0 + v.abs()))
        };
        if clash(cfg.p, p) || clash(cfg.q, q) {
            return Err(CliError::Validation(format!(
                "--gamma {g} fixes (p, q) = ({p}, {q}), which conflicts with --p/--q"
            )));
        }
        return Ok((p, q, Some(g)));
    }
    let p = RunConfig::need(cfg.p, "p")?;
    let q = RunConfig::need(cfg.q, "q")?;
    Ok((p, q, parabola_gamma_of(kappa, p, q)))
}

fn batch(
    cfg: &RunConfig,
    sim: &SimConfig64,
    pts: &[Complex64],
) -> Result<Vec<WholePlaneSample<f64>>, CliError> {
    let n = RunConfig::positive(cfg.samples, DEFAULT_SAMPLES, "samples")?;
    Ok(sample_batch(sim, pts, n)?)
}

fn finite(est: &MomentEstimate<f64>, what: &str) -> Result<(), CliError> {
    if est.value.re.is_finite() && est.value.im.is_finite() && est.stderr().is_finite() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "{what} estimate overflowed: {}",
            est.value
        )))
    }
}

pub fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let sim = sim_config(cfg, kappa)?;
    let samples = batch(cfg, &sim, points(cfg)?)?;
    let rows: Vec<_> = samples.iter().flat_map(|s| s.rows()).collect();
    emit(cfg, "simulate", &rows)
}

#[derive(Serialize)]
struct MomentOut {
    kind: &'static str,
    z_re: f64,
    z_im: f64,
    z2_re: Option<f64>,
    z2_im: Option<f64>,
    p: f64,
    q: f64,
    kappa: f64,
    estimate_re: f64,
    estimate_im: f64,
    stderr_re: f64,
    stderr_im: f64,
    median_of_means: Option<f64>,
    n: usize,
    closed_form_re: Option<f64>,
    closed_form_im: Option<f64>,
    agrees: Option<bool>,
}

impl MomentOut {
    fn new(
        kind: &'static str,
        z: Complex64,
        z2: Option<Complex64>,
        (p, q): (f64, f64),
        est: &MomentEstimate<f64>,
        closed: Option<Complex64>,
    ) -> Self {
        MomentOut {
            kind,
            z_re: z.re,
            z_im: z.im,
            z2_re: z2.map(|w| w.re),
            z2_im: z2.map(|w| w.im),
            p,
            q,
            kappa: est.kappa,
            estimate_re: est.value.re,
            estimate_im: est.value.im,
            stderr_re: est.stderr_re,
            stderr_im: est.stderr_im,
            median_of_means: est.median_of_means,
            n: est.n_samples,
            closed_form_re: closed.map(|c| c.re),
            closed_form_im: closed.map(|c| c.im),
            agrees: closed.map(|c| est.agrees_with(c, TOL_K, TOL_FLOOR)),
        }
    }
}

pub fn moments(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let (p, q, gamma) = exponents(cfg, kappa)?;
    let sim = sim_config(cfg, kappa)?;
    let pts = points(cfg)?;
    let samples = batch(cfg, &sim, pts)?;
    let mut rows = Vec::new();
    for &z in pts {
        let one = estimate_one_point(&samples, p, q, z)?;
        finite(&one, "one-point")?;
        let closed = gamma.map(|g| closed_one_point(z, kappa, g));
        rows.push(MomentOut::new("one_point", z, None, (p, q), &one, closed));
        let modl = estimate_moduli(&samples, p, q, z)?;
        finite(&modl, "moduli")?;
        let closed = gamma.map(|g| Complex64::new(closed_moduli(z, kappa, g), 0.0));
        rows.push(MomentOut::new("moduli", z, None, (p, q), &modl, closed));
    }
    emit(cfg, "moments", &rows)
}

pub fn two_point(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let (p, q, gamma) = exponents(cfg, kappa)?;
    let z1 = points(cfg)?;
    if cfg.z2.len() != z1.len() {
        return Err(CliError::Validation(format!(
            "--z2 needs one point per --z point ({} vs {})",
            cfg.z2.len(),
            z1.len()
        )));
    }
    let mut all: Vec<Complex64> = Vec::new();
    for &w in z1.iter().chain(&cfg.z2) {
        if w != Complex64::new(0.0, 0.0) && !all.contains(&w) {
            all.push(w);
        }
    }
    let sim = sim_config(cfg, kappa)?;
    let samples = batch(cfg, &sim, &all)?;
    let mut rows = Vec::new();
    for (&a, &b) in z1.iter().zip(&cfg.z2) {
        let est = estimate_two_point(&samples, p, q, a, b)?;
        finite(&est, "two-point")?;
        let closed = gamma.map(|g| closed_two_point(a, b.conj(), kappa, g));
        rows.push(MomentOut::new(
            "two_point",
            a,
            Some(b),
            (p, q),
            &est,
            closed,
        ));
    }
    emit(cfg, "two-point", &rows)
}

#[derive(Serialize)]
struct CoeffOut {
    n: usize,
    mean_re: f64,
    mean_im: f64,
    mean_stderr_re: f64,
    mean_stderr_im: f64,
    mean_sq: f64,
    mean_sq_stderr: f64,
    cross_re: Option<f64>,
    cross_im: Option<f64>,
    cross_stderr_re: Option<f64>,
    cross_stderr_im: Option<f64>,
    theory_mean: Option<f64>,
    theory_mean_sq: Option<f64>,
    theory_cross: Option<f64>,
    radius: f64,
    fft_size: usize,
    n_samples: usize,
    noise_amplification: f64,
    aliasing_factor: f64,
}

pub fn log_coeffs(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let r = cfg.radius.unwrap_or(DEFAULT_COEFF_RADIUS);
    if !(r > 0.0 && r < 1.0) {
        return Err(CliError::Validation(format!(
            "--radius must lie in (0, 1), got {r}"
        )));
    }
    let m = RunConfig::positive(cfg.points, DEFAULT_FFT_SIZE, "points")?;
    let n_max = RunConfig::positive(
        cfg.n_max,
        DEFAULT_N_MAX.min(m.saturating_sub(1) / 2).max(1),
        "n-max",
    )?;
    let sim = sim_config(cfg, kappa)?;
    let samples = batch(cfg, &sim, &circle_points(r, m))?;
    let stats = extract_log_coeffs(&samples, r, m, n_max)?;
    let theory = kappa == 2.0;
    let rows: Vec<CoeffOut> = stats
        .rows
        .iter()
        .map(|row| {
            let (tm, tsq, tc) = kappa2_theory(row.n);
            let has_cross = row.cross.is_some();
            CoeffOut {
                n: row.n,
                mean_re: row.mean.re,
                mean_im: row.mean.im,
                mean_stderr_re: row.mean_stderr_re,
                mean_stderr_im: row.mean_stderr_im,
                mean_sq: row.mean_sq,
                mean_sq_stderr: row.mean_sq_stderr,
                cross_re: row.cross.map(|c| c.re),
                cross_im: row.cross.map(|c| c.im),
                cross_stderr_re: has_cross.then_some(row.cross_stderr_re),
                cross_stderr_im: has_cross.then_some(row.cross_stderr_im),
                theory_mean: theory.then_some(tm),
                theory_mean_sq: theory.then_some(tsq),
                theory_cross: (theory && has_cross).then_some(tc),
                radius: stats.radius,
                fft_size: stats.fft_size,
                n_samples: stats.n_samples,
                noise_amplification: stats.noise_amplification,
                aliasing_factor: stats.aliasing_factor,
            }
        })
        .collect();
    emit(cfg, "log-coeffs", &rows)
}

#[derive(Serialize)]
struct ScanOut {
    source: &'static str,
    radius: Option<f64>,
    integral: Option<f64>,
    beta: Option<f64>,
    status: String,
}

pub fn means_scan(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let (p, q, gamma) = exponents(cfg, kappa)?;
    let (r_lo, r_hi) = RunConfig::range(&cfg.r_range, "r-range")?.unwrap_or((0.5, 0.999));
    let n = RunConfig::positive(cfg.resolution, 16, "resolution")?;
    let radii = log_radius_grid(r_lo, r_hi, n);
    let (source, scan) = match (gamma, cfg.samples) {
        (Some(g), None) => {
            let angular = RunConfig::positive(cfg.points, DEFAULT_ANGULAR_POINTS, "points")?;
            let scan = integral_means_scan(
                &MeansIntegrand::ClosedForm { gamma: g },
                p,
                q,
                kappa,
                &radii,
                angular,
            )?;
            ("closed_form", scan)
        }
        _ => {
            let angular = RunConfig::positive(cfg.points, 64, "points")?;
            let grid: Vec<Complex64> = radii
                .iter()
                .flat_map(|&r| {
                    (0..angular).map(move |j| {
                        Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / angular as f64)
                    })
                })
                .collect();
            let sim = sim_config(cfg, kappa)?;
            let samples = batch(cfg, &sim, &grid)?;
            let scan = integral_means_scan(
                &MeansIntegrand::MonteCarlo(&samples),
                p,
                q,
                kappa,
                &radii,
                angular,
            )?;
            ("monte_carlo", scan)
        }
    };
    let status = serde_json::to_value(scan.status)?
        .as_str()
        .unwrap_or_default()
        .to_string();
    let mut rows: Vec<ScanOut> = scan
        .radii
        .iter()
        .zip(&scan.integrals)
        .map(|(&r, &v)| ScanOut {
            source,
            radius: Some(r),
            integral: Some(v),
            beta: None,
            status: status.clone(),
        })
        .collect();
    if scan.integrals.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Numerical("integral means overflowed".into()));
    }
    rows.push(ScanOut {
        source,
        radius: None,
        integral: None,
        beta: scan.beta,
        status,
    });
    emit(cfg, "means-scan", &rows)
}

#[derive(Serialize)]
struct SpectrumOut {
    p: f64,
    q: f64,
    kappa: f64,
    m: i32,
    region: String,
    beta: f64,
    adjacent: String,
}

impl From<&SpectrumPoint<f64>> for SpectrumOut {
    fn from(s: &SpectrumPoint<f64>) -> Self {
        SpectrumOut {
            p: s.p,
            q: s.q,
            kappa: s.kappa,
            m: s.m,
            region: s.region.to_string(),
            beta: s.beta,
            adjacent: join_regions(s),
        }
    }
}

fn join_regions(s: &SpectrumPoint<f64>) -> String {
    s.adjacent
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let p = RunConfig::need(cfg.p, "p")?;
    let q = RunConfig::need(cfg.q, "q")?;
    let pt = classify_mfold(p, q, kappa, cfg.m.unwrap_or(1))?;
    emit(cfg, "spectrum", &[SpectrumOut::from(&pt)])
}

#[derive(Serialize)]
struct PhaseOut {
    kind: &'static str,
    name: String,
    param: Option<f64>,
    p: f64,
    q: f64,
    region: Option<String>,
    beta: Option<f64>,
    adjacent: String,
}

pub fn phase_diagram_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let m = cfg.m.unwrap_or(1);
    let mut grid = GridSpec::around_special_points(kappa, m)?;
    if let Some((lo, hi)) = RunConfig::range(&cfg.p_range, "p-range")? {
        (grid.p_lo, grid.p_hi) = (lo, hi);
    }
    if let Some((lo, hi)) = RunConfig::range(&cfg.q_range, "q-range")? {
        (grid.q_lo, grid.q_hi) = (lo, hi);
    }
    let n = RunConfig::positive(cfg.resolution, DEFAULT_GRID_SIZE, "resolution")?;
    (grid.np, grid.nq) = (n, n);
    let cells = phase_diagram(kappa, m, &grid)?;
    let span = cfg.span.unwrap_or(DEFAULT_GRID_MARGIN);
    let n_curve = RunConfig::positive(cfg.curve_points, 200, "curve-points")?;

    let mut rows: Vec<PhaseOut> = Vec::with_capacity(cells.len() + 16 * n_curve);
    let sp = special_points(kappa);
    let named = [
        ("P0", sp.p0_point),
        ("P1", sp.p1_point),
        ("Q0", sp.q0_point),
        ("Q1", sp.q1_point),
        ("T0", sp.t0_point),
        ("T1", sp.t1_point),
        ("T2", sp.t2_point),
        ("Pstar", (sp.p_star, 0.0)),
    ];
    for (name, (p, q)) in named {
        let (p, q) = mfold_inverse(m, p, q)?;
        let s = classify_mfold(p, q, kappa, m)?;
        rows.push(PhaseOut {
            kind: "point",
            name: name.into(),
            param: None,
            p,
            q,
            region: Some(s.region.to_string()),
            beta: Some(s.beta),
            adjacent: join_regions(&s),
        });
    }
    for c in separatrix_catalog(kappa, m, span, n_curve)? {
        rows.push(PhaseOut {
            kind: "curve",
            name: c.curve.name().into(),
            param: Some(c.param),
            p: c.p,
            q: c.q,
            region: None,
            beta: None,
            adjacent: String::new(),
        });
    }
    for s in &cells {
        rows.push(PhaseOut {
            kind: "cell",
            name: String::new(),
            param: None,
            p: s.p,
            q: s.q,
            region: Some(s.region.to_string()),
            beta: Some(s.beta),
            adjacent: join_regions(s),
        });
    }
    emit(cfg, "phase-diagram", &rows)
}

#[derive(Serialize, Default)]
struct XyOut {
    kind: &'static str,
    name: String,
    x: Option<f64>,
    y: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
    region: Option<String>,
    beta: Option<f64>,
    beta_tip: Option<f64>,
    beta_bulk: Option<f64>,
    beta_lin: Option<f64>,
    beta_mixed: Option<f64>,
    hyperbola: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
}

fn line_row(name: &str, l: XyLine<f64>) -> XyOut {
    XyOut {
        kind: "line",
        name: name.into(),
        a: Some(l.a),
        b: Some(l.b),
        c: Some(l.c),
        ..Default::default()
    }
}

pub fn xy_geometry(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let asym = quartic_asymptotes(kappa);
    let (cx, cy) = asym.center;
    let (x_lo, x_hi) =
        RunConfig::range(&cfg.p_range, "p-range")?.unwrap_or((1e-3, cx + 12.0 + kappa));
    let (y_lo, y_hi) =
        RunConfig::range(&cfg.q_range, "q-range")?.unwrap_or((1e-3, cy + 6.0 + kappa / 2.0));
    let n = RunConfig::positive(cfg.resolution, 200, "resolution")?;
    let axis = |lo: f64, hi: f64, i: usize| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut rows = vec![
        XyOut {
            kind: "center",
            name: "hyperbolaCenter".into(),
            x: Some(cx),
            y: Some(cy),
            ..Default::default()
        },
        line_row("upperAsymptote", asym.upper),
        line_row("lowerAsymptote", asym.lower),
        XyOut {
            kind: "constant",
            name: "lineOffset".into(),
            beta: Some(asym.line_offset),
            ..Default::default()
        },
        XyOut {
            kind: "constant",
            name: "parabolaConstant".into(),
            beta: Some(asym.parabola_constant),
            ..Default::default()
        },
        XyOut {
            kind: "constant",
            name: "lowerComponentRelevant".into(),
            beta: Some(f64::from(u8::from(asym.lower_component_relevant))),
            ..Default::default()
        },
    ];
    for j in 0..n {
        for i in 0..n {
            let (x, y) = (axis(x_lo, x_hi, i), axis(y_lo, y_hi, j));
            let sp = xy_spectra(x, y, kappa);
            let (p, q, region, beta) = match xy_inverse(x, y, kappa) {
                Ok((p, q)) => {
                    let s = classify_mfold(p, q, kappa, 1)?;
                    (Some(p), Some(q), Some(s.region.to_string()), Some(s.beta))
                }
                Err(_) => (None, None, None, None),
            };
            rows.push(XyOut {
                kind: "cell",
                name: String::new(),
                x: Some(x),
                y: Some(y),
                p,
                q,
                region,
                beta,
                beta_tip: Some(sp.tip),
                beta_bulk: Some(sp.bulk),
                beta_lin: Some(sp.lin),
                beta_mixed: Some(sp.mixed),
                hyperbola: Some(quartic_hyperbola_residual(x, y, kappa)),
                ..Default::default()
            });
        }
    }
    emit(cfg, "xy-geometry", &rows)
}

#[derive(Serialize)]
struct UniversalOut {
    kind: &'static str,
    name: String,
    p: f64,
    q: f64,
    b: Option<f64>,
    b_of_p: Option<f64>,
    koebe: Option<f64>,
    koebe_attained: Option<bool>,
    feng_mcgregor: Option<bool>,
    koebe_limit_region: Option<String>,
    koebe_limit_beta: Option<f64>,
}

pub fn universal(cfg: &RunConfig) -> Result<(), CliError> {
    let mut model = UniversalModel::kraetzer();
    if let Some(pd) = cfg.p_dagger {
        model.p_dagger = pd;
    }
    model.validate()?;
    let (p_lo, p_hi) = RunConfig::range(&cfg.p_range, "p-range")?.unwrap_or((-6.0, 6.0));
    let (q_lo, q_hi) = RunConfig::range(&cfg.q_range, "q-range")?.unwrap_or((-12.0, 6.0));
    let n_curve = RunConfig::positive(cfg.curve_points, 200, "curve-points")?;
    let span = cfg.span.unwrap_or(DEFAULT_GRID_MARGIN);
    let mut rows = Vec::new();
    for s in universal_partition(&model, p_lo, p_hi, span, n_curve)? {
        rows.push(UniversalOut {
            kind: "curve",
            name: s.curve.name().into(),
            p: s.p,
            q: s.q,
            b: None,
            b_of_p: None,
            koebe: None,
            koebe_attained: None,
            feng_mcgregor: None,
            koebe_limit_region: None,
            koebe_limit_beta: None,
        });
    }
    let n = RunConfig::positive(cfg.resolution, 100, "resolution")?;
    let axis = |lo: f64, hi: f64, i: usize| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    for j in 0..n {
        for i in 0..n {
            let (p, q) = (axis(p_lo, p_hi, i), axis(q_lo, q_hi, j));
            let b = universal_b(p, q, &model)?;
            let bp = model.b_of_p(p)?;
            let k = koebe_bound(p, q);
            let (lr, lb) = koebe_limit_classify(p, q);
            rows.push(UniversalOut {
                kind: "cell",
                name: String::new(),
                p,
                q,
                b: Some(b),
                b_of_p: Some(bp),
                koebe: Some(k),
                koebe_attained: Some(k >= bp),
                feng_mcgregor: Some(feng_mcgregor_domain(p, q)),
                koebe_limit_region: Some(format!("{lr:?}")),
                koebe_limit_beta: Some(lb),
            });
        }
    }
    emit(cfg, "universal", &rows)
}

#[derive(Serialize)]
struct CheckOut {
    check: String,
    inputs: String,
    residual: f64,
    order_estimate: Option<f64>,
    pass: bool,
}

pub fn check(cfg: &RunConfig) -> Result<(), CliError> {
    let suite: Suite = cfg.suite.as_deref().unwrap_or("all").parse()?;
    let reports = run_suite(suite, cfg.seed.unwrap_or(DEFAULT_SUITE_SEED))?;
    let rows: Vec<CheckOut> = reports
        .iter()
        .map(|r| CheckOut {
            check: r.check.clone(),
            inputs: r
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";"),
            residual: r.residual,
            order_estimate: r.order_estimate,
            pass: r.pass,
        })
        .collect();
    emit(cfg, "check", &rows)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::CheckFailed {
            failed,
            total: rows.len(),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct DiagnoseOut {
    horizon: f64,
    estimate: f64,
    stderr: f64,
    n_samples: usize,
    closed_form: Option<f64>,
}

pub fn diagnose(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = cfg.kappa()?;
    let (p, q, gamma) = exponents(cfg, kappa)?;
    let z = *points(cfg)?.first().expect("checked non-empty");
    if cfg.z.len() > 1 {
        return Err(CliError::Validation("diagnose takes a single --z".into()));
    }
    let horizons = if cfg.horizons.is_empty() {
        vec![1.0, 2.0, 4.0, 8.0]
    } else {
        cfg.horizons.clone()
    };
    let sim = sim_config(cfg, kappa)?;
    let n = RunConfig::positive(cfg.samples, DEFAULT_SAMPLES, "samples")?;
    let closed = gamma.map(|g| closed_moduli(z, kappa, g));
    let rows: Vec<DiagnoseOut> = stationarity_diagnostic(&sim, z, &horizons, n, p, q)?
        .into_iter()
        .map(|r| DiagnoseOut {
            horizon: r.horizon,
            estimate: r.estimate,
            stderr: r.stderr,
            n_samples: r.n_samples,
            closed_form: closed,
        })
        .collect();
    if rows.iter().any(|r| !r.estimate.is_finite()) {
        return Err(CliError::Numerical(
            "stationarity estimate overflowed".into(),
        ));
    }
    emit(cfg, "diagnose", &rows)
}
