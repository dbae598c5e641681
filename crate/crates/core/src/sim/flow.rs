use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};
use crate::sim::{DrivingPath, SimConfig};

/// Largest number of step halvings tried before giving up on a step.
const MAX_HALVINGS: u32 = 60;

/// Reverse-flow state of one initial point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState<T> {
    pub z0: Complex<T>,
    /// Current image `f̃_t(z0)`.
    pub w: Complex<T>,
    /// Continuous branch of `log f̃_t'(z0)`.
    pub logderiv: Complex<T>,
    /// Continuous branch of `log(f̃_t(z0)/z0)`.
    pub logratio: Complex<T>,
}

impl<T: Real> FlowState<T> {
    pub fn start(z0: Complex<T>) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        FlowState {
            z0,
            w: z0,
            logderiv: zero,
            logratio: zero,
        }
    }
}

#[derive(Clone, Copy)]
struct Deriv<T> {
    w: Complex<T>,
    logderiv: Complex<T>,
    logratio: Complex<T>,
}

#[inline(always)]
fn rhs<T: Real>(w: Complex<T>, lam: Complex<T>) -> Deriv<T> {
    let d = w - lam;
    let inv = d.conj().scale(d.norm_sqr().recip());
    let u = (w + lam) * inv;
    // 2λw/(w−λ)² = (u − 1)·w/(w−λ)
    let um1 = Complex::new(u.re - T::one(), u.im);
    Deriv {
        w: w * u,
        logderiv: u - um1 * w * inv,
        logratio: u,
    }
}

/// Driving point `e^{iθ}` as a function of time within one Brownian cell.
#[derive(Clone, Copy)]
struct Cell<T> {
    t0: T,
    theta0: T,
    slope: T,
}

impl<T: Real> Cell<T> {
    #[inline(always)]
    fn lambda(&self, t: T) -> Complex<T> {
        Complex::from_polar(T::one(), self.theta0 + self.slope * (t - self.t0))
    }
}

/// One classical RK4 step of length `h` starting at `t`.
#[inline(always)]
fn rk4<T: Real>(s: &FlowState<T>, lams: [Complex<T>; 3], h: T) -> FlowState<T> {
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let sixth = h / lit::<T>(6.0);
    let k1 = rhs(s.w, lams[0]);
    let k2 = rhs(s.w + k1.w.scale(h * half), lams[1]);
    let k3 = rhs(s.w + k2.w.scale(h * half), lams[1]);
    let k4 = rhs(s.w + k3.w.scale(h), lams[2]);
    let comb = |a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>| {
        (a + (b + c).scale(two) + d).scale(sixth)
    };
    FlowState {
        z0: s.z0,
        w: s.w + comb(k1.w, k2.w, k3.w, k4.w),
        logderiv: s.logderiv + comb(k1.logderiv, k2.logderiv, k3.logderiv, k4.logderiv),
        logratio: s.logratio + comb(k1.logratio, k2.logratio, k3.logratio, k4.logratio),
    }
}

#[inline(always)]
fn accepted<T: Real>(old: &FlowState<T>, new: &FlowState<T>) -> bool {
    // NaN fails the comparison, so non-finite steps are rejected too
    let r2 = new.w.norm_sqr();
    r2 <= old.w.norm_sqr() && (new.logderiv.re + new.logratio.re).is_finite()
}

/// Advances one state across `[a, b]` inside a single Brownian cell.
///
/// `lams` holds the driving point at `a`, the midpoint and `b`, shared by all
/// points that take the fast path.
fn advance<T: Real>(
    s: &mut FlowState<T>,
    cell: &Cell<T>,
    a: T,
    b: T,
    lams: [Complex<T>; 3],
    delta: T,
) -> Result<()> {
    let span = b - a;
    if (s.w - lams[0]).norm_sqr() >= delta * delta {
        let next = rk4(s, lams, span);
        if accepted(s, &next) {
            *s = next;
            return Ok(());
        }
    }
    // sub-cycle: step shrinks quadratically with the distance to the driving point
    let half = lit::<T>(0.5);
    let floor = span * lit::<T>(f64::EPSILON) * lit::<T>(16.0);
    let mut t = a;
    while t < b {
        let lam = cell.lambda(t);
        let dist = (s.w - lam).norm();
        let ratio = (dist / delta).min(T::one());
        let mut h = (span * ratio * ratio).min(b - t);
        let mut tries = 0;
        loop {
            if h <= floor || tries > MAX_HALVINGS {
                return Err(Error::Singularity {
                    time: to_f64(t),
                    reason: format!("step rejected at |w - lambda| = {:e}", to_f64(dist)),
                });
            }
            let ls = [lam, cell.lambda(t + h * half), cell.lambda(t + h)];
            let next = rk4(s, ls, h);
            if accepted(s, &next) {
                *s = next;
                break;
            }
            h = h * half;
            tries += 1;
        }
        t = if b - (t + h) <= floor { b } else { t + h };
    }
    Ok(())
}

/// Structure-of-arrays copy of the states, so the common full-step case
/// runs as a branch-free loop over points.
struct Lanes<T> {
    wr: Vec<T>,
    wi: Vec<T>,
    gr: Vec<T>,
    gi: Vec<T>,
    lr: Vec<T>,
    li: Vec<T>,
}

impl<T: Real> Lanes<T> {
    fn new(n: usize) -> Self {
        let z = vec![T::zero(); n];
        Lanes {
            wr: z.clone(),
            wi: z.clone(),
            gr: z.clone(),
            gi: z.clone(),
            lr: z.clone(),
            li: z,
        }
    }

    /// Full RK4 step of every state, written into `self`.
    fn step_all(&mut self, states: &[FlowState<T>], lams: [Complex<T>; 3], h: T) {
        let n = states.len();
        let (wr, wi) = (&mut self.wr[..n], &mut self.wi[..n]);
        let (gr, gi) = (&mut self.gr[..n], &mut self.gi[..n]);
        let (lr, li) = (&mut self.lr[..n], &mut self.li[..n]);
        for i in 0..n {
            let next = rk4(&states[i], lams, h);
            wr[i] = next.w.re;
            wi[i] = next.w.im;
            gr[i] = next.logderiv.re;
            gi[i] = next.logderiv.im;
            lr[i] = next.logratio.re;
            li[i] = next.logratio.im;
        }
    }

    fn state(&self, i: usize, z0: Complex<T>) -> FlowState<T> {
        FlowState {
            z0,
            w: Complex::new(self.wr[i], self.wi[i]),
            logderiv: Complex::new(self.gr[i], self.gi[i]),
            logratio: Complex::new(self.lr[i], self.li[i]),
        }
    }
}

fn check_points<T: Real>(cfg: &SimConfig<T>, points: &[Complex<T>]) -> Result<()> {
    for z in points {
        if !(z.norm() <= cfg.r_max) {
            return Err(Error::domain(format!(
                "|z| = {} exceeds r_max = {}",
                z.norm(),
                cfg.r_max
            )));
        }
    }
    Ok(())
}

/// Integrates the reverse flow for every point up to `cfg.horizon`.
pub fn evolve<T: Real>(
    path: &DrivingPath<T>,
    cfg: &SimConfig<T>,
    points: &[Complex<T>],
) -> Result<Vec<FlowState<T>>> {
    let mut out = evolve_checkpoints(path, cfg, points, &[cfg.horizon])?;
    Ok(out.pop().expect("one checkpoint"))
}

/// Integrates the reverse flow and records the states at each checkpoint time.
///
/// Checkpoints must be increasing and no later than `cfg.horizon`.
pub fn evolve_checkpoints<T: Real>(
    path: &DrivingPath<T>,
    cfg: &SimConfig<T>,
    points: &[Complex<T>],
    checkpoints: &[T],
) -> Result<Vec<Vec<FlowState<T>>>> {
    cfg.validate()?;
    check_points(cfg, points)?;
    let tol = cfg.dt * lit::<T>(1e-9);
    if path.n_steps() == 0 || path.horizon() < cfg.horizon - tol {
        return Err(Error::usage(format!(
            "driving path ends at {} before the horizon {}",
            path.horizon(),
            cfg.horizon
        )));
    }
    if checkpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::usage("checkpoints must be strictly increasing"));
    }
    if checkpoints
        .iter()
        .any(|&c| !(c > T::zero() && c <= cfg.horizon + tol))
    {
        return Err(Error::usage("checkpoints must lie in (0, horizon]"));
    }

    let mut states: Vec<FlowState<T>> = points.iter().map(|&z| FlowState::start(z)).collect();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next_cp = 0;
    let half = lit::<T>(0.5);
    let delta2 = cfg.singular_delta * cfg.singular_delta;
    let mut lanes = Lanes::new(states.len());

    for k in 0..path.n_steps() {
        if next_cp == checkpoints.len() {
            break;
        }
        let (t0, t1) = (path.times[k], path.times[k + 1]);
        let cell = Cell {
            t0,
            theta0: path.theta[k],
            slope: (path.theta[k + 1] - path.theta[k]) / (t1 - t0),
        };
        let mut a = t0;
        loop {
            let cp = checkpoints.get(next_cp).copied();
            let (b, hit) = match cp {
                Some(c) if c <= t1 + tol => (c.min(t1), true),
                _ => (t1, false),
            };
            if b > a {
                let lams = [
                    cell.lambda(a),
                    cell.lambda(a + (b - a) * half),
                    cell.lambda(b),
                ];
                lanes.step_all(&states, lams, b - a);
                for (i, s) in states.iter_mut().enumerate() {
                    let next = lanes.state(i, s.z0);
                    if (s.w - lams[0]).norm_sqr() >= delta2 && accepted(s, &next) {
                        *s = next;
                    } else {
                        advance(s, &cell, a, b, lams, cfg.singular_delta)?;
                    }
                }
            }
            a = b;
            if hit {
                out.push(states.clone());
                next_cp += 1;
                if next_cp == checkpoints.len() || a >= t1 {
                    break;
                }
            } else {
                break;
            }
        }
    }
    if out.len() != checkpoints.len() {
        return Err(Error::usage(
            "driving path too short for the requested checkpoints",
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::sample_driver;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn origin_is_a_fixed_point() {
        let cfg = SimConfig::new(2.0)
            .with_horizon(3.0)
            .with_dt(0.01)
            .with_seed(1);
        let path = sample_driver(&cfg).unwrap();
        let s = evolve(&path, &cfg, &[c(0.0, 0.0)]).unwrap()[0];
        assert_eq!(s.w, c(0.0, 0.0));
        assert!((s.logderiv - c(-3.0, 0.0)).norm() < 1e-12);
        assert!((s.logratio - c(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn modulus_decreases_at_every_step() {
        let cfg = SimConfig::new(2.0)
            .with_horizon(4.0)
            .with_dt(0.01)
            .with_seed(2);
        let path = sample_driver(&cfg).unwrap();
        let times: Vec<f64> = path.times[1..].to_vec();
        let run = evolve_checkpoints(&path, &cfg, &[c(0.0, 0.5)], &times).unwrap();
        let mut prev = 0.5;
        for states in run {
            let r = states[0].w.norm();
            assert!(r < prev, "{r} !< {prev}");
            prev = r;
        }
    }

    #[test]
    fn rejects_points_outside_r_max() {
        let cfg = SimConfig::new(2.0).with_horizon(1.0).with_dt(0.1);
        let path = sample_driver(&cfg).unwrap();
        assert!(matches!(
            evolve(&path, &cfg, &[c(0.95, 0.0)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_short_paths() {
        let cfg = SimConfig::new(2.0).with_horizon(1.0).with_dt(0.1);
        let path = sample_driver(&cfg).unwrap();
        let longer = cfg.with_horizon(2.0);
        assert!(matches!(
            evolve(&path, &longer, &[c(0.1, 0.0)]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn log_ratio_branch_is_consistent() {
        let cfg = SimConfig::new(6.0)
            .with_horizon(4.0)
            .with_dt(0.002)
            .with_seed(3);
        let path = sample_driver(&cfg).unwrap();
        let pts = [c(0.7, 0.0), c(-0.5, 0.4), c(0.0, -0.7), c(0.2, 0.1)];
        for s in evolve(&path, &cfg, &pts).unwrap() {
            assert!((s.logratio.exp() - s.w / s.z0).norm() < 1e-8);
        }
    }

    /// Dense-output adaptive Dormand–Prince on the frozen driver λ ≡ 1.
    fn reference_frozen(z: Complex<f64>, t_end: f64) -> Complex<f64> {
        let f = |w: Complex<f64>| w * (w + 1.0) / (w - 1.0);
        let (mut t, mut w, mut h): (f64, Complex<f64>, f64) = (0.0, z, 1e-3);
        let a = [
            [0.0; 6],
            [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
            [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
            [
                19372.0 / 6561.0,
                -25360.0 / 2187.0,
                64448.0 / 6561.0,
                -212.0 / 729.0,
                0.0,
                0.0,
            ],
            [
                9017.0 / 3168.0,
                -355.0 / 33.0,
                46732.0 / 5247.0,
                49.0 / 176.0,
                -5103.0 / 18656.0,
                0.0,
            ],
        ];
        let b5 = [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
            0.0,
        ];
        let b4 = [
            5179.0 / 57600.0,
            0.0,
            7571.0 / 16695.0,
            393.0 / 640.0,
            -92097.0 / 339200.0,
            187.0 / 2100.0,
            1.0 / 40.0,
        ];
        while t < t_end {
            h = h.min(t_end - t);
            let mut k = [Complex::new(0.0, 0.0); 7];
            for i in 0..6 {
                let mut y = w;
                for j in 0..i {
                    y += k[j] * (a[i][j] * h);
                }
                k[i] = f(y);
            }
            let y5: Complex<f64> = w + (0..6).map(|i| k[i] * (b5[i] * h)).sum::<Complex<f64>>();
            k[6] = f(y5);
            let y4: Complex<f64> = w + (0..7).map(|i| k[i] * (b4[i] * h)).sum::<Complex<f64>>();
            let err = (y5 - y4).norm();
            let tol = 1e-14 * (1.0 + w.norm());
            if err <= tol {
                t += h;
                w = y5;
            }
            h *= (0.9 * (tol / err.max(1e-300)).powf(0.2)).clamp(0.2, 5.0);
        }
        w
    }

    #[test]
    fn frozen_driver_matches_adaptive_reference() {
        let cfg = SimConfig::new(2.0).with_horizon(1.0).with_dt(1e-3);
        let path = DrivingPath::constant(1.0, 1e-3, 0.0);
        let z = c(-0.5, 0.0);
        let w = evolve(&path, &cfg, &[z]).unwrap()[0].w;
        let reference = reference_frozen(z, 1.0);
        assert!(
            (w - reference).norm() / reference.norm() < 1e-10,
            "{w} vs {reference}"
        );
    }

    #[test]
    fn fourth_order_on_frozen_driver() {
        let z = c(0.3, 0.4);
        let run = |dt: f64| {
            let cfg = SimConfig::new(2.0).with_horizon(1.0).with_dt(dt);
            evolve(&DrivingPath::constant(1.0, dt, 0.3), &cfg, &[z]).unwrap()[0]
        };
        let (a, b, c3) = (run(0.1), run(0.05), run(0.025));
        let ratio = (a.logratio - b.logratio).norm() / (b.logratio - c3.logratio).norm();
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn sub_cycling_handles_points_near_the_driver() {
        let cfg = SimConfig::new(2.0)
            .with_horizon(1.0)
            .with_dt(1e-3)
            .with_r_max(0.99);
        let path = DrivingPath::constant(1.0, 1e-3, 0.0);
        let s = evolve(&path, &cfg, &[c(0.98, 0.0)]).unwrap()[0];
        let reference = reference_frozen(c(0.98, 0.0), 1.0);
        assert!((s.w - reference).norm() < 1e-6, "{} vs {}", s.w, reference);
    }

    #[test]
    fn checkpoint_at_horizon_equals_evolve() {
        let cfg = SimConfig::new(2.0)
            .with_horizon(2.0)
            .with_dt(0.01)
            .with_seed(9);
        let path = sample_driver(&cfg).unwrap();
        let pts = [c(0.3, 0.0)];
        let end = evolve(&path, &cfg, &pts).unwrap();
        let on_grid = evolve_checkpoints(&path, &cfg, &pts, &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(on_grid[2], end);
        // an off-grid checkpoint splits one step, which only perturbs at RK4 accuracy
        let split = evolve_checkpoints(&path, &cfg, &pts, &[1.005, 2.0]).unwrap();
        assert!((split[1][0].w - end[0].w).norm() < 1e-9);
    }

    #[test]
    fn works_in_single_precision() {
        let cfg = SimConfig::new(2.0f32)
            .with_horizon(2.0)
            .with_dt(0.01)
            .with_seed(4);
        let path = sample_driver(&cfg).unwrap();
        let s = evolve(&path, &cfg, &[Complex::new(0.0f32, 0.0)]).unwrap()[0];
        assert!((s.logderiv.re + 2.0).abs() < 1e-4);
    }
}
