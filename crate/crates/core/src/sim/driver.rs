use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::{from_usize, lit, Real};
use crate::sim::SimConfig;

/// Sampled driving angle `θ(t) = √κ B_t` on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivingPath<T> {
    pub times: Vec<T>,
    pub theta: Vec<T>,
    pub seed: u64,
    pub stream_id: u64,
}

impl<T: Real> DrivingPath<T> {
    /// Deterministic path with `θ ≡ constant`, mostly for testing.
    pub fn constant(horizon: T, dt: T, angle: T) -> Self {
        let times = grid(
            horizon,
            SimConfig::new(T::one())
                .with_horizon(horizon)
                .with_dt(dt)
                .n_steps(),
            dt,
        );
        let theta = vec![angle; times.len()];
        DrivingPath {
            times,
            theta,
            seed: 0,
            stream_id: 0,
        }
    }

    /// Path from explicit grid values.
    pub fn from_values(times: Vec<T>, theta: Vec<T>) -> Self {
        assert_eq!(
            times.len(),
            theta.len(),
            "times and theta must have equal length"
        );
        DrivingPath {
            times,
            theta,
            seed: 0,
            stream_id: 0,
        }
    }

    pub fn n_steps(&self) -> usize {
        self.times.len().saturating_sub(1)
    }

    pub fn horizon(&self) -> T {
        *self.times.last().unwrap_or(&T::zero())
    }

    /// Driving angle at `t`, linear inside each grid cell.
    pub fn angle_at(&self, t: T) -> T {
        let k = self.cell_of(t);
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let s = (t - t0) / (t1 - t0);
        self.theta[k] + s * (self.theta[k + 1] - self.theta[k])
    }

    pub(crate) fn cell_of(&self, t: T) -> usize {
        let n = self.n_steps();
        match self
            .times
            .binary_search_by(|x| x.partial_cmp(&t).expect("finite grid"))
        {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }
}

fn grid<T: Real>(horizon: T, n: usize, dt: T) -> Vec<T> {
    let mut times: Vec<T> = (0..n).map(|k| from_usize::<T>(k) * dt).collect();
    times.push(horizon);
    times
}

/// Seeds a generator for substream `stream_id` of `seed`.
pub fn stream_rng(seed: u64, stream_id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Samples `θ_k = √κ B_{t_k}` for the grid implied by `cfg`.
pub fn sample_driver<T: Real>(cfg: &SimConfig<T>) -> Result<DrivingPath<T>> {
    cfg.validate()?;
    let n = cfg.n_steps();
    let times = grid(cfg.horizon, n, cfg.dt);
    let mut rng = stream_rng(cfg.seed, cfg.stream_id);
    let mut theta = Vec::with_capacity(n + 1);
    theta.push(T::zero());
    let mut acc = T::zero();
    for k in 0..n {
        let h = times[k + 1] - times[k];
        let g: f64 = StandardNormal.sample(&mut rng);
        acc = acc + (cfg.kappa * h).sqrt() * lit::<T>(g);
        theta.push(acc);
    }
    Ok(DrivingPath {
        times,
        theta,
        seed: cfg.seed,
        stream_id: cfg.stream_id,
    })
}
