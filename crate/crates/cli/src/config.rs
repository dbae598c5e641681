use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

pub const THREADS_ENV: &str = "SLE_LAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Run parameters shared by every subcommand.
///
/// The same fields may come from a JSON file given with `--config`; flags on
/// the command line take precedence over file values.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// JSON file with default values for any of these flags.
    #[arg(long, global = true, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Parameter on the integrable parabola; fixes `p` and `q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// m-fold symmetrization order.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m: Option<i32>,

    /// Evaluation points such as `0.5`, `0.3+0.3i`; comma separated or repeated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Vec<Complex64>,
    /// Second points of the two-point function, paired with `--z`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub z2: Vec<Complex64>,

    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_hyphen_values = true,
        value_name = "LO,HI"
    )]
    pub p_range: Option<Vec<f64>>,
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_hyphen_values = true,
        value_name = "LO,HI"
    )]
    pub q_range: Option<Vec<f64>>,
    /// Radii for `means-scan`.
    #[arg(long, global = true, value_delimiter = ',', value_name = "LO,HI")]
    pub r_range: Option<Vec<f64>>,
    /// Grid points per axis.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Samples per curve piece.
    #[arg(long, global = true)]
    pub curve_points: Option<usize>,
    /// How far curves extend past the special points.
    #[arg(long, global = true)]
    pub span: Option<f64>,

    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Horizons tracked by `diagnose`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub horizons: Vec<f64>,

    /// Circle radius for `log-coeffs`.
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Points on the circle (FFT size) or angular points of `means-scan`.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,

    /// Suite run by `check`.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Abscissa where the universal tip line ends.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p_dagger: Option<f64>,

    /// Worker threads; `SLE_LAB_THREADS` overrides the config file.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit the timestamp line so repeated runs are byte-identical.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub no_header: bool,
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

fn pick_vec<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

impl RunConfig {
    /// Reads the `--config` file, if any, and lays the flags over it.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        if self.workers.is_none() {
            if let Ok(v) = std::env::var(THREADS_ENV) {
                self.workers = Some(v.trim().parse().map_err(|_| {
                    CliError::Validation(format!(
                        "{THREADS_ENV} must be a positive integer, got '{v}'"
                    ))
                })?);
            }
        }
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        Ok(self.over(load(&path)?))
    }

    fn over(self, file: RunConfig) -> Self {
        RunConfig {
            config: self.config,
            kappa: pick(self.kappa, file.kappa),
            p: pick(self.p, file.p),
            q: pick(self.q, file.q),
            gamma: pick(self.gamma, file.gamma),
            m: pick(self.m, file.m),
            z: pick_vec(self.z, file.z),
            z2: pick_vec(self.z2, file.z2),
            p_range: pick(self.p_range, file.p_range),
            q_range: pick(self.q_range, file.q_range),
            r_range: pick(self.r_range, file.r_range),
            resolution: pick(self.resolution, file.resolution),
            curve_points: pick(self.curve_points, file.curve_points),
            span: pick(self.span, file.span),
            samples: pick(self.samples, file.samples),
            horizon: pick(self.horizon, file.horizon),
            dt: pick(self.dt, file.dt),
            seed: pick(self.seed, file.seed),
            horizons: pick_vec(self.horizons, file.horizons),
            radius: pick(self.radius, file.radius),
            points: pick(self.points, file.points),
            n_max: pick(self.n_max, file.n_max),
            suite: pick(self.suite, file.suite),
            p_dagger: pick(self.p_dagger, file.p_dagger),
            workers: pick(self.workers, file.workers),
            output: pick(self.output, file.output),
            format: pick(self.format, file.format),
            no_header: self.no_header,
        }
    }

    /// Worker count: flag, then `SLE_LAB_THREADS`, then the config file.
    pub fn worker_count(&self) -> Result<Option<usize>, CliError> {
        if self.workers == Some(0) {
            return Err(CliError::Validation("worker count must be positive".into()));
        }
        Ok(self.workers)
    }

    pub fn need<T: Copy>(value: Option<T>, name: &str) -> Result<T, CliError> {
        value.ok_or_else(|| CliError::Validation(format!("--{name} is required")))
    }

    pub fn kappa(&self) -> Result<f64, CliError> {
        let k = Self::need(self.kappa, "kappa")?;
        if !(k.is_finite() && k > 0.0) {
            return Err(CliError::Validation(format!(
                "kappa must be positive, got {k}"
            )));
        }
        Ok(k)
    }

    pub fn range(value: &Option<Vec<f64>>, name: &str) -> Result<Option<(f64, f64)>, CliError> {
        match value.as_deref() {
            None => Ok(None),
            Some([lo, hi]) if lo.is_finite() && hi.is_finite() && lo < hi => Ok(Some((*lo, *hi))),
            Some(v) => Err(CliError::Validation(format!(
                "--{name} needs two increasing finite values, got {v:?}"
            ))),
        }
    }

    pub fn positive(value: Option<usize>, default: usize, name: &str) -> Result<usize, CliError> {
        match value.unwrap_or(default) {
            0 => Err(CliError::Validation(format!("--{name} must be positive"))),
            n => Ok(n),
        }
    }
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("bad config {}: {e}", path.display())))
}
