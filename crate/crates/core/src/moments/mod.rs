//! Mixed moments: closed forms on the integrable parabola and Monte Carlo estimators.

mod closed;
mod estimate;
mod logcoef;
mod means;
mod mfold;
mod parabola;

pub use closed::{closed_moduli, closed_one_point, closed_two_point};
pub use estimate::{
    estimate_moduli, estimate_one_point, estimate_two_point, MomentEstimate, MOM_BLOCKS,
};
pub use logcoef::{
    circle_points, extract_log_coeffs, kappa2_theory, log_coeffs_of, milin_estimate,
    milin_expectation, milin_expectation_exact, CoeffRow, LogCoeffStats, DEFAULT_COEFF_RADIUS,
    DEFAULT_FFT_SIZE, DEFAULT_N_MAX,
};
pub use means::{
    integral_means_scan, log_radius_grid, MeansIntegrand, MeansScan, ScanStatus,
    DEFAULT_ANGULAR_POINTS,
};
pub use mfold::{mfold_identity_check, mfold_q};
pub use parabola::{
    parabola_gamma, parabola_gamma_of, parabola_point, parabola_residual, Branch, MomentSpec,
};
