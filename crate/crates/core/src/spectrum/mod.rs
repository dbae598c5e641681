//! Generalized integral means spectrum and its phase diagram.

mod atlas;
mod beta;
mod classify;
mod curves;
mod points;
mod universal;
mod xy;

pub use atlas::{
    brennan_line_margin, mfold_curve_point, phase_diagram, separatrices, separatrix_catalog,
    separatrix_gaps, GridSpec, Separatrix, SeparatrixGap, DEFAULT_GRID_MARGIN, DEFAULT_GRID_SIZE,
};
pub use beta::{beta_0, beta_1, beta_lin, beta_m, beta_tip, delta0_abscissa};
pub use classify::{
    classify, classify_mfold, green_arc_ordinate, lower_boundary, mfold_inverse, mfold_map,
    quartic_branch_is_monotone, quartic_ordinate, region_sequence, Region, SpectrumPoint,
    BOUNDARY_TOL,
};
pub use curves::{
    cartesian_residual, curve_eval, d1_offset, green_point, green_residual, quartic_discriminant,
    quartic_point, quartic_residual, residual_scale, CurveId, CurveSample,
};
pub use points::{special_points, SpecialPoints};
pub use universal::{
    feng_mcgregor_domain, koebe_bound, koebe_limit_classify, koebe_limit_partition, universal_b,
    universal_partition, B0Model, KoebeLimit, KoebeRegion, UniversalCurve, UniversalModel,
    UniversalSample, DEFAULT_P_DAGGER,
};
pub use xy::{
    mixed_bulk_factors, quartic_asymptotes, quartic_hyperbola_residual, xy_forward, xy_inverse,
    xy_spectra, QuarticAsymptotes, XyLine, XySpectra,
};
