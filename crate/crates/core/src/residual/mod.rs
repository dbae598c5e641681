//! Finite-difference and algebraic checks of the moment equations and the
//! systems defining the separatrix curves.

mod algebra;
mod moduli;
mod ode;
mod pde;
mod seeds;
mod stencil;
mod suite;

pub use algebra::{
    abc_check, coeff_a, coeff_b, coeff_c, dual_gamma, duality_check, spectrum_function, CoeffTriple,
};
pub use moduli::{moduli_g_residual, moduli_residual, ModuliCandidate};
pub use ode::{ode_residual, OnePointCandidate};
pub use pde::{pde_residual, TwoPointCandidate};
pub use seeds::{
    gamma0_minus, green_from_seeds, newton2, quartic_from_seeds, red_from_seeds, scan_roots,
    seed_systems, QuarticSeed, SeedPoint, SeedSystems,
};
pub use stencil::{order_report, richardson, OrderReport, CONVERGENCE_STEP, DEFAULT_STEP};
pub use suite::{
    algebra_suite, mfold_suite, residual_grid, residual_suite, run_suite, separatrix_suite,
    universal_suite, CheckReport, Suite,
};
