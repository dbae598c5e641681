use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectrum::{
    beta_0, beta_1, beta_lin, beta_tip, classify_mfold, curve_eval, lower_boundary, mfold_inverse,
    special_points, CurveId, CurveSample, Region, SpectrumPoint,
};

/// Rectangular `(p, q)` grid with inclusive end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub p_lo: T,
    pub p_hi: T,
    pub q_lo: T,
    pub q_hi: T,
    pub np: usize,
    pub nq: usize,
}

pub const DEFAULT_GRID_SIZE: usize = 400;
pub const DEFAULT_GRID_MARGIN: f64 = 6.0;

impl<T: Real> GridSpec<T> {
    /// Window around the special points, pulled back to the m-fold plane.
    pub fn around_special_points(kappa: T, m: i32) -> Result<Self> {
        let sp = special_points(kappa);
        let margin = lit::<T>(DEFAULT_GRID_MARGIN);
        let (_, qa) = mfold_inverse(m, sp.p0, sp.q0)?;
        let (_, qb) = mfold_inverse(m, sp.p0prime, sp.q0prime)?;
        Ok(GridSpec {
            p_lo: sp.p0prime - margin,
            p_hi: sp.p0 + margin,
            q_lo: qa.min(qb) - margin,
            q_hi: qa.max(qb) + margin,
            np: DEFAULT_GRID_SIZE,
            nq: DEFAULT_GRID_SIZE,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.np < 2 || self.nq < 2 {
            return Err(Error::config("grid needs at least 2 points per axis"));
        }
        if !(self.p_lo < self.p_hi && self.q_lo < self.q_hi) {
            return Err(Error::config("grid ranges must be increasing"));
        }
        Ok(())
    }

    pub fn p_at(&self, i: usize) -> T {
        axis(self.p_lo, self.p_hi, self.np, i)
    }

    pub fn q_at(&self, j: usize) -> T {
        axis(self.q_lo, self.q_hi, self.nq, j)
    }
}

fn axis<T: Real>(lo: T, hi: T, n: usize, i: usize) -> T {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * lit::<T>(i as f64) / lit::<T>((n - 1) as f64)
    }
}

/// Classifies every grid point, `p` varying fastest.
pub fn phase_diagram<T: Real>(
    kappa: T,
    m: i32,
    grid: &GridSpec<T>,
) -> Result<Vec<SpectrumPoint<T>>> {
    grid.validate()?;
    (0..grid.np * grid.nq)
        .into_par_iter()
        .map(|k| classify_mfold(grid.p_at(k % grid.np), grid.q_at(k / grid.np), kappa, m))
        .collect()
}

/// A boundary piece between two regions of the `m = 1` diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Separatrix<T> {
    pub curve: CurveId,
    pub regions: (Region, Region),
    pub param_lo: T,
    pub param_hi: T,
}

/// Pieces of the composite boundary, each extended `span` away from the special points.
pub fn separatrices<T: Real>(kappa: T, span: T) -> Vec<Separatrix<T>> {
    let sp = special_points(kappa);
    let g_tip = T::one() + lit::<T>(2.0) / kappa;
    let g_quad = lit::<T>(0.25) + kappa.recip();
    vec![
        Separatrix {
            curve: CurveId::BlueQuartic,
            regions: (Region::I, Region::IV),
            param_lo: g_tip,
            param_hi: g_tip + span,
        },
        Separatrix {
            curve: CurveId::GreenParabola,
            regions: (Region::II, Region::IV),
            param_lo: g_quad,
            param_hi: g_tip,
        },
        Separatrix {
            curve: CurveId::D1,
            regions: (Region::III, Region::IV),
            param_lo: sp.p0,
            param_hi: sp.p0 + span,
        },
        Separatrix {
            curve: CurveId::D0,
            regions: (Region::II, Region::III),
            param_lo: sp.q0,
            param_hi: sp.q0 + span,
        },
        Separatrix {
            curve: CurveId::D0prime,
            regions: (Region::I, Region::II),
            param_lo: sp.q0prime,
            param_hi: sp.q0prime + span,
        },
    ]
}

impl<T: Real> Separatrix<T> {
    pub fn samples(&self, kappa: T, n: usize) -> Vec<CurveSample<T>> {
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let param = axis(self.param_lo, self.param_hi, n, k);
                let (p, q) = curve_eval(self.curve, kappa, param);
                CurveSample {
                    curve: self.curve,
                    param,
                    p,
                    q,
                }
            })
            .collect()
    }
}

fn region_formula<T: Real>(region: Region, p: T, q: T, kappa: T) -> Result<T> {
    match region {
        Region::I => beta_tip(p, kappa),
        Region::II => beta_0(p, kappa),
        Region::III => Ok(beta_lin(p, kappa)),
        Region::IV => beta_1(p, q, kappa),
    }
}

/// Largest disagreement between the two adjacent spectra along a separatrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatrixGap<T> {
    pub curve: CurveId,
    pub n_points: usize,
    pub max_gap: T,
}

pub fn separatrix_gaps<T: Real>(kappa: T, span: T, n: usize) -> Result<Vec<SeparatrixGap<T>>> {
    separatrices(kappa, span)
        .into_iter()
        .map(|s| {
            let pts = s.samples(kappa, n);
            let mut max_gap = T::zero();
            for c in &pts {
                let a = region_formula(s.regions.0, c.p, c.q, kappa)?;
                let b = region_formula(s.regions.1, c.p, c.q, kappa)?;
                max_gap = max_gap.max((a - b).abs());
            }
            Ok(SeparatrixGap {
                curve: s.curve,
                n_points: pts.len(),
                max_gap,
            })
        })
        .collect()
}

/// Separatrices and the red parabola and domain edges, pulled back to the m-fold plane.
pub fn separatrix_catalog<T: Real>(
    kappa: T,
    m: i32,
    span: T,
    n: usize,
) -> Result<Vec<CurveSample<T>>> {
    let sp = special_points(kappa);
    let g_top = lit::<T>(2.0) / kappa + lit(0.5);
    let mut pieces = separatrices(kappa, span);
    let extra = [
        (CurveId::RedParabola, -T::one(), g_top + T::one()),
        (CurveId::Delta0, sp.q0prime - span, sp.q0 + span),
        (CurveId::Delta1, sp.p0prime - span, sp.p0 + span),
    ];
    for (curve, lo, hi) in extra {
        pieces.push(Separatrix {
            curve,
            regions: (Region::IV, Region::IV),
            param_lo: lo,
            param_hi: hi,
        });
    }
    let mut out = Vec::new();
    for s in pieces {
        for c in s.samples(kappa, n) {
            let (p, q) = mfold_inverse(m, c.p, c.q)?;
            out.push(CurveSample { p, q, ..c });
        }
    }
    Ok(out)
}

/// Point of `curve` at `param` in the m-fold plane.
pub fn mfold_curve_point<T: Real>(curve: CurveId, kappa: T, param: T, m: i32) -> Result<(T, T)> {
    let (p, q) = curve_eval(curve, kappa, param);
    mfold_inverse(m, p, q)
}

/// Smallest vertical clearance of the line `q = 2p` above the composite lower
/// boundary over `n` abscissae in `[p_lo, p_hi]`.
pub fn brennan_line_margin<T: Real>(kappa: T, p_lo: T, p_hi: T, n: usize) -> Result<T> {
    let n = n.max(2);
    let mut best = T::infinity();
    for k in 0..n {
        let p = axis(p_lo, p_hi, n, k);
        best = best.min(lit::<T>(2.0) * p - lower_boundary(kappa, p)?);
    }
    Ok(best)
}
