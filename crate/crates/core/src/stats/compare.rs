//! Elementwise comparison of two surfaces on the same grid.

use serde::{Deserialize, Serialize};

use crate::ambiguity::surface::AfSurface;
use crate::error::{AfdmError, Result};

/// Differences between surfaces `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDiff {
    /// `max |a − b|` over the grid.
    pub max_abs: f64,
    /// `‖a − b‖₂ / ‖a‖₂`; zero when both are identically zero.
    pub rel_l2: f64,
    /// Cell displacement `(Δi_τ, Δj_ν)` from the argmax of `a` to the argmax of `b`.
    pub peak_offset: (i64, i64),
}

pub fn compare_surfaces(a: &AfSurface, b: &AfSurface) -> Result<SurfaceDiff> {
    if a.grid != b.grid {
        return Err(AfdmError::GridMismatch(format!("{:?} vs {:?}", a.grid, b.grid)));
    }
    if a.values.len() != b.values.len() {
        return Err(AfdmError::GridMismatch("value counts differ".into()));
    }
    let mut max_abs: f64 = 0.0;
    let mut diff_sq = 0.0;
    let mut ref_sq = 0.0;
    for (x, y) in a.values.iter().zip(&b.values) {
        let d = (x - y).norm();
        max_abs = max_abs.max(d);
        diff_sq += d * d;
        ref_sq += x.norm_sqr();
    }
    let rel_l2 = if diff_sq == 0.0 {
        0.0
    } else if ref_sq == 0.0 {
        f64::INFINITY
    } else {
        (diff_sq / ref_sq).sqrt()
    };
    let (ia, ja) = a.argmax();
    let (ib, jb) = b.argmax();
    Ok(SurfaceDiff { max_abs, rel_l2, peak_offset: (ib as i64 - ia as i64, jb as i64 - ja as i64) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambiguity::surface::{af_surface, AfEvaluator, DelayDopplerGrid};
    use crate::params::AfdmParams;

    #[test]
    fn self_comparison_is_zero() {
        let p = AfdmParams::new(16, 3, 0.0, 1.0).unwrap();
        let g = DelayDopplerGrid::with_density(&p, (-1.0, 1.0), (-2.0, 2.0), 2).unwrap();
        let s = af_surface(&p, &AfEvaluator::Exact { m: 4, m1: 4 }, &g).unwrap();
        let d = compare_surfaces(&s, &s).unwrap();
        assert_eq!(d, SurfaceDiff { max_abs: 0.0, rel_l2: 0.0, peak_offset: (0, 0) });
    }

    #[test]
    fn exact_against_oracle() {
        let p = AfdmParams::new(16, 3, 0.7, 1.0).unwrap();
        let g = DelayDopplerGrid::with_density(&p, (-1.5, 1.5), (-2.0, 2.0), 2).unwrap();
        let a = af_surface(&p, &AfEvaluator::Exact { m: 5, m1: 5 }, &g).unwrap();
        let b = af_surface(&p, &AfEvaluator::Oracle { m: 5, m1: 5, oversample: 64 }, &g).unwrap();
        let d = compare_surfaces(&a, &b).unwrap();
        assert!(d.max_abs <= 1e-3 * p.period(), "{d:?}");
        assert_eq!(d.peak_offset, (0, 0));
    }

    #[test]
    fn cross_ambiguity_peak_shift() {
        // For m − m1 = 3 the zero-delay CAF peak moves by the subcarrier frequency offset.
        let p = AfdmParams::new(64, 7, 0.0, 1.0).unwrap();
        let g = DelayDopplerGrid::with_density(&p, (0.0, 0.0), (-6.0, 6.0), 2).unwrap();
        let a = af_surface(&p, &AfEvaluator::Exact { m: 20, m1: 20 }, &g).unwrap();
        let b = af_surface(&p, &AfEvaluator::Exact { m: 23, m1: 20 }, &g).unwrap();
        let d = compare_surfaces(&a, &b).unwrap();
        assert_eq!(d.peak_offset.0, 0);
        assert_eq!(d.peak_offset.1, 6);
    }

    #[test]
    fn mismatched_grids() {
        let p = AfdmParams::new(16, 3, 0.0, 1.0).unwrap();
        let g1 = DelayDopplerGrid::with_density(&p, (-1.0, 1.0), (-1.0, 1.0), 2).unwrap();
        let g2 = DelayDopplerGrid::with_density(&p, (-1.0, 1.0), (-1.0, 1.0), 3).unwrap();
        let a = af_surface(&p, &AfEvaluator::Exact { m: 1, m1: 1 }, &g1).unwrap();
        let b = af_surface(&p, &AfEvaluator::Exact { m: 1, m1: 1 }, &g2).unwrap();
        assert!(matches!(compare_surfaces(&a, &b), Err(AfdmError::GridMismatch(_))));
    }
}
