//! Local-maximum detection with sub-cell quadratic refinement.

use serde::{Deserialize, Serialize};

use crate::ambiguity::surface::AfSurface;

/// A detected pulse; `tau`/`nu` are refined coordinates, `cell` the grid cell it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub tau: f64,
    pub nu: f64,
    pub magnitude: f64,
    pub cell: (usize, usize),
}

/// Peaks sorted by magnitude, largest first.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PeakList {
    pub peaks: Vec<Peak>,
    /// Minimum separation `(seconds, Hz)` enforced between peaks.
    pub min_sep: (f64, f64),
}

impl PeakList {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }
}

/// Vertex offset and value of the least-squares quadratic through a 3×3
/// patch `f[dx+1][dy+1]`; `None` if the fit has no interior maximum.
fn quadratic_fit(f: &[[f64; 3]; 3]) -> Option<(f64, f64, f64)> {
    let (mut s0, mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, row) in f.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let (x, y) = (i as f64 - 1.0, j as f64 - 1.0);
            s0 += v;
            sx += x * v;
            sy += y * v;
            sxx += x * x * v;
            syy += y * y * v;
            sxy += x * y * v;
        }
    }
    let a = (5.0 * s0 - 3.0 * sxx - 3.0 * syy) / 9.0;
    let (b, c) = (sx / 6.0, sy / 6.0);
    let d = (sxx - 2.0 * s0 / 3.0) / 2.0;
    let e = (syy - 2.0 * s0 / 3.0) / 2.0;
    let g = sxy / 4.0;
    let det = 4.0 * d * e - g * g;
    if !(d < 0.0 && det > 0.0) {
        return None;
    }
    let dx = (-2.0 * e * b + g * c) / det;
    let dy = (g * b - 2.0 * d * c) / det;
    if dx.abs() > 1.0 || dy.abs() > 1.0 {
        return None;
    }
    let val = a + b * dx + c * dy + d * dx * dx + e * dy * dy + g * dx * dy;
    Some((dx, dy, val))
}

/// Vertex of the parabola through `(−1, l), (0, c), (1, r)`, clamped to ±1.
fn parabola(l: f64, c: f64, r: f64) -> f64 {
    let den = l - 2.0 * c + r;
    if den < 0.0 {
        (0.5 * (l - r) / den).clamp(-1.0, 1.0)
    } else {
        0.0
    }
}

/// Local maxima of `|surface|` above `rel_threshold·max`, pruned greedily so
/// that no two peaks are closer than `min_sep` in both coordinates.
pub fn detect_peaks(surface: &AfSurface, rel_threshold: f64, min_sep: (f64, f64)) -> PeakList {
    let g = surface.grid;
    let mag = surface.magnitudes();
    let global = mag.iter().copied().fold(0.0, f64::max);
    let mut out = PeakList { peaks: Vec::new(), min_sep };
    if global.is_nan() || global <= 0.0 {
        return out;
    }
    let at = |i: usize, j: usize| mag[i * g.n_nu + j];
    let mut cand: Vec<Peak> = Vec::new();
    for i in 0..g.n_tau {
        for j in 0..g.n_nu {
            let v = at(i, j);
            if v < rel_threshold * global || v <= 0.0 {
                continue;
            }
            let mut is_max = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= g.n_tau as i64 || jj >= g.n_nu as i64 {
                        continue;
                    }
                    if at(ii as usize, jj as usize) > v {
                        is_max = false;
                    }
                }
            }
            if !is_max {
                continue;
            }
            let (mut dx, mut dy, mut val) = (0.0, 0.0, v);
            let interior_t = i > 0 && i + 1 < g.n_tau;
            let interior_n = j > 0 && j + 1 < g.n_nu;
            if interior_t && interior_n {
                let mut patch = [[0.0; 3]; 3];
                for (a, row) in patch.iter_mut().enumerate() {
                    for (b, cell) in row.iter_mut().enumerate() {
                        *cell = at(i + a - 1, j + b - 1);
                    }
                }
                match quadratic_fit(&patch) {
                    Some((x, y, fv)) => {
                        dx = x;
                        dy = y;
                        val = fv.max(v);
                    }
                    None => {
                        dx = parabola(patch[0][1], v, patch[2][1]);
                        dy = parabola(patch[1][0], v, patch[1][2]);
                    }
                }
            } else if interior_t {
                dx = parabola(at(i - 1, j), v, at(i + 1, j));
            } else if interior_n {
                dy = parabola(at(i, j - 1), v, at(i, j + 1));
            }
            cand.push(Peak {
                tau: g.tau(i) + dx * g.tau_step(),
                nu: g.nu(j) + dy * g.nu_step(),
                magnitude: val,
                cell: (i, j),
            });
        }
    }
    cand.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude).then(a.cell.cmp(&b.cell)));
    for c in cand {
        let clash = out
            .peaks
            .iter()
            .any(|p| (p.tau - c.tau).abs() < min_sep.0 && (p.nu - c.nu).abs() < min_sep.1);
        if !clash {
            out.peaks.push(c);
        }
    }
    out
}
