//! Least-squares fit of `I(d) = A - B d^{-p}`.
//!
//! For fixed `p` the model is linear in `(A, B)` and solved exactly; the
//! remaining 1-D problem in `p` is bracketed on a log grid and refined by
//! golden-section search on the RMS residual.

use crate::error::{Error, Result};

const P_MIN: f64 = 1e-3;
const P_MAX: f64 = 5.0;
const GRID_POINTS: usize = 400;
const MIN_POINTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitModel {
    /// Asymptote as `d -> inf`.
    pub a: f64,
    pub b: f64,
    /// Decay exponent.
    pub p: f64,
    pub rms_residual: f64,
}

impl FitModel {
    pub fn predict(&self, d: f64) -> f64 {
        self.a - self.b * d.powf(-self.p)
    }
}

/// Best `(A, B, rms)` for a fixed exponent.
fn solve_linear(points: &[(f64, f64)], p: f64) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(d, _)| d.powf(-p)).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, (_, y)) in xs.iter().zip(points) {
        sxx += (x - mean_x).powi(2);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx <= 0.0 || !sxx.is_finite() {
        return None;
    }
    let slope = sxy / sxx;
    let a = mean_y - slope * mean_x;
    let sse: f64 = xs
        .iter()
        .zip(points)
        .map(|(x, (_, y))| (y - a - slope * x).powi(2))
        .sum();
    Some((a, -slope, (sse / n).sqrt()))
}

fn rms_at(points: &[(f64, f64)], p: f64) -> f64 {
    solve_linear(points, p).map_or(f64::INFINITY, |(_, _, rms)| rms)
}

pub fn fit_power_law(points: &[(usize, f64)]) -> Result<FitModel> {
    if points.len() < MIN_POINTS {
        return Err(Error::Fit(format!(
            "need at least {MIN_POINTS} points, got {}",
            points.len()
        )));
    }
    let mut ds: Vec<usize> = points.iter().map(|(d, _)| *d).collect();
    ds.sort_unstable();
    if ds.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Fit("dimensions must be distinct".into()));
    }
    if ds[0] == 0 || points.iter().any(|(_, y)| !y.is_finite()) {
        return Err(Error::Fit("points must have d >= 1 and finite values".into()));
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|&(d, y)| (d as f64, y)).collect();

    let ratio = (P_MAX / P_MIN).ln();
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| P_MIN * (ratio * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect();
    let best = (0..GRID_POINTS)
        .min_by(|&i, &j| rms_at(&pts, grid[i]).total_cmp(&rms_at(&pts, grid[j])))
        .expect("grid is not empty");
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(GRID_POINTS - 1)];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (rms_at(&pts, x1), rms_at(&pts, x2));
    for _ in 0..200 {
        if hi - lo < 1e-14 * hi {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rms_at(&pts, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rms_at(&pts, x2);
        }
    }
    let p = 0.5 * (lo + hi);
    let (a, b, rms_residual) = solve_linear(&pts, p)
        .ok_or_else(|| Error::Fit("degenerate data: no spread in d^-p".into()))?;

    if !(a > 2.0 && a < 4.0 && b > 0.0 && p > P_MIN && p < P_MAX) {
        return Err(Error::Fit(format!(
            "fit left the admissible range (A = {a}, B = {b}, p = {p}); data is degenerate or not of the form A - B d^-p"
        )));
    }
    Ok(FitModel {
        a,
        b,
        p,
        rms_residual,
    })
}
