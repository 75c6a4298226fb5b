//! Log-log least squares for scaling exponents.

use serde::Serialize;

use crate::error::{Error, Result};

use super::SweepRow;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitResult {
    /// Slope of `ln(total)` against `ln(μ)`.
    pub slope: f64,
    /// Intercept in natural log units.
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    /// Root-mean-square residual.
    pub residual_rms: f64,
}

/// Ordinary least squares on `(ln μ, ln total)` over the unflagged rows.
/// Needs at least 5 rows spanning at least two decades of volume.
pub fn fit_exponent(rows: &[SweepRow]) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.flagged)
        .map(|r| (r.mu.ln(), r.total.ln()))
        .collect();
    let n = pts.len();
    if n < 5 {
        return Err(Error::Fit(format!("need at least 5 unflagged rows, got {n}")));
    }
    let mu_min = rows.iter().filter(|r| !r.flagged).map(|r| r.mu).fold(f64::MAX, f64::min);
    let mu_max = rows.iter().filter(|r| !r.flagged).map(|r| r.mu).fold(0.0, f64::max);
    if mu_max / mu_min < 100.0 * (1.0 - 1e-9) {
        return Err(Error::Fit(format!(
            "volumes must span at least two decades, got ratio {}",
            mu_max / mu_min
        )));
    }
    let nf = n as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let stderr = if n > 2 { (ss_res / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    let residual_rms = (ss_res / nf).sqrt();
    Ok(FitResult { slope, intercept, stderr, residual_rms })
}
