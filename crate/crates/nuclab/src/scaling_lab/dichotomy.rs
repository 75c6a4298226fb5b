//! Orientation-dichotomy scan: walk the rank-one direction toward `±e_d`
//! at fixed volume and watch the construction branch flip.

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{
    construction_energy, optimized_lens_construction, EnergyMethod, LensBranch,
};
use crate::core::RankOneTensor;
use crate::error::{Error, Result};
use crate::geometry::{theta_general, Frame};
use crate::linalg;

use super::RowBranch;

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyEntry {
    /// Distance of the direction to `{±e_d}`.
    pub dist: f64,
    pub theta: f64,
    pub branch: RowBranch,
    pub total: f64,
    /// `μ^(−(2d−2)/(2d−1))·total`: finite limit proxy of the two-well branch.
    pub proxy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossoverBracket {
    /// Pole distances on either side of the branch flip.
    pub dist_before: f64,
    pub dist_after: f64,
    pub theta_before: f64,
    pub theta_after: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyReport {
    /// The branch threshold `(|G|^(−2d)/μ)^(1/(3d−1))`.
    pub threshold: f64,
    pub entries: Vec<DichotomyEntry>,
    pub crossover: Option<CrossoverBracket>,
    /// θ at the end of the path (0 when the path ends at `±e_d`).
    pub theta_end: f64,
    /// Whether the limit proxy at the path end is at most its starting value.
    pub proxy_decreased: bool,
}

/// Scan directions along a path approaching `±e_d` (monotone in pole
/// distance), at fixed volume `μ`. Per direction: tail factor, branch,
/// optimized total energy. Reports the crossover bracket where the branch
/// flips.
pub fn dichotomy_scan(
    d: usize,
    a: &[f64],
    mu: f64,
    nu_path: &[Vec<f64>],
) -> Result<DichotomyReport> {
    if nu_path.len() < 2 {
        return Err(Error::parameter("dichotomy path needs at least 2 directions"));
    }
    let dists: Vec<f64> = nu_path.iter().map(|nu| linalg::dist_to_pole(nu)).collect();
    for w in dists.windows(2) {
        if w[1] > w[0] + 1e-12 {
            return Err(Error::parameter(
                "dichotomy path must approach ±e_d monotonically in distance",
            ));
        }
    }
    let a_norm = linalg::norm(a);
    let threshold = (a_norm.powi(-2 * d as i32) / mu).powf(1.0 / (3.0 * d as f64 - 1.0));
    let exponent = (2.0 * d as f64 - 2.0) / (2.0 * d as f64 - 1.0);

    let entries: Vec<DichotomyEntry> = nu_path
        .par_iter()
        .zip(dists.par_iter())
        .map(|(nu, &dist)| -> Result<DichotomyEntry> {
            let frame = Frame::for_direction(nu)?;
            let theta = theta_general(&frame);
            let (field, shape, params) = optimized_lens_construction(d, mu, nu, a)?;
            let g = RankOneTensor::new(a.to_vec(), nu.clone())?;
            let method =
                if d == 2 { EnergyMethod::ExactPiecewise } else { EnergyMethod::Sampled };
            let e = construction_energy(&field, &shape, &g, method)?;
            Ok(DichotomyEntry {
                dist,
                theta,
                branch: match params.branch {
                    LensBranch::ThreeWellLike => RowBranch::ThreeWell,
                    LensBranch::TwoWellLike => RowBranch::TwoWell,
                },
                total: e.total,
                proxy: e.total * mu.powf(-exponent),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut crossover = None;
    for w in entries.windows(2) {
        if w[0].branch == RowBranch::TwoWell && w[1].branch == RowBranch::ThreeWell {
            crossover = Some(CrossoverBracket {
                dist_before: w[0].dist,
                dist_after: w[1].dist,
                theta_before: w[0].theta,
                theta_after: w[1].theta,
            });
            break;
        }
    }
    let theta_end = entries.last().map(|e| e.theta).unwrap_or(0.0);
    let proxy_decreased = entries.last().map(|e| e.proxy).unwrap_or(0.0)
        <= entries.first().map(|e| e.proxy).unwrap_or(0.0) * (1.0 + 1e-12);
    Ok(DichotomyReport { threshold, entries, crossover, theta_end, proxy_decreased })
}

/// Great-circle path in the `(e_1, e_d)` plane parameterized by the lateral
/// component `ν_1`, descending from `nu1_start` to `nu1_end`.
pub fn nu1_path(d: usize, nu1_start: f64, nu1_end: f64, points: usize) -> Vec<Vec<f64>> {
    (0..points)
        .map(|k| {
            let t = if points == 1 {
                0.0
            } else {
                k as f64 / (points - 1) as f64
            };
            let nu1 = nu1_start + (nu1_end - nu1_start) * t;
            let mut nu = vec![0.0; d];
            nu[0] = -nu1;
            nu[d - 1] = (1.0 - nu1 * nu1).max(0.0).sqrt();
            nu
        })
        .collect()
}
