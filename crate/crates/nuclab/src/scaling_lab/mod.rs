//! Experiment harness: volume sweeps, exponent fits, the orientation
//! dichotomy scan, the localized lower-bound probe, and the
//! rescaling-identity verifier.

pub mod dichotomy;
pub mod fit;
pub mod probe;
pub mod rescale;
pub mod svg;
pub mod sweep;

pub use dichotomy::{dichotomy_scan, nu1_path, CrossoverBracket, DichotomyEntry, DichotomyReport};
pub use fit::{fit_exponent, FitResult};
pub use probe::{probe_lower_bound, ProbeReport};
pub use rescale::{verify_rescaling, ConstructionKind, RescaleCheck};
pub use sweep::{run_sweep, small_regime_isoperimetric_check};

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::Result;

/// Energy evaluation method of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMethod {
    ClosedForm,
    ExactPiecewise,
    Sampled,
    /// Grid minimization (admissibility studies; not meant for fits).
    NumericalMin,
}

/// Specification of a volume sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub d: usize,
    pub nu: Vec<f64>,
    pub a: Vec<f64>,
    /// Target volumes; for a fit use ≥ 5 values spanning ≥ 2 decades, all on
    /// one side of the regime threshold.
    pub volumes: Vec<f64>,
    pub method: SweepMethod,
    pub seed: u64,
}

/// Construction branch recorded per row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowBranch {
    ThreeWell,
    TwoWell,
    HalfBall,
}

impl std::fmt::Display for RowBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowBranch::ThreeWell => write!(f, "three-well-like"),
            RowBranch::TwoWell => write!(f, "two-well-like"),
            RowBranch::HalfBall => write!(f, "half-ball"),
        }
    }
}

/// One observation of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// Measured inclusion volume (carried into fits).
    pub mu: f64,
    /// Requested volume.
    pub target_mu: f64,
    pub surface: f64,
    pub elastic: f64,
    pub total: f64,
    /// Lens half-diagonals, or the half-ball radius in both slots.
    pub h: f64,
    pub l: f64,
    pub branch: RowBranch,
    /// Set when a numerical solve failed to converge; flagged rows are
    /// excluded from fits.
    pub flagged: bool,
}

/// Write sweep rows as CSV with the fixed header
/// `mu,surface,elastic,total,H,L,branch`.
pub fn write_rows_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut out = String::from("mu,surface,elastic,total,H,L,branch\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.mu, r.surface, r.elastic, r.total, r.h, r.l, r.branch
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}
