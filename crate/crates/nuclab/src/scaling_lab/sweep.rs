//! Volume sweeps: one optimized construction and energy evaluation per
//! target volume, rows computed in parallel with a deterministic order.

use rayon::prelude::*;

use crate::constructions::{
    construction_energy, optimized_lens_construction, small_volume_construction,
    ConstructionEnergy, EnergyMethod, LensBranch,
};
use crate::core::RankOneTensor;
use crate::error::{Error, Result};
use crate::field_solver::{self, Grid};
use crate::geometry::{self, InclusionShape};
use crate::linalg;

use super::{RowBranch, SweepMethod, SweepRow, SweepSpec};

/// Run a sweep: per volume pick the construction by regime, optimize its
/// parameters and evaluate the energy with the requested method. Rows come
/// back ordered by volume; the run is fully deterministic.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    validate_spec(spec)?;
    spec.volumes
        .par_iter()
        .map(|&mu| build_row(spec, mu))
        .collect::<Result<Vec<_>>>()
}

fn validate_spec(spec: &SweepSpec) -> Result<()> {
    if spec.nu.len() != spec.d || spec.a.len() != spec.d {
        return Err(Error::validation("sweep direction/amplitude dimension mismatch"));
    }
    if spec.volumes.iter().any(|&mu| !(mu > 0.0)) {
        return Err(Error::validation("sweep volumes must be positive"));
    }
    // all volumes on one side of the regime threshold
    let threshold = linalg::norm(&spec.a).powi(-2 * spec.d as i32);
    let below = spec.volumes.iter().filter(|&&mu| mu < threshold).count();
    if below != 0 && below != spec.volumes.len() {
        return Err(Error::validation(
            "sweep volumes must all lie on one side of the regime threshold",
        ));
    }
    Ok(())
}

fn build_row(spec: &SweepSpec, mu: f64) -> Result<SweepRow> {
    let g = RankOneTensor::new(spec.a.clone(), spec.nu.clone())?;
    let threshold = g.frobenius_norm().powi(-2 * spec.d as i32);
    if mu < threshold {
        return halfball_row(spec, mu, &g);
    }
    match optimized_lens_construction(spec.d, mu, &spec.nu, &spec.a) {
        Ok((field, shape, params)) => {
            let branch = match params.branch {
                LensBranch::ThreeWellLike => RowBranch::ThreeWell,
                LensBranch::TwoWellLike => RowBranch::TwoWell,
            };
            match spec.method {
                SweepMethod::NumericalMin => {
                    numerical_row(spec, mu, &g, &shape, params.h, params.l, branch)
                }
                _ => {
                    let e = construction_energy(&field, &shape, &g, energy_method(spec.method)?)?;
                    Ok(make_row(mu, &e, params.h, params.l, branch))
                }
            }
        }
        // near the threshold the optimal lens degenerates (H ≤ 1); the
        // half-ball pair takes over there
        Err(Error::Regime(_)) => halfball_row(spec, mu, &g),
        Err(e) => Err(e),
    }
}

fn halfball_row(spec: &SweepSpec, mu: f64, g: &RankOneTensor) -> Result<SweepRow> {
    let (field, shape, exact) = small_volume_construction(mu, g, spec.d)?;
    let r = match &shape {
        InclusionShape::HalfBall(b) => b.radius(),
        _ => unreachable!(),
    };
    match spec.method {
        SweepMethod::NumericalMin => numerical_row(spec, mu, g, &shape, r, r, RowBranch::HalfBall),
        SweepMethod::ExactPiecewise => Ok(make_row(mu, &exact, r, r, RowBranch::HalfBall)),
        m => {
            let e = construction_energy(&field, &shape, g, energy_method(m)?)?;
            Ok(make_row(mu, &e, r, r, RowBranch::HalfBall))
        }
    }
}

fn energy_method(m: SweepMethod) -> Result<EnergyMethod> {
    match m {
        SweepMethod::ClosedForm => Ok(EnergyMethod::ClosedForm),
        SweepMethod::ExactPiecewise => Ok(EnergyMethod::ExactPiecewise),
        SweepMethod::Sampled => Ok(EnergyMethod::Sampled),
        SweepMethod::NumericalMin => {
            Err(Error::Internal("numerical minimization handled separately".into()))
        }
    }
}

fn make_row(mu: f64, e: &ConstructionEnergy, h: f64, l: f64, branch: RowBranch) -> SweepRow {
    SweepRow {
        mu: e.measured_volume,
        target_mu: mu,
        surface: e.surface,
        elastic: e.elastic_exact,
        total: e.total,
        h,
        l,
        branch,
        flagged: false,
    }
}

/// Row via the grid solver: rasterize the shape, minimize the elastic energy
/// numerically, take the discrete perimeter as the surface part.
fn numerical_row(
    spec: &SweepSpec,
    mu: f64,
    g: &RankOneTensor,
    shape: &InclusionShape,
    h_param: f64,
    l_param: f64,
    branch: RowBranch,
) -> Result<SweepRow> {
    let feature = shape.min_feature().unwrap_or(h_param);
    let h = feature / 8.0;
    let rc = match shape {
        InclusionShape::HalfBall(b) => b.radius(),
        InclusionShape::Lens2D(l) => l.circumradius(),
        InclusionShape::LensD(l) => l.circumradius(),
        InclusionShape::VoxelMask(_) => return Err(Error::Capability("mask sweeps unsupported".into())),
    };
    let half_width = 4.0 * rc;
    let n_lat = ((2.0 * half_width) / h).ceil() as usize;
    let n_vert = (half_width / h).ceil() as usize;
    let mut dims = vec![n_lat; spec.d - 1];
    dims.push(n_vert);
    let mut origin = vec![-half_width; spec.d - 1];
    origin.push(0.0);
    let mask = geometry::rasterize(shape, h, origin, dims, 4)?;
    let grid = Grid::from_mask(&mask)?;
    let report = field_solver::minimize_elastic(&mask, g, &grid, 1e-10, 50_000)?;
    let surface = field_solver::grid_perimeter(&mask);
    Ok(SweepRow {
        mu: mask.volume(),
        target_mu: mu,
        surface,
        elastic: report.energy,
        total: surface + report.energy,
        h: h_param,
        l: l_param,
        branch,
        flagged: !report.converged,
    })
}

/// Small-volume regime check: half-ball sweep with exact energies, fitted;
/// errors if any volume exceeds the regime threshold.
pub fn small_regime_isoperimetric_check(
    d: usize,
    g: &RankOneTensor,
    mus: &[f64],
) -> Result<super::FitResult> {
    let threshold = g.frobenius_norm().powi(-2 * d as i32);
    if let Some(bad) = mus.iter().find(|&&mu| mu > threshold) {
        return Err(Error::Regime(format!(
            "volume {bad} exceeds the small-volume threshold {threshold}"
        )));
    }
    let spec = SweepSpec {
        d,
        nu: g.direction().to_vec(),
        a: g.amplitude().to_vec(),
        volumes: mus.to_vec(),
        method: SweepMethod::ExactPiecewise,
        seed: 0,
    };
    let rows = run_sweep(&spec)?;
    super::fit_exponent(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_2d(nu: [f64; 2], volumes: Vec<f64>, method: SweepMethod) -> SweepSpec {
        SweepSpec {
            d: 2,
            nu: nu.to_vec(),
            a: vec![1.0, 0.0],
            volumes,
            method,
            seed: 7,
        }
    }

    #[test]
    fn empty_volume_list_gives_empty_output() {
        let rows = run_sweep(&spec_2d([0.0, 1.0], vec![], SweepMethod::ClosedForm)).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn straddling_volumes_rejected() {
        let err = run_sweep(&spec_2d([0.0, 1.0], vec![0.1, 10.0], SweepMethod::ClosedForm));
        assert!(err.is_err());
    }

    #[test]
    fn vertical_direction_sweeps_three_well_branch() {
        let volumes: Vec<f64> = (2..=6).map(|k| 10f64.powi(k)).collect();
        let rows =
            run_sweep(&spec_2d([0.0, 1.0], volumes, SweepMethod::ExactPiecewise)).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert_eq!(r.branch, RowBranch::ThreeWell);
            assert!((r.total - (r.surface + r.elastic)).abs() <= 1e-12 * r.total);
        }
        // ordered by volume and strictly increasing energies
        for w in rows.windows(2) {
            assert!(w[0].mu < w[1].mu);
            assert!(w[0].total < w[1].total);
        }
    }

    #[test]
    fn branch_tags_agree_with_independent_condition() {
        // scan directions at fixed μ: the recorded branch must match the
        // threshold comparison evaluated independently per row
        let mu = 1e5;
        for nu1 in [0.02f64, 0.05, 0.09, 0.11, 0.3, 0.7] {
            let nu = [-nu1, (1.0 - nu1 * nu1).sqrt()];
            let rows = run_sweep(&spec_2d(nu, vec![mu], SweepMethod::ClosedForm)).unwrap();
            let frame = crate::geometry::Frame::for_direction(&nu).unwrap();
            let theta = crate::geometry::theta_general(&frame);
            let expected = if theta <= (1.0 / mu).powf(0.2) {
                RowBranch::ThreeWell
            } else {
                RowBranch::TwoWell
            };
            assert_eq!(rows[0].branch, expected, "nu1 = {nu1}");
        }
    }

    #[test]
    fn small_regime_slopes() {
        let g = RankOneTensor::new(vec![1.0, 0.0], vec![-0.6, 0.8]).unwrap();
        let mus: Vec<f64> = (-6..=-2).map(|k| 10f64.powi(k)).collect();
        let fit = small_regime_isoperimetric_check(2, &g, &mus).unwrap();
        assert!((fit.slope - 0.5).abs() < 0.03, "slope {}", fit.slope);

        // regime violation
        assert!(small_regime_isoperimetric_check(2, &g, &[0.1, 2.0]).is_err());
        // degenerate single-volume input: fit error
        assert!(matches!(
            small_regime_isoperimetric_check(2, &g, &[1e-3]),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn numerical_min_rows_are_admissible() {
        // grid-minimized rows: converged, consistent totals, and below the
        // closed-form rows for the same volumes (discrete minimum vs a test
        // field, up to the discrete perimeter's anisotropy overshoot)
        for mu in [0.5, 30.0] {
            let spec = spec_2d([0.0, 1.0], vec![mu], SweepMethod::NumericalMin);
            let rows = run_sweep(&spec).unwrap();
            assert_eq!(rows.len(), 1);
            let r = &rows[0];
            assert!(!r.flagged, "solver did not converge at mu = {mu}");
            assert!((r.total - (r.surface + r.elastic)).abs() <= 1e-12 * r.total);
            assert!((r.mu - mu).abs() / mu < 0.1, "measured volume {} vs {mu}", r.mu);
            let exact = run_sweep(&spec_2d([0.0, 1.0], vec![mu], SweepMethod::ExactPiecewise))
                .unwrap();
            assert!(
                r.elastic <= exact[0].elastic * 1.7 + 1e-9,
                "discrete elastic {} far above continuum {}",
                r.elastic,
                exact[0].elastic
            );
        }
    }

    #[test]
    fn determinism_bitwise() {
        let volumes: Vec<f64> = (2..=6).map(|k| 10f64.powi(k)).collect();
        let s = spec_2d([-0.6, 0.8], volumes, SweepMethod::ExactPiecewise);
        let a = run_sweep(&s).unwrap();
        let b = run_sweep(&s).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.total.to_bits(), y.total.to_bits());
            assert_eq!(x.mu.to_bits(), y.mu.to_bits());
        }
    }
}
