//! Explicit upper-bound test pairs `(u, χ)`: closed-form fields, energy
//! bounds and exact evaluation, lens parameter optimization, and the
//! reflection across the boundary hyperplane.

pub mod energy;
pub mod field;
pub mod optimize;
pub mod polygon;
pub mod reflect;

pub use energy::{
    construction_energy, elastic_bound_2d, elastic_bound_d, ConstructionEnergy, EnergyMethod,
    BOUND_SLACK, SAMPLED_REL_TOL,
};
pub use field::{ConstructionField, Lens2Field, LensNField, SmallVolumeField};
pub use optimize::{
    branch_threshold, optimize_lens_params, select_branch, LensBranch, LensParams,
};
pub use reflect::{
    flat_trace_area, flat_trace_inequality_check, reflect, ReflectedField, ReflectionReport,
    ThreePhaseLabel, TraceCheck,
};

use crate::core::RankOneTensor;
use crate::error::Result;
use crate::geometry::{halfball_from_volume, Frame, InclusionShape, Lens2D, LensD};

/// Serializable record of a constructed pair and its energy breakdown.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConstructionReport {
    pub d: usize,
    pub nu: Vec<f64>,
    pub a: Vec<f64>,
    pub branch: String,
    /// Lens half-diagonals `(H, L)` or half-ball radius in both slots.
    pub h: f64,
    pub l: f64,
    pub surface: f64,
    pub elastic_bound: f64,
    pub elastic_exact: f64,
    pub total: f64,
    pub measured_volume: f64,
}

impl ConstructionReport {
    pub fn new(
        field: &ConstructionField,
        shape: &InclusionShape,
        branch: impl Into<String>,
        energy: &ConstructionEnergy,
    ) -> Self {
        let (h, l) = match shape {
            InclusionShape::HalfBall(b) => (b.radius(), b.radius()),
            InclusionShape::Lens2D(lens) => (lens.h(), lens.l()),
            InclusionShape::LensD(lens) => (lens.h(), lens.l()),
            InclusionShape::VoxelMask(m) => (m.spacing(), m.spacing()),
        };
        let well = field.well();
        ConstructionReport {
            d: field.dim(),
            nu: well.direction().to_vec(),
            a: well.amplitude().to_vec(),
            branch: branch.into(),
            h,
            l,
            surface: energy.surface,
            elastic_bound: energy.elastic_bound,
            elastic_exact: energy.elastic_exact,
            total: energy.total,
            measured_volume: energy.measured_volume,
        }
    }
}

/// Small-volume pair: half-ball of volume `μ` with the cut-off well field.
/// Energies are evaluated exactly (radial quadrature).
pub fn small_volume_construction(
    mu: f64,
    g: &RankOneTensor,
    d: usize,
) -> Result<(ConstructionField, InclusionShape, ConstructionEnergy)> {
    let hb = halfball_from_volume(mu, d)?;
    let field = ConstructionField::SmallVolume(SmallVolumeField::new(g.clone(), hb.radius())?);
    let shape = InclusionShape::HalfBall(hb);
    let e = construction_energy(&field, &shape, g, EnergyMethod::ExactPiecewise)?;
    Ok((field, shape, e))
}

/// The 2D lens field for half-diagonals `H ≤ L`, direction `ν` and
/// amplitude `a`. Continuity across all facets is verified on construction.
pub fn lens2d_field(h: f64, l: f64, nu: [f64; 2], a: [f64; 2]) -> Result<ConstructionField> {
    Ok(ConstructionField::Lens2(Lens2Field::new(h, l, nu, a)?))
}

/// The general-dimension scalar-profile lens field.
pub fn lensd_field(h: f64, l: f64, frame: Frame, a: Vec<f64>) -> Result<ConstructionField> {
    Ok(ConstructionField::LensN(LensNField::new(h, l, frame, a)?))
}

/// Build the optimized large-volume lens pair for `(d, μ, ν, a)`.
pub fn optimized_lens_construction(
    d: usize,
    mu: f64,
    nu: &[f64],
    a: &[f64],
) -> Result<(ConstructionField, InclusionShape, LensParams)> {
    let params = optimize_lens_params(d, mu, nu, a)?;
    if d == 2 {
        let field = lens2d_field(params.h, params.l, [nu[0], nu[1]], [a[0], a[1]])?;
        let shape = InclusionShape::Lens2D(Lens2D::new(params.h, params.l, [nu[0], nu[1]])?);
        Ok((field, shape, params))
    } else {
        let frame = Frame::for_direction(nu)?;
        let field = lensd_field(params.h, params.l, frame.clone(), a.to_vec())?;
        let shape = InclusionShape::LensD(LensD::new(params.h, params.l, frame)?);
        Ok((field, shape, params))
    }
}
