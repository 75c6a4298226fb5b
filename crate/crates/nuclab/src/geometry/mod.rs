//! Exact and sampled geometry of inclusion shapes, the tilted-cage systems,
//! and voxel masks.

pub mod cage;
pub mod qmc;
pub mod shapes;
pub mod voxel;

pub use cage::{build_cages, verify_cage_inclusions, CageCertificate, CageSystem};
pub use shapes::{
    halfball_from_volume, lens2d_measures, theta_2d, theta_general, unit_ball_volume, Frame,
    HalfBall, Lens2D, Lens2DMeasures, LensD,
};
pub use voxel::VoxelMask;

use crate::error::{Error, Result};

/// Tagged inclusion shape.
#[derive(Debug, Clone)]
pub enum InclusionShape {
    HalfBall(HalfBall),
    Lens2D(Lens2D),
    LensD(LensD),
    VoxelMask(VoxelMask),
}

impl InclusionShape {
    pub fn dim(&self) -> usize {
        match self {
            InclusionShape::HalfBall(b) => b.dim(),
            InclusionShape::Lens2D(_) => 2,
            InclusionShape::LensD(l) => l.dim(),
            InclusionShape::VoxelMask(m) => m.dim(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            InclusionShape::HalfBall(b) => b.contains(x),
            InclusionShape::Lens2D(l) => l.contains(x),
            InclusionShape::LensD(l) => l.contains(x),
            InclusionShape::VoxelMask(m) => m.contains_point(x),
        }
    }

    /// Smallest geometric feature, used for rasterization resolution checks.
    pub fn min_feature(&self) -> Option<f64> {
        match self {
            InclusionShape::HalfBall(b) => Some(b.radius()),
            InclusionShape::Lens2D(l) => Some(l.h()),
            InclusionShape::LensD(l) => Some(l.h()),
            InclusionShape::VoxelMask(_) => None,
        }
    }
}

/// Volume of a shape: exact closed form where one exists (half-ball, 2D lens,
/// voxel mask), deterministic low-discrepancy estimate with relative target
/// `tol` for the general-dimension lens.
pub fn shape_volume(shape: &InclusionShape, tol: f64) -> Result<f64> {
    if !(tol > 1e-6 && tol < 1e-1) {
        return Err(Error::parameter(format!(
            "volume tolerance must lie in (1e-6, 1e-1), got {tol}"
        )));
    }
    Ok(match shape {
        InclusionShape::HalfBall(b) => b.volume(),
        InclusionShape::Lens2D(l) => lens2d_measures(l).area,
        InclusionShape::LensD(l) => l.volume_sampled(tol),
        InclusionShape::VoxelMask(m) => m.volume(),
    })
}

/// Rasterize a shape onto a grid with `k^d` subsamples per cell (majority
/// occupancy).
pub fn rasterize(
    shape: &InclusionShape,
    h: f64,
    origin: Vec<f64>,
    dims: Vec<usize>,
    k: usize,
) -> Result<VoxelMask> {
    // the shape must fit inside the grid box
    if let Some(rc) = circumradius(shape) {
        let d = dims.len();
        for i in 0..d {
            let lo = origin[i];
            let hi = origin[i] + dims[i] as f64 * h;
            let (need_lo, need_hi) = if i + 1 == d { (0.0, rc) } else { (-rc, rc) };
            if lo > need_lo + 1e-9 || hi < need_hi - 1e-9 {
                return Err(Error::parameter(format!(
                    "shape of circumradius {rc} does not fit in grid axis {i} [{lo}, {hi}]"
                )));
            }
        }
    }
    voxel::rasterize(|x| shape.contains(x), shape.min_feature(), h, origin, dims, k)
}

fn circumradius(shape: &InclusionShape) -> Option<f64> {
    match shape {
        InclusionShape::HalfBall(b) => Some(b.radius()),
        InclusionShape::Lens2D(l) => Some(l.circumradius()),
        InclusionShape::LensD(l) => Some(l.circumradius()),
        InclusionShape::VoxelMask(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn shape_volume_closed_forms() {
        let lens = Lens2D::new(2.0, 5.0, [0.0, 1.0]).unwrap();
        assert_relative_eq!(shape_volume(&InclusionShape::Lens2D(lens), 1e-2).unwrap(), 10.0);

        let mut mask = VoxelMask::new(0.1, vec![0.0, 0.0], vec![20, 10]).unwrap();
        for i in 0..100 {
            mask.set_flat(i, true);
        }
        assert_relative_eq!(shape_volume(&InclusionShape::VoxelMask(mask), 1e-2).unwrap(), 1.0);
    }

    #[test]
    fn lensd_volume_cross_validates_lens2d() {
        // the d=2 instance of the general lens agrees with the exact HL
        let nu = [-0.6, 0.8];
        let frame = Frame::for_direction(&nu).unwrap();
        let lensd = LensD::new(1.5, 4.0, frame).unwrap();
        let exact = 1.5 * 4.0;
        let est = shape_volume(&InclusionShape::LensD(lensd), 1e-3).unwrap();
        assert!((est - exact).abs() / exact < 1e-3, "est {est} vs exact {exact}");
    }

    #[test]
    fn shape_volume_tol_validation() {
        let lens = Lens2D::new(1.0, 2.0, [0.0, 1.0]).unwrap();
        assert!(shape_volume(&InclusionShape::Lens2D(lens), 0.5).is_err());
    }
}
