//! Piecewise-defined displacement fields for the explicit test pairs.
//!
//! All fields are compactly supported, continuous, and evaluate both the
//! displacement `u(x)` and its gradient `∇u(x)` pointwise. Region data stays
//! exposed so the exact integrator can consume it.

use crate::core::RankOneTensor;
use crate::error::{Error, Result};
use crate::geometry::qmc::Halton;
use crate::geometry::{Frame, Lens2D, LensD};
use crate::linalg::{self, Mat};

/// Maximum displacement jump tolerated across region facets, relative to the
/// field's amplitude scale.
pub const CONTINUITY_TOL: f64 = 1e-10;

/// Facet points sampled per interface in the continuity check.
pub const CONTINUITY_SAMPLES: usize = 200;

/// Cubic smoothstep ramp `s(t) = 3t² − 2t³` from 0 at `t=0` to 1 at `t=1`.
#[inline]
fn smoothstep(t: f64) -> f64 {
    3.0 * t * t - 2.0 * t * t * t
}

#[inline]
fn smoothstep_deriv(t: f64) -> f64 {
    6.0 * t - 6.0 * t * t
}

/// Radial cutoff `ζ`: ≡ 1 on `B_inner`, smoothstep down to 0 on the annulus,
/// ≡ 0 outside `B_outer`. The slope stays below `1.5/(outer−inner)`.
#[derive(Debug, Clone, Copy)]
pub struct RadialCutoff {
    pub inner: f64,
    pub outer: f64,
}

impl RadialCutoff {
    pub fn value(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            smoothstep((self.outer - r) / (self.outer - self.inner))
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r <= self.inner || r >= self.outer {
            0.0
        } else {
            -smoothstep_deriv((self.outer - r) / (self.outer - self.inner))
                / (self.outer - self.inner)
        }
    }
}

/// Cut-off well field for the small-volume half-ball pair:
/// `u(x) = ζ_R(|x|)·(ν·x)·a` with `ζ_R ≡ 1` on `B_R`, 0 outside `B_2R`.
#[derive(Debug, Clone)]
pub struct SmallVolumeField {
    well: RankOneTensor,
    radius: f64,
    cutoff: RadialCutoff,
}

impl SmallVolumeField {
    pub fn new(well: RankOneTensor, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::parameter("cutoff radius must be positive"));
        }
        let cutoff = RadialCutoff { inner: radius, outer: 2.0 * radius };
        Ok(SmallVolumeField { well, radius, cutoff })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cutoff(&self) -> RadialCutoff {
        self.cutoff
    }

    pub fn well(&self) -> &RankOneTensor {
        &self.well
    }

    pub fn displacement(&self, x: &[f64]) -> Vec<f64> {
        let r = linalg::norm(x);
        let z = self.cutoff.value(r);
        linalg::scaled(self.well.amplitude(), z * linalg::dot(self.well.direction(), x))
    }

    pub fn gradient(&self, x: &[f64]) -> Mat {
        let d = self.well.dim();
        let r = linalg::norm(x);
        let z = self.cutoff.value(r);
        let zp = self.cutoff.derivative(r);
        let mut m = Mat::zero(d);
        let a = self.well.amplitude();
        let nu = self.well.direction();
        let proj = linalg::dot(nu, x);
        for i in 0..d {
            for j in 0..d {
                let mut v = z * a[i] * nu[j];
                if zp != 0.0 && r > 0.0 {
                    v += proj * a[i] * zp * x[j] / r;
                }
                m.set(i, j, v);
            }
        }
        m
    }
}

/// 2D lens field: gradients `G_1, G_2` inside the two lens halves, `G̃` on the
/// tail, zero elsewhere, multiplied by a radial cutoff supported in `B_4L`.
///
/// All internal data lives in the normalized frame (`ν_1 ≤ 0 ≤ ν_2`); a
/// recorded mirror conjugation maps evaluation in and out.
#[derive(Debug, Clone)]
pub struct Lens2Field {
    lens: Lens2D,
    /// Amplitude in the normalized frame.
    a: [f64; 2],
    /// Original-frame well this field was built for.
    well: RankOneTensor,
    /// `G_1 = a ⊗ (ν − (H/L)ν⊥)` etc., normalized frame.
    g1: Mat,
    g2: Mat,
    gt: Mat,
    cutoff: RadialCutoff,
}

/// Region of the normalized upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LensRegion {
    Inner1,
    Inner2,
    Tail,
    Outside,
}

impl Lens2Field {
    pub fn new(h: f64, l: f64, nu: [f64; 2], a: [f64; 2]) -> Result<Self> {
        if linalg::norm(&a) == 0.0 {
            return Err(Error::validation("amplitude a must be nonzero"));
        }
        let lens = Lens2D::new(h, l, nu)?;
        let well = RankOneTensor::new(a.to_vec(), nu.to_vec())?;
        // push the amplitude through the orientation normalization
        let mut an = a;
        if lens.negated() {
            an = [-an[0], -an[1]];
        }
        if lens.mirrored() {
            an = [-an[0], an[1]];
        }
        let nun = lens.nu();
        let nup = lens.nu_perp();
        let ratio = h / l;
        let dir1 = [nun[0] - ratio * nup[0], nun[1] - ratio * nup[1]];
        let dir2 = [nun[0] + ratio * nup[0], nun[1] + ratio * nup[1]];
        let g1 = Mat::outer(&an, &dir1);
        let g2 = Mat::outer(&an, &dir2);
        let gt = Mat::outer(&linalg::scaled(&an, -2.0 * ratio), &nup);
        let cutoff = RadialCutoff { inner: 2.0 * l, outer: 4.0 * l };
        let field = Lens2Field { lens, a: an, well, g1, g2, gt, cutoff };
        field.verify_continuity(CONTINUITY_SAMPLES)?;
        Ok(field)
    }

    pub fn lens(&self) -> &Lens2D {
        &self.lens
    }

    pub fn well(&self) -> &RankOneTensor {
        &self.well
    }

    /// Normalized-frame amplitude.
    pub fn amplitude(&self) -> [f64; 2] {
        self.a
    }

    pub fn gradients(&self) -> (&Mat, &Mat, &Mat) {
        (&self.g1, &self.g2, &self.gt)
    }

    pub fn cutoff(&self) -> RadialCutoff {
        self.cutoff
    }

    /// Region classification of a normalized-frame point.
    pub fn region(&self, xn: [f64; 2]) -> LensRegion {
        if xn[1] <= 0.0 {
            return LensRegion::Outside;
        }
        let l = self.lens.l();
        let h = self.lens.h();
        let z = self.lens.lens_coords(xn);
        if z[0].abs() < l && z[1].abs() < h * (1.0 - z[0].abs() / l) {
            return if z[0] < 0.0 { LensRegion::Inner1 } else { LensRegion::Inner2 };
        }
        if z[0] > -l && z[0] < 0.0 && z[1] <= -h * (1.0 - z[0].abs() / l) {
            return LensRegion::Tail;
        }
        LensRegion::Outside
    }

    /// Uncut displacement `v(x)` in the normalized frame.
    fn v(&self, xn: [f64; 2]) -> [f64; 2] {
        let h = self.lens.h();
        match self.region(xn) {
            LensRegion::Inner1 => {
                let gx = self.g1.apply(&xn);
                [gx[0] - h * self.a[0], gx[1] - h * self.a[1]]
            }
            LensRegion::Inner2 => {
                let gx = self.g2.apply(&xn);
                [gx[0] - h * self.a[0], gx[1] - h * self.a[1]]
            }
            LensRegion::Tail => {
                let gx = self.gt.apply(&xn);
                [gx[0] - 2.0 * h * self.a[0], gx[1] - 2.0 * h * self.a[1]]
            }
            LensRegion::Outside => [0.0, 0.0],
        }
    }

    fn v_gradient(&self, xn: [f64; 2]) -> Option<&Mat> {
        match self.region(xn) {
            LensRegion::Inner1 => Some(&self.g1),
            LensRegion::Inner2 => Some(&self.g2),
            LensRegion::Tail => Some(&self.gt),
            LensRegion::Outside => None,
        }
    }

    pub fn displacement(&self, x: &[f64]) -> Vec<f64> {
        let mirrored = self.lens.mirrored();
        let xn = if mirrored { [-x[0], x[1]] } else { [x[0], x[1]] };
        let z = self.cutoff.value(linalg::norm(&xn));
        let v = self.v(xn);
        let u = [z * v[0], z * v[1]];
        if mirrored {
            vec![-u[0], u[1]]
        } else {
            vec![u[0], u[1]]
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Mat {
        let mirrored = self.lens.mirrored();
        let xn = if mirrored { [-x[0], x[1]] } else { [x[0], x[1]] };
        let r = linalg::norm(&xn);
        let z = self.cutoff.value(r);
        let zp = self.cutoff.derivative(r);
        let mut m = Mat::zero(2);
        if let Some(g) = self.v_gradient(xn) {
            for i in 0..2 {
                for j in 0..2 {
                    m.set(i, j, z * g.get(i, j));
                }
            }
            if zp != 0.0 && r > 0.0 {
                let v = self.v(xn);
                for i in 0..2 {
                    for j in 0..2 {
                        m.set(i, j, m.get(i, j) + v[i] * zp * xn[j] / r);
                    }
                }
            }
        }
        if mirrored {
            // S ∇u_n S with S = diag(−1, 1): flip the off-diagonal signs
            let flipped = Mat {
                d: 2,
                data: vec![m.get(0, 0), -m.get(0, 1), -m.get(1, 0), m.get(1, 1)],
            };
            return flipped;
        }
        m
    }

    /// Exact two-sided evaluation on all five facets; errors if any sampled
    /// jump exceeds the tolerance (that would be a construction bug).
    fn verify_continuity(&self, samples: usize) -> Result<()> {
        let h = self.lens.h();
        let l = self.lens.l();
        let nun = self.lens.nu();
        let nup = self.lens.nu_perp();
        let scale = (4.0 * h * linalg::norm(&self.a)).max(1.0);
        let to_x = |z1: f64, z2: f64| -> [f64; 2] {
            [z1 * nup[0] + z2 * nun[0], z1 * nup[1] + z2 * nun[1]]
        };
        let affine = |g: &Mat, shift: f64, x: [f64; 2]| -> [f64; 2] {
            let gx = g.apply(&x);
            [gx[0] + shift * self.a[0], gx[1] + shift * self.a[1]]
        };
        let zero = |_x: [f64; 2]| [0.0, 0.0];
        let mut worst: f64 = 0.0;
        let mut check = |f1: &dyn Fn([f64; 2]) -> [f64; 2],
                         f2: &dyn Fn([f64; 2]) -> [f64; 2],
                         point: [f64; 2]| {
            if point[1] <= 0.0 {
                return; // facets matter only inside the open half-plane
            }
            let a = f1(point);
            let b = f2(point);
            let jump = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
            worst = worst.max(jump);
        };
        let g1f = |x: [f64; 2]| affine(&self.g1, -h, x);
        let g2f = |x: [f64; 2]| affine(&self.g2, -h, x);
        let gtf = |x: [f64; 2]| affine(&self.gt, -2.0 * h, x);
        for k in 0..samples {
            let t = (k as f64 + 0.5) / samples as f64;
            // 1. inner interface z1 = 0, z2 ∈ (−H, H)
            check(&g1f, &g2f, to_x(0.0, -h + 2.0 * h * t));
            // 2. upper-left edge z2 = H(1−|z1|/L), z1 ∈ (−L, 0)
            let z1 = -l * t;
            check(&g1f, &zero, to_x(z1, h * (1.0 - t)));
            // 3. upper-right edge
            check(&g2f, &zero, to_x(l * t, h * (1.0 - t)));
            // 4. lens/tail interface z2 = −H(1−|z1|/L), z1 ∈ (−L, 0)
            check(&g1f, &gtf, to_x(z1, -h * (1.0 - t)));
            // 5. tail outer edge z1 = −L, z2 below −0
            check(&gtf, &zero, to_x(-l, -3.0 * l * t));
        }
        if worst > CONTINUITY_TOL * scale {
            return Err(Error::Internal(format!(
                "lens field discontinuity {worst:.3e} exceeds tolerance (scale {scale:.3e})"
            )));
        }
        Ok(())
    }
}

/// General-dimension lens field `u = ζ·w·a` with the scalar profile `w`
/// affine on the lens, constant along `ν` on the tail, zero elsewhere.
#[derive(Debug, Clone)]
pub struct LensNField {
    lensd: LensD,
    a: Vec<f64>,
    well: RankOneTensor,
    cutoff: RadialCutoff,
}

impl LensNField {
    pub fn new(h: f64, l: f64, frame: Frame, a: Vec<f64>) -> Result<Self> {
        if a.len() != frame.dim() {
            return Err(Error::validation("amplitude dimension mismatch"));
        }
        let well = RankOneTensor::new(a.clone(), frame.nu().to_vec())?;
        let lensd = LensD::new(h, l, frame)?;
        let cutoff = RadialCutoff { inner: 2.0 * l, outer: 4.0 * l };
        let field = LensNField { lensd, a, well, cutoff };
        field.verify_continuity(CONTINUITY_SAMPLES)?;
        Ok(field)
    }

    pub fn lens(&self) -> &LensD {
        &self.lensd
    }

    pub fn well(&self) -> &RankOneTensor {
        &self.well
    }

    pub fn cutoff(&self) -> RadialCutoff {
        self.cutoff
    }

    /// Scalar profile and its gradient coefficients. Returns
    /// `(w, grad_kind)` where `grad_kind` captures the active branch.
    pub fn profile(&self, x: &[f64]) -> (f64, ProfileBranch) {
        let d = self.lensd.dim();
        if x[d - 1] <= 0.0 {
            return (0.0, ProfileBranch::Outside);
        }
        let h = self.lensd.h();
        let l = self.lensd.l();
        let z = self.lensd.frame().lens_coords(x);
        let s: f64 = z[..d - 1].iter().map(|v| v.abs()).sum();
        if s < l {
            let cap = h * (1.0 - s / l);
            if z[d - 1].abs() < cap {
                return (z[d - 1] + h / l * s - h, ProfileBranch::Lens);
            }
            if z[d - 1] <= -cap {
                return (2.0 * h / l * s - 2.0 * h, ProfileBranch::Tail);
            }
        }
        (0.0, ProfileBranch::Outside)
    }

    /// `∇w` for the active branch at `x`.
    pub fn profile_gradient(&self, x: &[f64], branch: ProfileBranch) -> Vec<f64> {
        let d = self.lensd.dim();
        let mut grad = vec![0.0; d];
        let ratio = self.lensd.h() / self.lensd.l();
        match branch {
            ProfileBranch::Outside => grad,
            ProfileBranch::Lens | ProfileBranch::Tail => {
                let frame = self.lensd.frame();
                let z = frame.lens_coords(x);
                let scale = if branch == ProfileBranch::Lens { ratio } else { 2.0 * ratio };
                for (i, p) in frame.perp().iter().enumerate() {
                    let s = if z[i] >= 0.0 { 1.0 } else { -1.0 };
                    linalg::axpy(&mut grad, scale * s, p);
                }
                if branch == ProfileBranch::Lens {
                    linalg::axpy(&mut grad, 1.0, frame.nu());
                }
                grad
            }
        }
    }

    pub fn displacement(&self, x: &[f64]) -> Vec<f64> {
        let (w, _) = self.profile(x);
        let z = self.cutoff.value(linalg::norm(x));
        linalg::scaled(&self.a, z * w)
    }

    pub fn gradient(&self, x: &[f64]) -> Mat {
        let d = self.lensd.dim();
        let (w, branch) = self.profile(x);
        let r = linalg::norm(x);
        let z = self.cutoff.value(r);
        let zp = self.cutoff.derivative(r);
        let gw = self.profile_gradient(x, branch);
        let mut m = Mat::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut v = z * self.a[i] * gw[j];
                if zp != 0.0 && r > 0.0 {
                    v += w * self.a[i] * zp * x[j] / r;
                }
                m.set(i, j, v);
            }
        }
        m
    }

    fn verify_continuity(&self, samples: usize) -> Result<()> {
        let d = self.lensd.dim();
        let h = self.lensd.h();
        let l = self.lensd.l();
        let scale = (4.0 * h * linalg::norm(&self.a)).max(1.0);
        let mut worst: f64 = 0.0;
        let mut halton = Halton::new(d - 1);
        let mut u = vec![0.0; d - 1];
        for _ in 0..samples {
            halton.next_point(&mut u);
            // a point of the open ℓ¹ ball of radius L in the z' coordinates
            let mut zp: Vec<f64> = u.iter().map(|t| 2.0 * t - 1.0).collect();
            let s: f64 = zp.iter().map(|v| v.abs()).sum();
            if s >= 1.0 {
                zp.iter_mut().for_each(|v| *v *= 0.9 / s);
            }
            let zp: Vec<f64> = zp.iter().map(|v| v * l).collect();
            let s: f64 = zp.iter().map(|v| v.abs()).sum();
            let cap = h * (1.0 - s / l);
            let lens_w = |zd: f64| zd + h / l * s - h;
            let tail_w = 2.0 * h / l * s - 2.0 * h;
            // upper surface: w from the lens branch vs 0
            worst = worst.max(lens_w(cap).abs());
            // lower surface: lens branch vs tail value
            worst = worst.max((lens_w(-cap) - tail_w).abs());
            // tail vanishes at the cylinder boundary s = L: continuity with 0
            let boundary_tail = 2.0 * h / l * l - 2.0 * h;
            worst = worst.max(boundary_tail.abs());
        }
        if worst > CONTINUITY_TOL * scale {
            return Err(Error::Internal(format!(
                "general-d lens profile discontinuity {worst:.3e}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileBranch {
    Lens,
    Tail,
    Outside,
}

/// A compactly supported piecewise construction field.
#[derive(Debug, Clone)]
pub enum ConstructionField {
    SmallVolume(SmallVolumeField),
    Lens2(Lens2Field),
    LensN(LensNField),
}

impl ConstructionField {
    pub fn dim(&self) -> usize {
        match self {
            ConstructionField::SmallVolume(f) => f.well.dim(),
            ConstructionField::Lens2(_) => 2,
            ConstructionField::LensN(f) => f.lensd.dim(),
        }
    }

    /// The well matrix this construction was built for.
    pub fn well(&self) -> &RankOneTensor {
        match self {
            ConstructionField::SmallVolume(f) => f.well(),
            ConstructionField::Lens2(f) => f.well(),
            ConstructionField::LensN(f) => f.well(),
        }
    }

    pub fn displacement(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ConstructionField::SmallVolume(f) => f.displacement(x),
            ConstructionField::Lens2(f) => f.displacement(x),
            ConstructionField::LensN(f) => f.displacement(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Mat {
        match self {
            ConstructionField::SmallVolume(f) => f.gradient(x),
            ConstructionField::Lens2(f) => f.gradient(x),
            ConstructionField::LensN(f) => f.gradient(x),
        }
    }

    /// Radius of the support ball.
    pub fn support_radius(&self) -> f64 {
        match self {
            ConstructionField::SmallVolume(f) => 2.0 * f.radius,
            ConstructionField::Lens2(f) => 4.0 * f.lens.l(),
            ConstructionField::LensN(f) => 4.0 * f.lensd.l(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_volume_field_matches_well_inside() {
        let well = RankOneTensor::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let f = SmallVolumeField::new(well.clone(), 2.0).unwrap();
        let g = f.gradient(&[0.3, 0.4]);
        let gm = well.matrix();
        assert_relative_eq!(g.minus(&gm).frobenius_norm(), 0.0, epsilon = 1e-14);
        // vanishes outside 2R
        assert_relative_eq!(linalg::norm(&f.displacement(&[4.1, 0.2])), 0.0);
    }

    #[test]
    fn lens2_rank_one_jumps() {
        // G_2 − G_1 = 2(H/L) a ⊗ ν⊥: rank one along ν⊥
        let f = Lens2Field::new(1.0, 2.0, [-0.6, 0.8], [1.0, 0.0]).unwrap();
        let (g1, g2, _) = f.gradients();
        let diff = g2.minus(g1);
        let nup = f.lens().nu_perp();
        let expected = Mat::outer(
            &linalg::scaled(&f.amplitude(), 2.0 * 1.0 / 2.0),
            &nup,
        );
        assert_relative_eq!(diff.minus(&expected).frobenius_norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn lens2_sup_norm_bound() {
        // ‖v‖_∞ ≤ 4H|a| on the closure of M ∪ T
        let h = 1.3;
        let l = 3.1;
        let f = Lens2Field::new(h, l, [-0.6, 0.8], [0.0, 2.0]).unwrap();
        let bound = 4.0 * h * 2.0;
        let mut halton = Halton::new(2);
        let mut u = [0.0; 2];
        for _ in 0..5000 {
            halton.next_point(&mut u);
            let x = [(2.0 * u[0] - 1.0) * 4.0 * l, u[1] * 4.0 * l];
            let vn = linalg::norm(&f.displacement(&x));
            assert!(vn <= bound * (1.0 + 1e-12), "|u| = {vn} exceeds 4H|a| = {bound}");
        }
    }

    #[test]
    fn lens2_vertical_direction_has_no_tail() {
        let f = Lens2Field::new(1.0, 2.0, [0.0, 1.0], [1.0, 0.0]).unwrap();
        // v vanishes on the whole boundary ∂M ∩ ℝ²₊ and there is no tail
        let mut halton = Halton::new(1);
        let mut u = [0.0];
        for _ in 0..500 {
            halton.next_point(&mut u);
            let x = [(2.0 * u[0] - 1.0) * 8.0, 1e-6 + u[0] * 8.0];
            assert!(f.region(x) != LensRegion::Tail);
        }
    }

    #[test]
    fn lens2_mirrored_field_energy_consistency() {
        // the mirrored construction has the same misfit density at mirrored
        // points
        let a = [0.7, -0.2];
        let nu = [0.6, 0.8]; // gets mirrored
        let f = Lens2Field::new(1.0, 2.5, nu, a).unwrap();
        assert!(f.lens().mirrored());
        let g = f.well().matrix();
        let x = [0.9, 0.7];
        let grad = f.gradient(&x);
        let chi = if f.lens().contains(&x) { 1.0 } else { 0.0 };
        let misfit = grad.misfit(chi, &g);
        // compare against an unmirrored lens with the mirrored inputs
        let f2 = Lens2Field::new(1.0, 2.5, [-0.6, 0.8], [-0.7, -0.2]).unwrap();
        let xm = [-0.9, 0.7];
        let grad2 = f2.gradient(&xm);
        let chi2 = if f2.lens().contains(&xm) { 1.0 } else { 0.0 };
        let misfit2 = grad2.misfit(chi2, &f2.well().matrix());
        assert_relative_eq!(misfit, misfit2, epsilon = 1e-13);
    }

    #[test]
    fn lensn_gradient_on_lens_branch() {
        // ∇w = ν + (H/L) Σ sgn(x·ν⊥_i) ν⊥_i on the lens
        let nu = linalg::normalized(&[-0.3, 0.1, 0.9]).unwrap();
        let frame = Frame::for_direction(&nu).unwrap();
        let f = LensNField::new(1.0, 3.0, frame.clone(), vec![1.0, 0.0, 0.0]).unwrap();
        let x = frame.from_lens_coords(&[0.4, -0.3, 0.1]);
        if x[2] > 0.0 {
            let (_, branch) = f.profile(&x);
            assert_eq!(branch, ProfileBranch::Lens);
            let gw = f.profile_gradient(&x, branch);
            let mut expected = frame.nu().to_vec();
            linalg::axpy(&mut expected, 1.0 / 3.0, &frame.perp()[0]);
            linalg::axpy(&mut expected, -1.0 / 3.0, &frame.perp()[1]);
            for i in 0..3 {
                assert_relative_eq!(gw[i], expected[i], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn lensn_profile_symmetric_in_perp_coords() {
        let nu = linalg::normalized(&[-0.5, 0.0, 0.8660254037844386]).unwrap();
        let frame = Frame::for_direction(&nu).unwrap();
        let f = LensNField::new(1.0, 2.0, frame.clone(), vec![0.0, 0.0, 1.0]).unwrap();
        let z = [0.7, 0.4, 0.2];
        let zm = [0.7, -0.4, 0.2];
        let x = frame.from_lens_coords(&z);
        let xm = frame.from_lens_coords(&zm);
        if x[2] > 0.0 && xm[2] > 0.0 {
            assert_relative_eq!(f.profile(&x).0, f.profile(&xm).0, epsilon = 1e-13);
        }
    }

    #[test]
    fn lensn_tail_gradient_orthogonal_to_nu() {
        let nu = linalg::normalized(&[-0.6, 0.0, 0.8]).unwrap();
        let frame = Frame::for_direction(&nu).unwrap();
        let f = LensNField::new(1.0, 2.0, frame.clone(), vec![1.0, 0.0, 0.0]).unwrap();
        // a tail point: below the lower lens surface, inside the cylinder,
        // still in the upper half-space
        let x = frame.from_lens_coords(&[1.5, 0.0, -0.7]);
        assert!(x[2] > 0.0);
        let (_, branch) = f.profile(&x);
        assert_eq!(branch, ProfileBranch::Tail);
        let gw = f.profile_gradient(&x, branch);
        assert_relative_eq!(linalg::dot(&gw, frame.nu()), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn lensn_d2_gradients_match_lens2() {
        // the d=2 instance of the scalar construction spans the same gradient
        // directions {ν ± (H/L)ν⊥} as the vector one
        let nu = [-0.6, 0.8];
        let frame = Frame::for_direction(&nu).unwrap();
        let f = LensNField::new(1.0, 2.0, frame.clone(), vec![1.0, 0.0]).unwrap();
        let f2 = Lens2Field::new(1.0, 2.0, nu, [1.0, 0.0]).unwrap();
        let (g1, g2, _) = f2.gradients();
        // the frame's perpendicular is −ν⊥, so positive frame coordinate
        // means the x·ν⊥ < 0 lens half (gradient G_1)
        for (z1, zd, which) in [(0.5, 0.05, g1), (-0.5, 0.5, g2)] {
            let x = frame.from_lens_coords(&[z1, zd]);
            assert!(x[1] > 0.0, "sample point fell below the hyperplane");
            let (_, branch) = f.profile(&x);
            assert_eq!(branch, ProfileBranch::Lens);
            let gw = f.profile_gradient(&x, branch);
            // rows of the 2D gradient are a_i · dir; compare directions
            let dir = [which.get(0, 0), which.get(0, 1)];
            for i in 0..2 {
                assert_relative_eq!(gw[i], dir[i], epsilon = 1e-12);
            }
        }
    }
}
