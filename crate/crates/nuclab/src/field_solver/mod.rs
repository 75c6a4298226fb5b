//! Numerical minimization of the elastic energy
//! `inf_u ∫ |∇u − χG|² dx` on a truncated half-space grid.
//!
//! Since row `i` of `G = a⊗ν` is `a_i·ν`, the vector problem decouples into
//! identical scalar problems and the minimum equals
//! `|a|² · min_w ∫ |∇w − χν|²`. The scalar field lives at cell centers;
//! gradients are forward differences on interior cell faces with the face
//! target `ν_k·(χ_left + χ_right)/2`, which represents slab-compatible
//! fields exactly (the mechanism behind the `ν = ±e_d` dichotomy). All box
//! faces carry natural (do-nothing) conditions, including the physical
//! hyperplane. The normal equations are symmetric positive semidefinite with
//! the constant fields as null space, handled by mean-zero projection.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::constructions::ConstructionField;
use crate::core::RankOneTensor;
use crate::error::{Error, Result};
use crate::geometry::VoxelMask;

/// Cell-centered grid covering a box inside `{x_d ≥ 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    d: usize,
    h: f64,
    origin: Vec<f64>,
    dims: Vec<usize>,
}

impl Grid {
    pub fn new(h: f64, origin: Vec<f64>, dims: Vec<usize>) -> Result<Self> {
        let d = dims.len();
        if d < 2 {
            return Err(Error::parameter("grid needs dimension >= 2"));
        }
        if origin.len() != d {
            return Err(Error::parameter("grid origin/dims mismatch"));
        }
        if !(h > 0.0) {
            return Err(Error::parameter("grid spacing must be positive"));
        }
        if dims.iter().any(|&n| n < 8) {
            return Err(Error::parameter("grid needs at least 8 cells per axis"));
        }
        if origin[d - 1] < -1e-12 * h {
            return Err(Error::parameter("grid box must lie in the upper half-space"));
        }
        Ok(Grid { d, h, origin, dims })
    }

    /// Grid coinciding with a mask's box.
    pub fn from_mask(mask: &VoxelMask) -> Result<Self> {
        Grid::new(mask.spacing(), mask.origin().to_vec(), mask.dims().to_vec())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cells(&self) -> usize {
        self.dims.iter().product()
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.d];
        for k in (0..self.d - 1).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    pub fn cell_center(&self, flat: usize) -> Vec<f64> {
        let mut rem = flat;
        let strides = self.strides();
        let mut x = vec![0.0; self.d];
        for k in 0..self.d {
            let i = rem / strides[k];
            rem %= strides[k];
            x[k] = self.origin[k] + (i as f64 + 0.5) * self.h;
        }
        x
    }
}

/// Scalar unknowns at the grid cell centers.
#[derive(Debug, Clone)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::validation("scalar field size does not match the grid"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("scalar field contains non-finite values"));
        }
        Ok(ScalarField { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveReport {
    /// `|a|² · Σ_f h^d (D_f w − b_f)²` at the returned iterate.
    pub energy: f64,
    pub iterations: usize,
    /// Relative residual of the normal equations.
    pub residual: f64,
    pub converged: bool,
}

/// Indicator values on the grid cells from a mask occupying (part of) the box.
fn chi_on_grid(mask: &VoxelMask, grid: &Grid) -> Result<Vec<f64>> {
    if mask.dim() != grid.dim() {
        return Err(Error::validation("mask/grid dimension mismatch"));
    }
    let h = grid.spacing();
    if (mask.spacing() - h).abs() > 1e-12 * h {
        return Err(Error::validation("mask and grid spacings differ"));
    }
    let d = grid.dim();
    let mut offset = vec![0usize; d];
    for k in 0..d {
        let t = (mask.origin()[k] - grid.origin()[k]) / h;
        let r = t.round();
        if (t - r).abs() > 1e-9 {
            return Err(Error::validation("mask box is not aligned with the grid"));
        }
        if r < -1e-9 {
            return Err(Error::validation("mask box extends below the grid box"));
        }
        let o = r.max(0.0) as usize;
        if o + mask.dims()[k] > grid.dims()[k] {
            return Err(Error::validation("mask box extends beyond the grid box"));
        }
        offset[k] = o;
    }
    let strides = grid.strides();
    let mut chi = vec![0.0; grid.cells()];
    for flat in 0..mask.len() {
        if mask.get_flat(flat) {
            let idx = mask.multi_index(flat);
            let mut gflat = 0usize;
            for k in 0..d {
                gflat += (idx[k] + offset[k]) * strides[k];
            }
            chi[gflat] = 1.0;
        }
    }
    Ok(chi)
}

/// The discrete face system for one scalar component.
struct FaceSystem<'a> {
    grid: &'a Grid,
    chi: &'a [f64],
    nu: &'a [f64],
    strides: Vec<usize>,
}

impl<'a> FaceSystem<'a> {
    fn new(grid: &'a Grid, chi: &'a [f64], nu: &'a [f64]) -> Self {
        let strides = grid.strides();
        FaceSystem { grid, chi, nu, strides }
    }

    /// Visit every interior face: `f(c1, c2, axis)` with `c2 = c1 + stride`.
    #[inline]
    fn for_each_face<F: FnMut(usize, usize, usize)>(&self, mut f: F) {
        let n = self.grid.cells();
        for k in 0..self.grid.d {
            let stride = self.strides[k];
            let dim_k = self.grid.dims[k];
            for c1 in 0..n {
                let i = (c1 / stride) % dim_k;
                if i + 1 < dim_k {
                    f(c1, c1 + stride, k);
                }
            }
        }
    }

    fn face_weight(&self) -> f64 {
        self.grid.h.powi(self.grid.d as i32)
    }

    fn face_target(&self, c1: usize, c2: usize, axis: usize) -> f64 {
        self.nu[axis] * 0.5 * (self.chi[c1] + self.chi[c2])
    }

    /// `out = M w` with `M = Σ_f ω_f d_f d_fᵀ`, `d_f = (e_c2 − e_c1)/h`.
    fn apply(&self, w: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let s = self.face_weight() / (self.grid.h * self.grid.h);
        self.for_each_face(|c1, c2, _| {
            let diff = s * (w[c2] - w[c1]);
            out[c2] += diff;
            out[c1] -= diff;
        });
    }

    fn rhs(&self) -> Vec<f64> {
        let mut r = vec![0.0; self.grid.cells()];
        let s = self.face_weight() / self.grid.h;
        self.for_each_face(|c1, c2, k| {
            let b = self.face_target(c1, c2, k);
            r[c2] += s * b;
            r[c1] -= s * b;
        });
        r
    }

    fn energy(&self, w: &[f64]) -> f64 {
        let mut e = 0.0;
        let h = self.grid.h;
        let om = self.face_weight();
        self.for_each_face(|c1, c2, k| {
            let d = (w[c2] - w[c1]) / h - self.face_target(c1, c2, k);
            e += om * d * d;
        });
        e
    }
}

fn project_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients on the mean-zero subspace.
fn conjugate_gradient(
    system: &FaceSystem,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, usize, f64, bool) {
    let n = system.grid.cells();
    let mut rhs = system.rhs();
    project_mean(&mut rhs);
    let rhs_norm = dot(&rhs, &rhs).sqrt();
    let mut w = vec![0.0; n];
    if rhs_norm == 0.0 {
        return (w, 0, 0.0, true);
    }
    let mut r = rhs.clone();
    let mut p = r.clone();
    let mut mp = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    let mut converged = false;
    for it in 0..max_iter {
        iterations = it + 1;
        system.apply(&p, &mut mp);
        let pmp = dot(&p, &mp);
        if pmp <= 0.0 {
            break;
        }
        let alpha = rr / pmp;
        for i in 0..n {
            w[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        project_mean(&mut w);
        project_mean(&mut r);
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= tol * rhs_norm {
            rr = rr_new;
            converged = true;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    (w, iterations, rr.sqrt() / rhs_norm, converged)
}

/// Minimize the elastic energy for the mask's indicator by conjugate
/// gradients; returns the scalar minimizer along with the report.
pub fn minimize_elastic_field(
    mask: &VoxelMask,
    g: &RankOneTensor,
    grid: &Grid,
    tol: f64,
    max_iter: usize,
) -> Result<(ScalarField, SolveReport)> {
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::parameter(format!(
            "solver tolerance must lie in [1e-12, 1e-4], got {tol}"
        )));
    }
    if g.dim() != grid.dim() {
        return Err(Error::validation("well/grid dimension mismatch"));
    }
    let chi = chi_on_grid(mask, grid)?;
    let system = FaceSystem::new(grid, &chi, g.direction());
    let (w, iterations, residual, converged) = conjugate_gradient(&system, tol, max_iter);
    let a2 = g.frobenius_norm().powi(2);
    let energy = a2 * system.energy(&w);
    let field = ScalarField::new(grid, w)?;
    Ok((field, SolveReport { energy, iterations, residual, converged }))
}

/// Minimize the elastic energy; report only. Non-convergence is reported in
/// the flag (with the best energy found), never as an error.
pub fn minimize_elastic(
    mask: &VoxelMask,
    g: &RankOneTensor,
    grid: &Grid,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    minimize_elastic_field(mask, g, grid, tol, max_iter).map(|(_, r)| r)
}

/// Exact discrete minimum by a direct factorization of the bordered system
/// (the mean-zero constraint enters through a Lagrange multiplier row).
/// Intended for small grids; refuses more than `24^d` cells.
pub fn dense_oracle(mask: &VoxelMask, g: &RankOneTensor, grid: &Grid) -> Result<f64> {
    let n = grid.cells();
    let cap = 24usize.pow(grid.dim() as u32);
    if n > cap {
        return Err(Error::Capability(format!(
            "dense oracle supports at most {cap} cells in dimension {}, got {n}",
            grid.dim()
        )));
    }
    let chi = chi_on_grid(mask, grid)?;
    let system = FaceSystem::new(grid, &chi, g.direction());
    let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
    let s = system.face_weight() / (grid.h * grid.h);
    system.for_each_face(|c1, c2, _| {
        m[(c1, c1)] += s;
        m[(c2, c2)] += s;
        m[(c1, c2)] -= s;
        m[(c2, c1)] -= s;
    });
    for i in 0..n {
        m[(i, n)] = 1.0;
        m[(n, i)] = 1.0;
    }
    let rhs_vec = system.rhs();
    let mut rhs = DVector::<f64>::zeros(n + 1);
    for i in 0..n {
        rhs[i] = rhs_vec[i];
    }
    let solution = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Internal("bordered system is singular".into()))?;
    let w: Vec<f64> = solution.as_slice()[..n].to_vec();
    let a2 = g.frobenius_norm().powi(2);
    Ok(a2 * system.energy(&w))
}

/// Discrete energy of a closed-form displacement sampled at the cell centers,
/// with the same face functional the solver minimizes. Always at least the
/// discrete minimum.
pub fn evaluate_field_on_grid(
    field: &ConstructionField,
    mask: &VoxelMask,
    g: &RankOneTensor,
    grid: &Grid,
) -> Result<f64> {
    if field.dim() != grid.dim() || g.dim() != grid.dim() {
        return Err(Error::validation("dimension mismatch"));
    }
    let chi = chi_on_grid(mask, grid)?;
    let d = grid.dim();
    let n = grid.cells();
    let mut u = vec![0.0; n * d];
    for flat in 0..n {
        let x = grid.cell_center(flat);
        let v = field.displacement(&x);
        u[flat * d..(flat + 1) * d].copy_from_slice(&v);
    }
    let system = FaceSystem::new(grid, &chi, g.direction());
    let h = grid.spacing();
    let om = system.face_weight();
    let a = g.amplitude();
    let mut e = 0.0;
    system.for_each_face(|c1, c2, k| {
        let bf = system.face_target(c1, c2, k);
        for i in 0..d {
            let diff = (u[c2 * d + i] - u[c1 * d + i]) / h - bf * a[i];
            e += om * diff * diff;
        }
    });
    Ok(e)
}

/// Discrete relative perimeter of a mask: interior occupied/unoccupied face
/// pairs (plus occupied box-top faces) weighted `h^(d−1)`; the hyperplane
/// trace and lateral box faces are free.
pub fn grid_perimeter(mask: &VoxelMask) -> f64 {
    mask.interface_area()
}
