//! Small dense vector and matrix helpers for low-dimensional geometry.
//!
//! Dimensions here are tiny (`d` is 2 or 3 in practice, occasionally a bit
//! larger), so everything works on plain `&[f64]` slices and a small
//! row-major matrix type.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `y += alpha * x`
pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// The i-th canonical basis vector of ℝ^d.
pub fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; d];
    e[i] = 1.0;
    e
}

pub fn normalized(a: &[f64]) -> Result<Vec<f64>> {
    let n = norm(a);
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::validation("cannot normalize a zero vector"));
    }
    Ok(scaled(a, 1.0 / n))
}

/// Distance of a unit vector to the two poles `{±e_d}` of the sphere,
/// where `e_d` is the last coordinate axis.
pub fn dist_to_pole(nu: &[f64]) -> f64 {
    let d = nu.len();
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (i, x) in nu.iter().enumerate() {
        let t = if i + 1 == d { 1.0 } else { 0.0 };
        plus += (x - t) * (x - t);
        minus += (x + t) * (x + t);
    }
    plus.sqrt().min(minus.sqrt())
}

/// Dense row-major `d × d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub d: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zero(d: usize) -> Self {
        Mat { d, data: vec![0.0; d * d] }
    }

    /// Rank-one product `a ⊗ b`, entries `a_i b_j`.
    pub fn outer(a: &[f64], b: &[f64]) -> Self {
        let d = a.len();
        debug_assert_eq!(d, b.len());
        let mut m = Mat::zero(d);
        for i in 0..d {
            for j in 0..d {
                m.data[i * d + j] = a[i] * b[j];
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.d + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.d + j] = v;
    }

    pub fn minus(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.d, other.d);
        Mat {
            d: self.d,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut y = vec![0.0; d];
        for i in 0..d {
            y[i] = dot(&self.data[i * d..(i + 1) * d], x);
        }
        y
    }

    /// Sum of squared entries of `self − χ·other`; the pointwise elastic
    /// misfit density `|A − χ G|²`.
    pub fn misfit(&self, chi: f64, other: &Mat) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, g)| (a - chi * g) * (a - chi * g))
            .sum()
    }
}

/// Rotation of ℝ^d taking the last axis `e_d` to a prescribed unit target.
///
/// The rotation acts in the plane spanned by `e_d` and the target and is the
/// identity on the orthogonal complement, so it is uniquely determined (and a
/// pure function of the target). The antipodal case `target = −e_d` uses the
/// fixed half-turn in the `(e_1, e_d)` plane.
#[derive(Debug, Clone)]
pub struct AxisRotation {
    d: usize,
    kind: RotationKind,
}

#[derive(Debug, Clone)]
enum RotationKind {
    Identity,
    HalfTurn,
    Planar {
        target: Vec<f64>,
        /// e_d + target
        sum: Vec<f64>,
        /// 1 + target·e_d
        denom: f64,
    },
}

impl AxisRotation {
    /// Rotation with `Q e_d = xi`. Fails if `xi` is not a unit vector
    /// (tolerance 1e-12).
    pub fn to_target(xi: &[f64]) -> Result<Self> {
        let d = xi.len();
        if d < 2 {
            return Err(Error::validation("rotation needs dimension >= 2"));
        }
        if (norm(xi) - 1.0).abs() > 1e-12 {
            return Err(Error::validation(format!(
                "rotation target must be a unit vector, |xi| = {}",
                norm(xi)
            )));
        }
        let c = xi[d - 1];
        let kind = if 1.0 - c <= 1e-12 {
            RotationKind::Identity
        } else if 1.0 + c <= 1e-12 {
            RotationKind::HalfTurn
        } else {
            let mut sum = xi.to_vec();
            sum[d - 1] += 1.0;
            RotationKind::Planar { target: xi.to_vec(), sum, denom: 1.0 + c }
        };
        Ok(AxisRotation { d, kind })
    }

    /// `Q x` (maps `e_d` to the target).
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.d);
        match &self.kind {
            RotationKind::Identity => x.to_vec(),
            RotationKind::HalfTurn => {
                let mut y = x.to_vec();
                y[0] = -y[0];
                y[self.d - 1] = -y[self.d - 1];
                y
            }
            RotationKind::Planar { target, sum, denom } => {
                let mut y = x.to_vec();
                let s = dot(sum, x) / denom;
                axpy(&mut y, -s, sum);
                axpy(&mut y, 2.0 * x[self.d - 1], target);
                y
            }
        }
    }

    /// `Qᵗ x` (maps the target back to `e_d`).
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            RotationKind::Identity => x.to_vec(),
            RotationKind::HalfTurn => self.apply(x),
            RotationKind::Planar { target, sum, denom } => {
                let d = self.d;
                let mut y = x.to_vec();
                let s = dot(sum, x) / denom;
                axpy(&mut y, -s, sum);
                let mut ed = vec![0.0; d];
                ed[d - 1] = 2.0 * dot(target, x);
                axpy(&mut y, 1.0, &ed);
                y
            }
        }
    }
}

/// Composite Simpson quadrature on `[a, b]` with `2n` panels. Accurate to
/// O(h⁴) for smooth integrands; used where a closed form is not worth the
/// algebra.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let m = 2 * n.max(1);
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
