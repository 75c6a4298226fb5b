//! Tilted cage systems on the unit half-disc.
//!
//! Three adjacent parallelograms `Q_1, Q_2, Q_3` of height `σ` sit on the
//! chord of the half-disc `B_1⁺((0, z_2))`, with lateral facets tilted along
//! `ν⊥`. With `θ = γ = ν_1/50`, `z_2 = θ` (the worst admissible center
//! height) and `σ ∈ [2γ, 4γ]`, the chain
//! `B_γ⁺ ⊂ Q_2 ⊂ Q = ∪ Q_i ⊂ B_1⁺` holds for every `ν_1 ∈ (0, 1]`; the two
//! non-trivial inclusions come down to one scalar inequality each, which this
//! module evaluates analytically and confirms by rejection sampling.

use crate::error::{Error, Result};
use crate::geometry::qmc::Halton;

/// Certificate data for one tilted-cage system.
#[derive(Debug, Clone)]
pub struct CageSystem {
    nu1: f64,
    /// `θ = γ = ν_1/50`
    gamma: f64,
    theta: f64,
    sigma: f64,
    /// chord half points: `l = |x_5 − x_0| = 2√(1−z_2²)` with `z_2 = θ`
    l: f64,
    /// subdivision points on the axis, `x_0 … x_5`
    xs: [[f64; 2]; 6],
    /// `y_(i,σ)` for `i = 1..4` on the line `{x_2 = σ}`
    ys: [[f64; 2]; 4],
    /// parallelograms `Q_1, Q_2, Q_3` as vertex quadruples (ccw)
    quads: [[[f64; 2]; 4]; 3],
}

impl CageSystem {
    pub fn nu1(&self) -> f64 {
        self.nu1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn chord_length(&self) -> f64 {
        self.l
    }

    pub fn points(&self) -> &[[f64; 2]; 6] {
        &self.xs
    }

    pub fn upper_points(&self) -> &[[f64; 2]; 4] {
        &self.ys
    }

    pub fn quads(&self) -> &[[[f64; 2]; 4]; 3] {
        &self.quads
    }

    /// Center of the reference half-ball, `(0, z_2)` with `z_2 = θ`.
    pub fn ball_center(&self) -> [f64; 2] {
        [0.0, self.theta]
    }
}

/// Build the cage system for `ν_1 ∈ (0, 1]` and `σ ∈ [2γ, 4γ]`.
pub fn build_cages(nu1: f64, sigma: f64) -> Result<CageSystem> {
    if !(nu1 > 0.0 && nu1 <= 1.0) {
        return Err(Error::parameter(format!("nu1 must lie in (0, 1], got {nu1}")));
    }
    let gamma = nu1 / 50.0;
    if !(sigma >= 2.0 * gamma && sigma <= 4.0 * gamma) {
        return Err(Error::parameter(format!(
            "sigma must lie in [2γ, 4γ] = [{}, {}], got {sigma}",
            2.0 * gamma,
            4.0 * gamma
        )));
    }
    build_with_gamma(nu1, sigma, gamma)
}

/// Internal constructor with a free `γ`; used by tests to produce
/// deliberately broken systems.
pub(crate) fn build_with_gamma(nu1: f64, sigma: f64, gamma: f64) -> Result<CageSystem> {
    let theta = gamma;
    let z2 = theta;
    let l = 2.0 * (1.0 - z2 * z2).sqrt();
    // convention ν_2 ≤ 0 < ν_1, so ν⊥ = (−ν_2, ν_1) leans right going up
    let slope = (1.0 - nu1 * nu1).sqrt() / nu1; // horizontal drift per unit height
    let sixth = l / 6.0;
    let fracs = [0.0, 1.0, 2.0, 4.0, 5.0, 6.0];
    let mut xs = [[0.0; 2]; 6];
    for (i, f) in fracs.iter().enumerate() {
        xs[i] = [-l / 2.0 + f * sixth, 0.0];
    }
    let mut ys = [[0.0; 2]; 4];
    for i in 0..4 {
        ys[i] = [xs[i + 1][0] + slope * sigma, sigma];
    }
    let quads = [
        [xs[1], xs[2], ys[1], ys[0]],
        [xs[2], xs[3], ys[2], ys[1]],
        [xs[3], xs[4], ys[3], ys[2]],
    ];
    Ok(CageSystem { nu1, gamma, theta, sigma, l, xs, ys, quads })
}

/// Outcome of the two inclusion checks.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CageCertificate {
    pub holds: bool,
    /// Slack of `γ < l/6 − (√(1−ν_1²)/ν_1)σ`  (inner inclusion `B_γ⁺ ⊂ Q_2`).
    pub inner_margin: f64,
    /// Slack of `|z_(4,σ)| < √(1−σ²)`  (outer inclusion `Q ⊂ B_1⁺`).
    pub outer_margin: f64,
    /// Sampled points of `B_γ⁺` that escaped `Q_2` (should be 0).
    pub inner_violations: usize,
    /// Sampled points of `Q` that escaped `B_1⁺` (should be 0).
    pub outer_violations: usize,
}

const SAMPLES_PER_CHECK: usize = 10_000;

fn point_in_quad(q: &[[f64; 2]; 4], p: [f64; 2]) -> bool {
    // parallelogram spanned by (q1−q0) and (q3−q0)
    let u = [q[1][0] - q[0][0], q[1][1] - q[0][1]];
    let v = [q[3][0] - q[0][0], q[3][1] - q[0][1]];
    let w = [p[0] - q[0][0], p[1] - q[0][1]];
    let det = u[0] * v[1] - u[1] * v[0];
    if det.abs() < 1e-300 {
        return false;
    }
    let s = (w[0] * v[1] - w[1] * v[0]) / det;
    let t = (u[0] * w[1] - u[1] * w[0]) / det;
    (-1e-12..=1.0 + 1e-12).contains(&s) && (-1e-12..=1.0 + 1e-12).contains(&t)
}

/// Evaluate both inclusion inequalities analytically and confirm them by
/// rejection sampling (10⁴ points each).
pub fn verify_cage_inclusions(cage: &CageSystem) -> CageCertificate {
    let slope = (1.0 - cage.nu1 * cage.nu1).sqrt() / cage.nu1;
    let inner_margin = cage.l / 6.0 - slope * cage.sigma - cage.gamma;
    let z4 = cage.l / 3.0 + slope * cage.sigma;
    let outer_margin = (1.0 - cage.sigma * cage.sigma).sqrt() - z4;

    let center = cage.ball_center();
    let mut inner_violations = 0usize;
    let mut halton = Halton::new(2);
    let mut u = [0.0; 2];
    let mut accepted = 0usize;
    while accepted < SAMPLES_PER_CHECK {
        halton.next_point(&mut u);
        let p = [
            center[0] + (2.0 * u[0] - 1.0) * cage.gamma,
            center[1] + (2.0 * u[1] - 1.0) * cage.gamma,
        ];
        let dx = p[0] - center[0];
        let dy = p[1] - center[1];
        if dx * dx + dy * dy >= cage.gamma * cage.gamma || p[1] <= 0.0 {
            continue;
        }
        accepted += 1;
        if !point_in_quad(&cage.quads[1], p) {
            inner_violations += 1;
        }
    }

    let mut outer_violations = 0usize;
    let mut halton = Halton::new(3);
    let mut v = [0.0; 3];
    for _ in 0..SAMPLES_PER_CHECK {
        halton.next_point(&mut v);
        let q = &cage.quads[(v[2] * 3.0) as usize % 3];
        let e1 = [q[1][0] - q[0][0], q[1][1] - q[0][1]];
        let e2 = [q[3][0] - q[0][0], q[3][1] - q[0][1]];
        let p = [
            q[0][0] + v[0] * e1[0] + v[1] * e2[0],
            q[0][1] + v[0] * e1[1] + v[1] * e2[1],
        ];
        let dx = p[0] - center[0];
        let dy = p[1] - center[1];
        let in_ball = dx * dx + dy * dy < 1.0 && p[1] >= 0.0;
        if !in_ball {
            outer_violations += 1;
        }
    }

    CageCertificate {
        holds: inner_margin > 0.0
            && outer_margin > 0.0
            && inner_violations == 0
            && outer_violations == 0,
        inner_margin,
        outer_margin,
        inner_violations,
        outer_violations,
    }
}
