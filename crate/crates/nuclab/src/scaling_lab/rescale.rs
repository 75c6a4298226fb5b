//! Rescaling-identity verification: physical-frame closed-form energies must
//! equal `ε^(2−d)` times their canonical counterparts, exactly.
//!
//! The two routes evaluate the same algebraic formulas at different
//! arguments: the canonical route at `(H, L, a, unit weight)` after the
//! reduction, the physical route at `(H/ε, L/ε, b, ε-weighted perimeter)`
//! with orientation scalars computed from `(n, ξ)` invariants instead of the
//! rotated frame. Agreement to roundoff exercises every exponent in the
//! reduction.

use serde::Serialize;

use crate::constructions::{elastic_bound_2d, elastic_bound_d, optimize_lens_params};
use crate::core::{canonicalize, PhysicalProblem};
use crate::error::{Error, Result};
use crate::geometry::shapes::unit_ball_volume;
use crate::linalg::{self, simpson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstructionKind {
    HalfBall,
    Lens,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RescaleCheck {
    /// `ε^(2−d) ·` canonical closed-form energy.
    pub lhs: f64,
    /// Physical-frame closed-form energy.
    pub rhs: f64,
    pub rel_err: f64,
}

/// Radial factor of the cut-off well field's elastic energy on the
/// transition annulus: elastic = `|a|² · (d·ω_d/2) · ∫ …`.
fn smallvol_elastic_coefficient(d: usize, r0: f64) -> f64 {
    let cut = |r: f64| {
        let t = (2.0 * r0 - r) / r0;
        let z = 3.0 * t * t - 2.0 * t * t * t;
        let zp = (6.0 * t - 6.0 * t * t) * (-1.0 / r0);
        (z, zp)
    };
    let radial = simpson(
        |r| {
            let (z, zp) = cut(r);
            (z * z + (2.0 * z * zp * r + zp * zp * r * r) / d as f64) * r.powi(d as i32 - 1)
        },
        r0,
        2.0 * r0,
        2048,
    );
    0.5 * d as f64 * unit_ball_volume(d) * radial
}

/// Verify `E_ε(V) = ε^(2−d) E_1(ε^d V)` on closed-form construction energies.
pub fn verify_rescaling(p: &PhysicalProblem, kind: ConstructionKind) -> Result<RescaleCheck> {
    let canonical = canonicalize(p)?;
    let d = p.d;
    let cp = &canonical.problem;
    let mu = cp.mu();
    let a_norm = cp.well().frobenius_norm();
    let b_norm = linalg::norm(p.well.amplitude());

    let (canonical_energy, physical_energy) = match kind {
        ConstructionKind::HalfBall => {
            let rc = (2.0 * mu / unit_ball_volume(d)).powf(1.0 / d as f64);
            let e_c = 0.5 * d as f64 * unit_ball_volume(d) * rc.powi(d as i32 - 1)
                + a_norm * a_norm * smallvol_elastic_coefficient(d, rc);
            let rp = (2.0 * p.volume / unit_ball_volume(d)).powf(1.0 / d as f64);
            let e_p = p.epsilon * 0.5 * d as f64 * unit_ball_volume(d) * rp.powi(d as i32 - 1)
                + b_norm * b_norm * smallvol_elastic_coefficient(d, rp);
            (e_c, e_p)
        }
        ConstructionKind::Lens => {
            let params =
                optimize_lens_params(d, mu, cp.well().direction(), cp.well().amplitude())?;
            // orientation scalars from (n, ξ) invariants: |n·ξ| plays the
            // role of ν·e_d after the rotation
            let c_nx = linalg::dot(p.well.direction(), &p.xi);
            let lat = (1.0 - c_nx * c_nx).max(0.0).sqrt();
            let (hc, lc) = (params.h, params.l);
            let (hp, lp) = (hc / p.epsilon, lc / p.epsilon);
            if d == 2 {
                let e_c = elastic_bound_2d(hc, lc, [lat, c_nx.abs()], [a_norm, 0.0])
                    + 2.0 * (hc * hc + lc * lc).sqrt();
                let e_p = elastic_bound_2d(hp, lp, [lat, c_nx.abs()], [b_norm, 0.0])
                    + p.epsilon * 2.0 * (hp * hp + lp * lp).sqrt();
                (e_c, e_p)
            } else {
                let theta = if c_nx.abs() > 0.0 { (1.0 / c_nx.abs()).min(1.0) * lat } else { lat };
                let surf = |h: f64, l: f64| {
                    2f64.powi(d as i32 - 1) * l.powi(d as i32 - 2)
                        * (l * l + (d as f64 - 1.0) * h * h).sqrt()
                        / (1..d).map(|x| x as f64).product::<f64>()
                };
                let e_c = elastic_bound_d(d, hc, lc, theta, a_norm) + surf(hc, lc);
                let e_p =
                    elastic_bound_d(d, hp, lp, theta, b_norm) + p.epsilon * surf(hp, lp);
                (e_c, e_p)
            }
        }
    };

    let lhs = canonical.energy_factor * canonical_energy;
    let rhs = physical_energy;
    let denom = lhs.abs().max(rhs.abs());
    if denom == 0.0 {
        return Err(Error::Internal("degenerate rescaling comparison".into()));
    }
    Ok(RescaleCheck { lhs, rhs, rel_err: (lhs - rhs).abs() / denom })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::RankOneTensor;
    use crate::linalg::unit;

    fn problem(d: usize, eps: f64, volume: f64, tilt: f64) -> PhysicalProblem {
        // a genuinely rotated half-space: ξ away from every axis
        let xi = crate::linalg::normalized(
            &(0..d).map(|i| 0.4 + 0.3 * i as f64).collect::<Vec<_>>(),
        )
        .unwrap();
        let n = crate::linalg::normalized(
            &(0..d)
                .map(|i| if i == 0 { tilt } else if i + 1 == d { 1.0 } else { 0.2 })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        PhysicalProblem {
            d,
            epsilon: eps,
            volume,
            well: RankOneTensor::new(unit(d, 0), n).unwrap(),
            xi,
        }
    }

    #[test]
    fn identity_trivial_at_unit_epsilon() {
        let p = problem(2, 1.0, 0.01, -0.5);
        let c = verify_rescaling(&p, ConstructionKind::HalfBall).unwrap();
        assert!(c.rel_err <= 1e-12);
    }

    #[test]
    fn identity_halfball_d2_d3() {
        for d in [2usize, 3] {
            for eps in [0.1, 10.0] {
                let p = problem(d, eps, 0.5, -0.4);
                let c = verify_rescaling(&p, ConstructionKind::HalfBall).unwrap();
                assert!(c.rel_err <= 1e-10, "d={d} eps={eps}: {c:?}");
            }
        }
    }

    #[test]
    fn identity_lens_d2_d3() {
        for d in [2usize, 3] {
            for eps in [0.1f64, 0.5, 10.0] {
                // volume large enough that the canonical volume stays in the
                // large regime for all tested ε
                let volume = 1e6 / eps.powi(d as i32).min(1.0);
                let p = problem(d, eps, volume, -0.6);
                let c = verify_rescaling(&p, ConstructionKind::Lens).unwrap();
                assert!(c.rel_err <= 1e-10, "d={d} eps={eps}: {c:?}");
            }
        }
    }
}
