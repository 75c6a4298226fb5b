//! Problem definitions: rank-one wells, half-space problems, the reduction to
//! canonical variables, regime classification, and the predicted scaling
//! exponents with their orientation-dependent dichotomy.
//!
//! A physical problem lives on the half-space `Π_{ξ,+} = {x·ξ > 0}` with well
//! matrix `F = b⊗n`, interfacial strength `ε` and inclusion volume `V`.
//! Rotating `ξ` onto `e_d` and rescaling lengths by `ε` reduces everything to
//! the canonical problem on `{x_d > 0}` with well `G = a⊗ν`, volume `μ`, and
//! unit interfacial weight; canonical energies convert back to physical ones
//! through the factor `ε^(2−d)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, AxisRotation};

/// Tolerance below which a direction counts as `±e_d` (the dichotomy is exact
/// in the model; numerics needs a cutoff).
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Tolerance for unit-vector validation.
pub const UNIT_TOL: f64 = 1e-12;

/// Rank-one well matrix `G = a ⊗ ν` with amplitude `a ≠ 0` and unit
/// direction `ν`. Its Frobenius norm equals `|a|`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTensor {
    a: Vec<f64>,
    nu: Vec<f64>,
}

impl RankOneTensor {
    pub fn new(a: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        if a.len() != nu.len() {
            return Err(Error::validation(format!(
                "amplitude and direction must share a dimension, got {} and {}",
                a.len(),
                nu.len()
            )));
        }
        if a.len() < 2 {
            return Err(Error::validation("rank-one tensor needs dimension >= 2"));
        }
        if linalg::norm(&a) == 0.0 {
            return Err(Error::validation("amplitude a must be nonzero"));
        }
        if (linalg::norm(&nu) - 1.0).abs() > UNIT_TOL {
            return Err(Error::validation(format!(
                "direction must be a unit vector, |nu| = {:.17}",
                linalg::norm(&nu)
            )));
        }
        Ok(RankOneTensor { a, nu })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn amplitude(&self) -> &[f64] {
        &self.a
    }

    pub fn direction(&self) -> &[f64] {
        &self.nu
    }

    /// `|G| = |a|` since `|ν| = 1`.
    pub fn frobenius_norm(&self) -> f64 {
        linalg::norm(&self.a)
    }

    pub fn matrix(&self) -> linalg::Mat {
        linalg::Mat::outer(&self.a, &self.nu)
    }

    /// `G x = (ν·x) a`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        linalg::scaled(&self.a, linalg::dot(&self.nu, x))
    }

    /// Distance of the direction to `{±e_d}`.
    pub fn dist_to_pole(&self) -> f64 {
        linalg::dist_to_pole(&self.nu)
    }

    /// True when the direction is `±e_d` within [`DEGENERACY_TOL`].
    pub fn is_degenerate(&self) -> bool {
        self.dist_to_pole() <= DEGENERACY_TOL
    }
}

/// Inclusion problem in physical variables: half-space normal `ξ`, well
/// `F = b⊗n`, interfacial strength `ε`, prescribed volume `V`.
#[derive(Debug, Clone)]
pub struct PhysicalProblem {
    pub d: usize,
    pub epsilon: f64,
    pub volume: f64,
    /// `F = b ⊗ n`
    pub well: RankOneTensor,
    /// Outward unit normal of the constraining hyperplane.
    pub xi: Vec<f64>,
}

/// Canonical problem on `{x_d > 0}`: well `G = a⊗ν`, volume `μ`, unit
/// interfacial weight. Only obtainable through [`canonicalize`].
#[derive(Debug, Clone)]
pub struct CanonicalProblem {
    d: usize,
    g: RankOneTensor,
    mu: f64,
}

impl CanonicalProblem {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn well(&self) -> &RankOneTensor {
        &self.g
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Canonical problem straight from canonical data; equivalent to
    /// canonicalizing a physical problem with `ε = 1`, `ξ = e_d`.
    pub fn from_canonical(a: Vec<f64>, nu: Vec<f64>, mu: f64) -> Result<Self> {
        let d = a.len();
        let p = PhysicalProblem {
            d,
            epsilon: 1.0,
            volume: mu,
            well: RankOneTensor::new(a, nu)?,
            xi: linalg::unit(d, d - 1),
        };
        Ok(canonicalize(&p)?.problem)
    }
}

/// Result of the rotation/rescaling reduction.
#[derive(Debug, Clone)]
pub struct Canonicalization {
    pub problem: CanonicalProblem,
    /// Physical energy = `energy_factor` × canonical energy, `ε^(2−d)`.
    pub energy_factor: f64,
}

/// Reduce a physical problem to the canonical half-space `{x_d > 0}`:
/// `a = ε⁻¹ b`, `ν = Q_ξᵗ n`, `μ = ε^d V`, where `Q_ξ` is the minimal
/// rotation with `Q_ξ e_d = ξ`.
pub fn canonicalize(p: &PhysicalProblem) -> Result<Canonicalization> {
    if p.d != p.well.dim() || p.d != p.xi.len() {
        return Err(Error::validation("dimension mismatch in physical problem"));
    }
    if p.d < 2 {
        return Err(Error::validation("dimension must be >= 2"));
    }
    if !(p.epsilon > 0.0) {
        return Err(Error::validation("epsilon must be positive"));
    }
    if !(p.volume > 0.0) {
        return Err(Error::validation("volume must be positive"));
    }
    let q = AxisRotation::to_target(&p.xi)?;
    let nu = q.apply_transpose(p.well.direction());
    // apply_transpose of an orthogonal map preserves norms, but renormalize
    // against accumulated roundoff before the unit check.
    let nu = linalg::normalized(&nu)?;
    let a = linalg::scaled(p.well.amplitude(), 1.0 / p.epsilon);
    let g = RankOneTensor::new(a, nu)?;
    let mu = p.epsilon.powi(p.d as i32) * p.volume;
    let energy_factor = p.epsilon.powi(2 - p.d as i32);
    Ok(Canonicalization {
        problem: CanonicalProblem { d: p.d, g, mu },
        energy_factor,
    })
}

/// Volume regime relative to the threshold `μ = |G|^(−2d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `μ ≤ |G|^(−2d)`: interfacial energy dominates (isoperimetric scaling).
    SmallVolume,
    /// `μ ≥ |G|^(−2d)`: elastic and interfacial terms compete.
    LargeVolume,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegimeClassification {
    pub regime: Regime,
    pub threshold: f64,
}

/// Classify a canonical problem by comparing `μ` with `|G|^(−2d)`.
/// The boundary case `μ = |G|^(−2d)` reports `LargeVolume`; both scaling
/// branches agree there.
pub fn classify_regime(cp: &CanonicalProblem) -> RegimeClassification {
    let threshold = cp.well().frobenius_norm().powi(-2 * cp.dim() as i32);
    let regime = if cp.mu() < threshold { Regime::SmallVolume } else { Regime::LargeVolume };
    RegimeClassification { regime, threshold }
}

/// Exact rational exponent `numer/denom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Exponent {
    pub numer: i64,
    pub denom: i64,
}

impl Exponent {
    pub fn value(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

/// Predicted exponent of `μ` in the minimal energy:
///
/// * small volume: `(d−1)/d` for every direction;
/// * large volume, `ν ≠ ±e_d`: `(2d−2)/(2d−1)`;
/// * large volume, `ν = ±e_d`: `(3d−3)/(3d−1)` — the boundary acts as a
///   mirror twin and lowers the barrier.
pub fn predicted_exponent(d: usize, nu: &[f64], regime: Regime) -> Exponent {
    let dd = d as i64;
    let (numer, denom) = match regime {
        Regime::SmallVolume => (dd - 1, dd),
        Regime::LargeVolume => {
            if linalg::dist_to_pole(nu) <= DEGENERACY_TOL {
                (3 * dd - 3, 3 * dd - 1)
            } else {
                (2 * dd - 2, 2 * dd - 1)
            }
        }
    };
    let g = gcd(numer, denom);
    Exponent { numer: numer / g, denom: denom / g }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.max(1) } else { gcd(b, a % b) }
}

/// Reported power laws of `dist(ν, {±e_d})` in the lower-bound constants:
/// the local-estimate constant scales like `dist^c_exponent` and the global
/// one like `dist^c1_exponent`. Reporting metadata only — no absolute
/// prefactors are claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowerBoundConstants {
    pub c_exponent: u32,
    pub c1_exponent: u32,
}

pub fn lower_bound_constants(d: usize, nu: &[f64]) -> Result<LowerBoundConstants> {
    if linalg::dist_to_pole(nu) <= DEGENERACY_TOL {
        return Err(Error::DegenerateDirection(
            "lower-bound constants are only defined for nu != ±e_d".into(),
        ));
    }
    let c_exponent = if d == 2 { 1 } else { 3 };
    let c1_exponent = if d == 2 { 6 } else { 2 * d as u32 + 6 };
    Ok(LowerBoundConstants { c_exponent, c1_exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use approx::assert_relative_eq;

    fn e(d: usize, i: usize) -> Vec<f64> {
        unit(d, i)
    }

    #[test]
    fn canonicalize_identity_case() {
        // ε = 1, ξ = e_2: nothing moves.
        let p = PhysicalProblem {
            d: 2,
            epsilon: 1.0,
            volume: 5.0,
            well: RankOneTensor::new(e(2, 0), e(2, 0)).unwrap(),
            xi: e(2, 1),
        };
        let c = canonicalize(&p).unwrap();
        assert_eq!(c.problem.mu(), 5.0);
        assert_eq!(c.energy_factor, 1.0);
        assert_relative_eq!(c.problem.well().amplitude()[0], 1.0);
        assert_relative_eq!(c.problem.well().direction()[0], 1.0);
    }

    #[test]
    fn canonicalize_rescales_volume_and_amplitude() {
        // ε = 0.5, V = 8 → μ = 0.5²·8 = 2, a = 2 e_1; factor ε^0 = 1 for d = 2.
        let p = PhysicalProblem {
            d: 2,
            epsilon: 0.5,
            volume: 8.0,
            well: RankOneTensor::new(e(2, 0), e(2, 0)).unwrap(),
            xi: e(2, 1),
        };
        let c = canonicalize(&p).unwrap();
        assert_relative_eq!(c.problem.mu(), 2.0, epsilon = 1e-14);
        assert_relative_eq!(c.problem.well().amplitude()[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(c.energy_factor, 1.0);
    }

    #[test]
    fn canonicalize_rotates_normal_to_axis() {
        // ξ = e_1 and n = e_1: the canonical direction is e_d (degenerate).
        let p = PhysicalProblem {
            d: 2,
            epsilon: 1.0,
            volume: 1.0,
            well: RankOneTensor::new(e(2, 0), e(2, 0)).unwrap(),
            xi: e(2, 0),
        };
        let c = canonicalize(&p).unwrap();
        let nu = c.problem.well().direction();
        assert_relative_eq!(nu[1], 1.0, epsilon = 1e-12);
        assert!(c.problem.well().is_degenerate());
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        let p = PhysicalProblem {
            d: 2,
            epsilon: 1.0,
            volume: 1.0,
            well: RankOneTensor::new(e(2, 0), e(2, 0)).unwrap(),
            xi: vec![0.5, 0.5],
        };
        assert!(canonicalize(&p).is_err());
    }

    #[test]
    fn regime_threshold_and_boundary_convention() {
        let cp = CanonicalProblem::from_canonical(e(2, 0), e(2, 0), 1.0).unwrap();
        let r = classify_regime(&cp);
        assert_eq!(r.threshold, 1.0);
        assert_eq!(r.regime, Regime::LargeVolume); // boundary case

        let cp = CanonicalProblem::from_canonical(vec![2.0, 0.0], e(2, 0), 0.001).unwrap();
        let r = classify_regime(&cp);
        assert_relative_eq!(r.threshold, 0.0625);
        assert_eq!(r.regime, Regime::SmallVolume);

        let cp = CanonicalProblem::from_canonical(e(3, 0), e(3, 0), 1e6).unwrap();
        assert_eq!(classify_regime(&cp).regime, Regime::LargeVolume);
    }

    #[test]
    fn regime_invariant_under_simultaneous_rescaling() {
        // (|G|, μ) → (s|G|, s^(−2d) μ) leaves the classification unchanged.
        for s in [0.3, 1.7, 5.0] {
            for mu in [0.2, 1.0, 7.0] {
                let base = CanonicalProblem::from_canonical(e(2, 0), e(2, 0), mu).unwrap();
                let scaled = CanonicalProblem::from_canonical(
                    vec![s, 0.0],
                    e(2, 0),
                    s.powi(-4) * mu,
                )
                .unwrap();
                assert_eq!(classify_regime(&base).regime, classify_regime(&scaled).regime);
            }
        }
    }

    #[test]
    fn predicted_exponents_match_the_dichotomy() {
        let generic2 = vec![1.0, 0.0];
        let normal2 = vec![0.0, 1.0];
        assert_eq!(
            predicted_exponent(2, &generic2, Regime::LargeVolume),
            Exponent { numer: 2, denom: 3 }
        );
        assert_eq!(
            predicted_exponent(2, &normal2, Regime::LargeVolume),
            Exponent { numer: 3, denom: 5 }
        );
        let generic3 = crate::linalg::normalized(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            predicted_exponent(3, &generic3, Regime::SmallVolume),
            Exponent { numer: 2, denom: 3 }
        );
        assert_eq!(
            predicted_exponent(3, &generic3, Regime::LargeVolume),
            Exponent { numer: 4, denom: 5 }
        );
        assert_eq!(
            predicted_exponent(3, &[0.0, 0.0, 1.0], Regime::LargeVolume),
            Exponent { numer: 3, denom: 4 }
        );
        assert_relative_eq!(
            predicted_exponent(3, &[0.0, 0.0, 1.0], Regime::LargeVolume).value(),
            0.75
        );
    }

    #[test]
    fn predicted_exponent_invariances() {
        // invariance under a → λa is structural (the exponent never sees a);
        // check invariance under rotations of ν preserving ±e_d membership.
        let nu = crate::linalg::normalized(&[0.6, 0.0, 0.8]).unwrap();
        let rotated = crate::linalg::normalized(&[0.0, 0.6, 0.8]).unwrap();
        assert_eq!(
            predicted_exponent(3, &nu, Regime::LargeVolume),
            predicted_exponent(3, &rotated, Regime::LargeVolume)
        );
    }

    #[test]
    fn lower_bound_exponents() {
        let nu2 = vec![1.0, 0.0];
        let c = lower_bound_constants(2, &nu2).unwrap();
        assert_eq!((c.c_exponent, c.c1_exponent), (1, 6));
        let nu3 = vec![1.0, 0.0, 0.0];
        let c = lower_bound_constants(3, &nu3).unwrap();
        assert_eq!((c.c_exponent, c.c1_exponent), (3, 12));
        let nu5 = crate::linalg::unit(5, 0);
        let c = lower_bound_constants(5, &nu5).unwrap();
        assert_eq!((c.c_exponent, c.c1_exponent), (3, 16));
        assert!(lower_bound_constants(2, &[0.0, 1.0]).is_err());
    }
}
