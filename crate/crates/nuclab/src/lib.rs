//! Numerical laboratory for nucleation energy barriers of a two-well elastic
//! inclusion confined to a half-space.
//!
//! The energy of a pair `(u, χ)` — a displacement `u : Π⁺ → ℝ^d` and an
//! inclusion indicator `χ` of prescribed volume — is
//!
//! ```text
//! E(u, χ) = ∫ |∇u − χ a⊗ν|² dx  +  |Dχ|(Π⁺),
//! ```
//!
//! the elastic misfit against a rank-one well plus the relative perimeter of
//! the inclusion inside the open half-space. The crate provides
//!
//! * [`core`] — problem data, the reduction to canonical variables on
//!   `{x_d > 0}`, regime classification and the predicted scaling exponents;
//! * [`geometry`] — half-balls, thin lens-shaped inclusions in 2D and in
//!   general dimension, tilted-cage systems with inclusion certificates, and
//!   voxel masks with a portable binary format;
//! * [`constructions`] — explicit piecewise-affine test pairs realizing the
//!   upper scaling bounds, exact and sampled energy evaluation, lens parameter
//!   optimization, and the even/odd reflection across the boundary hyperplane;
//! * [`field_solver`] — conjugate-gradient minimization of the elastic energy
//!   on truncated grids, with a dense direct-solve oracle;
//! * [`scaling_lab`] — volume sweeps, log-log exponent fits, the
//!   orientation-dichotomy scan, the localized lower-bound probe and the
//!   rescaling-identity verifier;
//! * [`cli`] — the `nuclab` command-line entry point with JSON configs and
//!   CSV/JSON/SVG outputs.
//!
//! Every operation is deterministic: sampling uses low-discrepancy sequences
//! or counter-based seeded generators, so identical inputs give identical
//! outputs bit for bit.

pub mod cli;
pub mod constructions;
pub mod core;
pub mod error;
pub mod field_solver;
pub mod geometry;
pub mod linalg;
pub mod scaling_lab;

pub use error::{Error, Result};
