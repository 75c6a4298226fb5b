//! The rotation/rescaling reduction: physical closed-form energies equal
//! `ε^(2−d)` times their canonical counterparts, to roundoff, for every
//! interfacial strength.
//!
//! ```bash
//! cargo run --release --example rescaling_identity
//! ```

use nuclab::core::{PhysicalProblem, RankOneTensor};
use nuclab::linalg;
use nuclab::scaling_lab::{verify_rescaling, ConstructionKind};

fn main() -> nuclab::Result<()> {
    println!(
        "{:>3} {:>8} {:>10} {:>18} {:>18} {:>10}",
        "d", "eps", "kind", "eps^(2-d)*E_canon", "E_physical", "rel err"
    );
    for d in [2usize, 3] {
        let xi = linalg::normalized(&(0..d).map(|i| 0.5 + i as f64).collect::<Vec<_>>())?;
        let n = linalg::normalized(&(0..d).map(|i| if i == 0 { -0.5 } else { 1.0 }).collect::<Vec<_>>())?;
        for eps in [0.1, 1.0, 10.0] {
            for kind in [ConstructionKind::HalfBall, ConstructionKind::Lens] {
                let volume = match kind {
                    ConstructionKind::HalfBall => 0.2,
                    ConstructionKind::Lens => 1e11,
                };
                let p = PhysicalProblem {
                    d,
                    epsilon: eps,
                    volume,
                    well: RankOneTensor::new(linalg::unit(d, 0), n.clone())?,
                    xi: xi.clone(),
                };
                let c = verify_rescaling(&p, kind)?;
                println!(
                    "{:>3} {:>8} {:>10} {:>18.10e} {:>18.10e} {:>10.2e}",
                    d,
                    eps,
                    format!("{kind:?}"),
                    c.lhs,
                    c.rhs,
                    c.rel_err
                );
            }
        }
    }
    Ok(())
}
