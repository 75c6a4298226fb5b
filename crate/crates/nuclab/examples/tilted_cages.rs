//! Tilted-cage certificates: the parallelogram chain
//! `B_γ⁺ ⊂ Q_2 ⊂ Q ⊂ B_1⁺` verified analytically and by rejection sampling
//! for a grid of lateral components ν_1.
//!
//! ```bash
//! cargo run --release --example tilted_cages
//! ```

use nuclab::geometry::{build_cages, verify_cage_inclusions};

fn main() -> nuclab::Result<()> {
    println!(
        "{:>6} {:>8} {:>14} {:>14} {:>8}",
        "nu1", "sigma", "inner margin", "outer margin", "holds"
    );
    for i in [1usize, 5, 10, 25, 50] {
        let nu1 = i as f64 / 50.0;
        let gamma = nu1 / 50.0;
        for k in [2.0, 3.0, 4.0] {
            let cage = build_cages(nu1, k * gamma)?;
            let cert = verify_cage_inclusions(&cage);
            println!(
                "{:>6.2} {:>8.4} {:>14.6} {:>14.6} {:>8}",
                nu1,
                k * gamma,
                cert.inner_margin,
                cert.outer_margin,
                cert.holds
            );
        }
    }
    Ok(())
}
