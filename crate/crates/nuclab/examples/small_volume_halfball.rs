//! Small-volume regime: half-ball inclusions with the cut-off well field.
//!
//! Below the threshold `μ = |G|^(−2d)` the interfacial term dominates and
//! the energy follows the isoperimetric law `μ^((d−1)/d)`.
//!
//! ```bash
//! cargo run --release --example small_volume_halfball
//! ```

use nuclab::constructions::small_volume_construction;
use nuclab::core::RankOneTensor;

fn main() -> nuclab::Result<()> {
    for d in [2usize, 3] {
        let mut a = vec![0.0; d];
        a[0] = 1.0;
        let mut nu = vec![0.0; d];
        nu[0] = -0.6;
        nu[d - 1] = 0.8;
        let g = RankOneTensor::new(a, nu)?;
        println!("d = {d}, |G| = 1, direction tilted away from the pole");
        println!("{:>12} {:>12} {:>12} {:>12} {:>14}", "mu", "surface", "elastic", "total", "total/mu^(d-1)/d");
        for k in 2..=6 {
            let mu = 10f64.powi(-k);
            let (_, _, e) = small_volume_construction(mu, &g, d)?;
            let iso = e.total / mu.powf((d as f64 - 1.0) / d as f64);
            println!(
                "{:>12.3e} {:>12.5e} {:>12.5e} {:>12.5e} {:>14.6}",
                mu, e.surface, e.elastic_exact, e.total, iso
            );
        }
        println!();
    }
    Ok(())
}
