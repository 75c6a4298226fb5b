//! Localized lower-bound probe: random admissible inclusions concentrated
//! near the base of a spherical cap; the ratio of the numerical elastic
//! minimum to `ρ^(−d)|G|²‖χ‖²_{L¹(B_γρ)}` stays bounded away from zero.
//!
//! ```bash
//! cargo run --release --example lower_bound_probe
//! ```

use nuclab::scaling_lab::probe_lower_bound;

fn main() -> nuclab::Result<()> {
    for nu1 in [0.2f64, 0.8] {
        let nu = vec![nu1, (1.0 - nu1 * nu1).sqrt()];
        let report = probe_lower_bound(2, &nu, 100, 1.0, 0.0, 2024)?;
        println!(
            "nu1 = {nu1}: {} admissible samples, {} excluded (no mass in the gamma-ball)",
            report.ratios.len(),
            report.excluded
        );
        println!("  gamma = {:.4}, smallness constant = {:.3}", report.gamma, report.smallness_constant);
        println!("  min ratio = {:.4e}", report.min_ratio);
        println!("  histogram (upper edge, count):");
        for (edge, count) in &report.histogram {
            println!("    {:>12.3e}  {}", edge, count);
        }
    }
    Ok(())
}
