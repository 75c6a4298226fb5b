//! The orientation dichotomy: walking the rank-one direction toward the
//! half-space normal flips the optimal construction branch at
//! `θ = (|G|^(−2d)/μ)^(1/(3d−1))`.
//!
//! ```bash
//! cargo run --release --example dichotomy_scan
//! ```

use nuclab::scaling_lab::{dichotomy_scan, nu1_path};

fn main() -> nuclab::Result<()> {
    let mu = 1e5;
    let path = nu1_path(2, 0.3, 0.0, 31);
    let report = dichotomy_scan(2, &[1.0, 0.0], mu, &path)?;
    println!("mu = {mu}, branch threshold = {:.4}", report.threshold);
    println!("{:>10} {:>10} {:>16} {:>12} {:>10}", "dist", "theta", "branch", "total", "proxy");
    for e in &report.entries {
        println!(
            "{:>10.4} {:>10.4} {:>16} {:>12.4e} {:>10.4}",
            e.dist, e.theta, e.branch.to_string(), e.total, e.proxy
        );
    }
    if let Some(c) = &report.crossover {
        println!("\nbranch flip inside theta ({:.4}, {:.4}]", c.theta_after, c.theta_before);
    }
    Ok(())
}
