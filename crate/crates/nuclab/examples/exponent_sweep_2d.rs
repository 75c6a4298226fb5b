//! Large-volume exponent sweeps in 2D: the generic direction follows
//! `μ^(2/3)`, the direction normal to the boundary follows `μ^(3/5)`.
//!
//! ```bash
//! cargo run --release --example exponent_sweep_2d
//! ```

use nuclab::core::{predicted_exponent, Regime};
use nuclab::scaling_lab::{fit_exponent, run_sweep, SweepMethod, SweepSpec};

fn main() -> nuclab::Result<()> {
    let volumes: Vec<f64> = (0..7).map(|k| 1e2 * 1e6f64.powf(k as f64 / 6.0)).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (label, nu) in [("generic (45 degrees)", [-s, s]), ("normal to the boundary", [0.0, 1.0])] {
        let spec = SweepSpec {
            d: 2,
            nu: nu.to_vec(),
            a: vec![1.0, 0.0],
            volumes: volumes.clone(),
            method: SweepMethod::ExactPiecewise,
            seed: 0,
        };
        let rows = run_sweep(&spec)?;
        let fit = fit_exponent(&rows)?;
        let target = predicted_exponent(2, &spec.nu, Regime::LargeVolume);
        println!("{label}: fitted slope {:.5}, predicted {target} = {:.5}", fit.slope, target.value());
        for r in &rows {
            println!(
                "  mu {:>12.4e}  H {:>9.3} L {:>11.2}  total {:>12.5e}  [{}]",
                r.mu, r.h, r.l, r.total, r.branch
            );
        }
        println!();
    }
    Ok(())
}
