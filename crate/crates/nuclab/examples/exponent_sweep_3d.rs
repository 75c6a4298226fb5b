//! Large-volume exponent sweeps in 3D with sampled energies: generic
//! directions follow `μ^(4/5)`, the normal direction `μ^(3/4)`.
//!
//! ```bash
//! cargo run --release --example exponent_sweep_3d
//! ```

use nuclab::core::{predicted_exponent, Regime};
use nuclab::scaling_lab::{fit_exponent, run_sweep, SweepMethod, SweepSpec};

fn main() -> nuclab::Result<()> {
    let volumes: Vec<f64> = (0..7).map(|k| 1e2 * 1e5f64.powf(k as f64 / 6.0)).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (label, nu) in [("generic", vec![-s, 0.0, s]), ("normal", vec![0.0, 0.0, 1.0])] {
        let spec = SweepSpec {
            d: 3,
            nu: nu.clone(),
            a: vec![1.0, 0.0, 0.0],
            volumes: volumes.clone(),
            method: SweepMethod::Sampled,
            seed: 0,
        };
        let rows = run_sweep(&spec)?;
        let fit = fit_exponent(&rows)?;
        let target = predicted_exponent(3, &nu, Regime::LargeVolume);
        println!(
            "{label}: fitted slope {:.5} (stderr {:.1e}), predicted {target} = {:.5}",
            fit.slope,
            fit.stderr,
            target.value()
        );
    }
    Ok(())
}
