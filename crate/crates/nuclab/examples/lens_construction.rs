//! The optimized thin-lens inclusion for the large-volume regime.
//!
//! Prints the optimized half-diagonals, the branch, and the energy breakdown
//! with the closed-form ceiling for comparison.
//!
//! ```bash
//! cargo run --release --example lens_construction
//! ```

use nuclab::constructions::{
    construction_energy, optimized_lens_construction, ConstructionReport, EnergyMethod,
};
use nuclab::core::RankOneTensor;

fn main() -> nuclab::Result<()> {
    let mu = 1e4;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for nu in [[0.0, 1.0], [-0.3, (1.0f64 - 0.09).sqrt()], [-s, s]] {
        let a = [1.0, 0.0];
        let (field, shape, params) = optimized_lens_construction(2, mu, &nu, &a)?;
        let g = RankOneTensor::new(a.to_vec(), nu.to_vec())?;
        let exact = construction_energy(&field, &shape, &g, EnergyMethod::ExactPiecewise)?;
        println!("nu = ({:+.4}, {:+.4})  branch {:?}", nu[0], nu[1], params.branch);
        println!("  H = {:.4}, L = {:.4}, measured volume = {:.4}", params.h, params.l, exact.measured_volume);
        println!(
            "  surface {:.4}  elastic {:.6}  (ceiling {:.4})  total {:.4}",
            exact.surface, exact.elastic_exact, exact.elastic_bound, exact.total
        );
        let record = ConstructionReport::new(&field, &shape, params.branch.to_string(), &exact);
        println!("  json: {}", serde_json::to_string(&record).unwrap());
        println!();
    }
    Ok(())
}
