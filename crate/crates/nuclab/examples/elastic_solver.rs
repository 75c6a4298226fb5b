//! The grid elastic solver: a boundary slab with the normal direction is
//! exactly compatible (zero energy); random inclusions are checked against
//! the dense direct oracle.
//!
//! ```bash
//! cargo run --release --example elastic_solver
//! ```

use nuclab::core::RankOneTensor;
use nuclab::field_solver::{dense_oracle, minimize_elastic, Grid};
use nuclab::geometry::VoxelMask;
use rand::{Rng, SeedableRng};

fn main() -> nuclab::Result<()> {
    // compatible slab
    let n = 16;
    let h = 0.25;
    let mut slab = VoxelMask::new(h, vec![0.0, 0.0], vec![n, n])?;
    for i in 0..n {
        for j in 0..4 {
            slab.set(&[i, j], true);
        }
    }
    let grid = Grid::from_mask(&slab)?;
    let g = RankOneTensor::new(vec![1.0, 0.0], vec![0.0, 1.0])?;
    let rep = minimize_elastic(&slab, &g, &grid, 1e-10, 10_000)?;
    println!("slab with nu = e_d: energy {:.3e} (compatible, iterations {})", rep.energy, rep.iterations);

    // random mask vs the dense oracle
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut mask = VoxelMask::new(h, vec![0.0, 0.0], vec![n, n])?;
    for flat in 0..mask.len() {
        if rng.gen_bool(0.3) {
            mask.set_flat(flat, true);
        }
    }
    let g = RankOneTensor::new(vec![1.0, 0.0], nuclab::linalg::normalized(&[-0.6, 0.8])?)?;
    let cg = minimize_elastic(&mask, &g, &grid, 1e-12, 20_000)?;
    let exact = dense_oracle(&mask, &g, &grid)?;
    println!(
        "random 16x16 mask: cg {:.10e}, oracle {:.10e}, relative gap {:.2e}",
        cg.energy,
        exact,
        (cg.energy - exact).abs() / exact
    );
    Ok(())
}
