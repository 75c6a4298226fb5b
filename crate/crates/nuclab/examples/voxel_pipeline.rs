//! Voxel mask pipeline: rasterize a lens, measure its discrete perimeter and
//! flat trace, and round-trip the portable binary format.
//!
//! ```bash
//! cargo run --release --example voxel_pipeline
//! ```

use nuclab::constructions::flat_trace_inequality_check;
use nuclab::field_solver::grid_perimeter;
use nuclab::geometry::{lens2d_measures, rasterize, InclusionShape, Lens2D};

fn main() -> nuclab::Result<()> {
    let lens = Lens2D::new(2.0, 6.0, [0.0, 1.0])?;
    let measures = lens2d_measures(&lens);
    let shape = InclusionShape::Lens2D(lens);
    let h = 0.25;
    let n = 64;
    let mask = rasterize(&shape, h, vec![-(n as f64) / 2.0 * h, 0.0], vec![n, 32], 4)?;
    println!("rasterized lens: {} occupied cells, volume {:.3} (exact area {:.3})", mask.occupied_count(), mask.volume(), measures.area);
    println!("grid perimeter {:.3} vs continuum relative perimeter {:.3}", grid_perimeter(&mask), measures.perimeter_open_halfplane);
    let check = flat_trace_inequality_check(&mask);
    println!("flat trace {:.3} <= interface {:.3}: {}", check.lhs, check.rhs, check.holds);

    let dir = std::env::temp_dir().join("nuclab_voxel_demo");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("lens.bin");
    mask.write_binary(&path)?;
    let back = nuclab::geometry::VoxelMask::read_binary(&path)?;
    println!(
        "binary round-trip at {}: identical = {}",
        path.display(),
        back == mask
    );
    Ok(())
}
