//! Voxel masks: discrete indicator carriers on axis-aligned grids in the
//! upper half-space, with a portable binary format.
//!
//! Face-counting conventions (shared by the discrete perimeter and the
//! flat-trace check):
//! * faces on the boundary hyperplane `{x_d = 0}` are free (relative
//!   perimeter);
//! * lateral box faces are free — the box is a window into a laterally
//!   unbounded half-space, and truncation must not create phantom interfaces;
//! * top box faces of occupied cells count — inclusions are bounded, so the
//!   indicator extends by zero above the box.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Boolean occupancy on a regular grid of spacing `h` whose box sits inside
/// `{x_d ≥ 0}`. Cells are stored row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelMask {
    d: usize,
    h: f64,
    origin: Vec<f64>,
    dims: Vec<usize>,
    cells: Vec<bool>,
}

impl VoxelMask {
    pub fn new(h: f64, origin: Vec<f64>, dims: Vec<usize>) -> Result<Self> {
        let d = dims.len();
        if d < 2 {
            return Err(Error::parameter("voxel mask needs dimension >= 2"));
        }
        if origin.len() != d {
            return Err(Error::parameter("origin/dims dimension mismatch"));
        }
        if !(h > 0.0) {
            return Err(Error::parameter("grid spacing must be positive"));
        }
        if dims.contains(&0) {
            return Err(Error::parameter("cell counts must be positive"));
        }
        if origin[d - 1] < -1e-12 * h {
            return Err(Error::parameter("mask box must lie in the upper half-space"));
        }
        let n: usize = dims.iter().product();
        Ok(VoxelMask { d, h, origin, dims, cells: vec![false; n] })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|&c| !c)
    }

    /// Flat index of a multi-index (row-major, last axis fastest).
    pub fn index(&self, idx: &[usize]) -> usize {
        let mut flat = 0usize;
        for (k, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.dims[k]);
            flat = flat * self.dims[k] + i;
        }
        flat
    }

    pub fn get(&self, idx: &[usize]) -> bool {
        self.cells[self.index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: bool) {
        let flat = self.index(idx);
        self.cells[flat] = value;
    }

    pub fn get_flat(&self, flat: usize) -> bool {
        self.cells[flat]
    }

    pub fn set_flat(&mut self, flat: usize, value: bool) {
        self.cells[flat] = value;
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.d];
        for k in (0..self.d).rev() {
            idx[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        idx
    }

    pub fn cell_center(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(k, &i)| self.origin[k] + (i as f64 + 0.5) * self.h)
            .collect()
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// `(#occupied) · h^d`.
    pub fn volume(&self) -> f64 {
        self.occupied_count() as f64 * self.h.powi(self.d as i32)
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        let mut idx = Vec::with_capacity(self.d);
        for k in 0..self.d {
            let t = (x[k] - self.origin[k]) / self.h;
            if t < 0.0 {
                return false;
            }
            let i = t.floor() as usize;
            if i >= self.dims[k] {
                return false;
            }
            idx.push(i);
        }
        self.get(&idx)
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.d];
        for k in (0..self.d - 1).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    /// Discrete interface area inside the open half-space: occupied/unoccupied
    /// interior face pairs plus occupied top faces of the box, each weighted
    /// `h^(d−1)`. Floor and lateral box faces are free (see module docs).
    pub fn interface_area(&self) -> f64 {
        let strides = self.strides();
        let mut faces = 0usize;
        for flat in 0..self.cells.len() {
            if !self.cells[flat] {
                continue;
            }
            let idx = self.multi_index(flat);
            for k in 0..self.d {
                // forward face
                if idx[k] + 1 < self.dims[k] {
                    if !self.cells[flat + strides[k]] {
                        faces += 1;
                    }
                } else if k == self.d - 1 {
                    faces += 1; // box top counts: χ = 0 above
                }
                // backward face: only interior pairs (floor and lateral box
                // faces are free)
                if idx[k] > 0 && !self.cells[flat - strides[k]] {
                    faces += 1;
                }
            }
        }
        // each mixed pair is seen exactly once, from its occupied side
        faces as f64 * self.h.powi(self.d as i32 - 1)
    }

    /// Area of the occupied bottom faces lying on `{x_d = 0}`; zero when the
    /// box floor is above the hyperplane.
    pub fn floor_trace_area(&self) -> f64 {
        if self.origin[self.d - 1] > 1e-9 * self.h {
            return 0.0;
        }
        let mut faces = 0usize;
        for flat in 0..self.cells.len() {
            if self.cells[flat] && self.multi_index(flat)[self.d - 1] == 0 {
                faces += 1;
            }
        }
        faces as f64 * self.h.powi(self.d as i32 - 1)
    }

    /// Serialize to the documented binary layout:
    /// `u64 d | u64 dims[d] | f64 origin[d] | f64 h | bit-packed cells`,
    /// all little-endian, cells row-major (last axis fastest), LSB-first
    /// within each byte. A JSON sidecar `<path>.json` carries metadata.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut buf: Vec<u8> = Vec::new();
        buf.extend_from_slice(&(self.d as u64).to_le_bytes());
        for &n in &self.dims {
            buf.extend_from_slice(&(n as u64).to_le_bytes());
        }
        for &o in &self.origin {
            buf.extend_from_slice(&o.to_le_bytes());
        }
        buf.extend_from_slice(&self.h.to_le_bytes());
        let mut packed = vec![0u8; self.cells.len().div_ceil(8)];
        for (i, &c) in self.cells.iter().enumerate() {
            if c {
                packed[i / 8] |= 1 << (i % 8);
            }
        }
        buf.extend_from_slice(&packed);
        std::fs::write(path, &buf)?;

        let sidecar = serde_json::json!({
            "d": self.d,
            "dims": self.dims,
            "origin": self.origin,
            "h": self.h,
            "occupied": self.occupied_count(),
            "volume": self.volume(),
        });
        let mut sidecar_path = path.as_os_str().to_owned();
        sidecar_path.push(".json");
        std::fs::write(sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let mut file = std::fs::File::open(path)?;
        let mut buf = Vec::new();
        file.read_to_end(&mut buf)?;
        let mut off = 0usize;
        let take_u64 = |buf: &[u8], off: &mut usize| -> Result<u64> {
            if *off + 8 > buf.len() {
                return Err(Error::validation("voxel file truncated"));
            }
            let v = u64::from_le_bytes(buf[*off..*off + 8].try_into().unwrap());
            *off += 8;
            Ok(v)
        };
        let take_f64 = |buf: &[u8], off: &mut usize| -> Result<f64> {
            if *off + 8 > buf.len() {
                return Err(Error::validation("voxel file truncated"));
            }
            let v = f64::from_le_bytes(buf[*off..*off + 8].try_into().unwrap());
            *off += 8;
            Ok(v)
        };
        let d = take_u64(&buf, &mut off)? as usize;
        if !(2..=8).contains(&d) {
            return Err(Error::validation(format!("unsupported voxel dimension {d}")));
        }
        let mut dims = Vec::with_capacity(d);
        for _ in 0..d {
            dims.push(take_u64(&buf, &mut off)? as usize);
        }
        let mut origin = Vec::with_capacity(d);
        for _ in 0..d {
            origin.push(take_f64(&buf, &mut off)?);
        }
        let h = take_f64(&buf, &mut off)?;
        let mut mask = VoxelMask::new(h, origin, dims)?;
        let n = mask.cells.len();
        let packed = &buf[off..];
        if packed.len() != n.div_ceil(8) {
            return Err(Error::validation(format!(
                "voxel payload length {} does not match {} cells",
                packed.len(),
                n
            )));
        }
        for i in 0..n {
            mask.cells[i] = packed[i / 8] & (1 << (i % 8)) != 0;
        }
        Ok(mask)
    }
}

/// Rasterize a shape onto a grid: a cell is occupied iff at least half of its
/// `k^d` subsamples lie inside the shape.
pub fn rasterize<F: Fn(&[f64]) -> bool>(
    inside: F,
    min_feature: Option<f64>,
    h: f64,
    origin: Vec<f64>,
    dims: Vec<usize>,
    k: usize,
) -> Result<VoxelMask> {
    if k == 0 {
        return Err(Error::parameter("subsample count k must be positive"));
    }
    if let Some(feat) = min_feature {
        if h > feat / 4.0 {
            return Err(Error::Resolution(format!(
                "grid spacing {h} too coarse for feature size {feat} (need >= 4 cells across)"
            )));
        }
    }
    let mut mask = VoxelMask::new(h, origin, dims)?;
    let d = mask.dim();
    let total = mask.len();
    let kd: usize = k.pow(d as u32);
    let mut point = vec![0.0; d];
    for flat in 0..total {
        let idx = mask.multi_index(flat);
        let mut hits = 0usize;
        for s in 0..kd {
            let mut rem = s;
            for (kk, slot) in point.iter_mut().enumerate() {
                let sub = rem % k;
                rem /= k;
                *slot = mask.origin[kk] + (idx[kk] as f64 + (sub as f64 + 0.5) / k as f64) * h;
            }
            if inside(&point) {
                hits += 1;
            }
        }
        if 2 * hits >= kd {
            mask.set_flat(flat, true);
        }
    }
    Ok(mask)
}
