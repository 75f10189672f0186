use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic sampling of the unit torus `[0,1)^{2n}`.
///
/// Real coordinates are ordered `(x1, y1, x2, y2)`; the standard complex
/// structure pairs axis `2k` with axis `2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicGrid {
    complex_dim: usize,
    resolution: usize,
}

impl PeriodicGrid {
    pub fn new(complex_dim: usize, resolution: usize) -> Result<Self> {
        if !(1..=2).contains(&complex_dim) {
            return Err(Error::InvalidGrid(format!(
                "complex dimension must be 1 or 2, got {complex_dim}"
            )));
        }
        if resolution < 4 || resolution % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "resolution must be even and at least 4, got {resolution}"
            )));
        }
        Ok(Self {
            complex_dim,
            resolution,
        })
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_dim
    }

    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.resolution.pow(self.real_dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.resolution as f64
    }

    /// Quadrature weight of a single point (the cell volume).
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.real_dim() as i32)
    }

    /// Stride of `axis` in the row-major flat layout (last axis contiguous).
    pub fn stride(&self, axis: usize) -> usize {
        self.resolution.pow((self.real_dim() - 1 - axis) as u32)
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 4] {
        let mut out = [0usize; 4];
        let mut rem = flat;
        for axis in (0..self.real_dim()).rev() {
            out[axis] = rem % self.resolution;
            rem /= self.resolution;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .take(self.real_dim())
            .fold(0, |acc, &i| acc * self.resolution + (i % self.resolution))
    }

    /// Coordinates of a grid point; unused trailing slots are zero.
    pub fn point(&self, flat: usize) -> [f64; 4] {
        let m = self.multi_index(flat);
        let h = self.spacing();
        let mut x = [0.0; 4];
        for axis in 0..self.real_dim() {
            x[axis] = m[axis] as f64 * h;
        }
        x
    }

    /// Signed integer wavenumber of a one-dimensional FFT slot.
    pub fn wavenumber(&self, slot: usize) -> i64 {
        let n = self.resolution as i64;
        let s = slot as i64;
        if s <= n / 2 {
            s
        } else {
            s - n
        }
    }

    pub fn is_nyquist(&self, slot: usize) -> bool {
        slot == self.resolution / 2
    }

    /// Wavenumber vector of a flat spectral index.
    pub fn wavevector(&self, flat: usize) -> [i64; 4] {
        let m = self.multi_index(flat);
        let mut k = [0i64; 4];
        for axis in 0..self.real_dim() {
            k[axis] = self.wavenumber(m[axis]);
        }
        k
    }

    pub fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.real_dim() {
            Err(Error::AxisOutOfRange {
                axis,
                dim: self.real_dim(),
            })
        } else {
            Ok(())
        }
    }

    pub fn with_resolution(&self, resolution: usize) -> Result<Self> {
        Self::new(self.complex_dim, resolution)
    }

    /// Minimal periodic displacement `x - p` componentwise in `[-1/2, 1/2)`.
    pub fn periodic_offset(&self, x: &[f64; 4], p: &[f64; 4]) -> [f64; 4] {
        let mut d = [0.0; 4];
        for axis in 0..self.real_dim() {
            let mut v = x[axis] - p[axis];
            v -= v.round();
            d[axis] = v;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_spacing() {
        let g = PeriodicGrid::new(2, 8).unwrap();
        assert_eq!(g.real_dim(), 4);
        assert_eq!(g.len(), 4096);
        assert!((g.spacing() - 0.125).abs() < 1e-15);
        assert!((g.cell_volume() * g.len() as f64 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn index_round_trip() {
        let g = PeriodicGrid::new(2, 6).unwrap();
        for flat in [0, 1, 17, 500, g.len() - 1] {
            let m = g.multi_index(flat);
            assert_eq!(g.flat_index(&m[..4]), flat);
        }
        assert_eq!(g.stride(3), 1);
        assert_eq!(g.stride(0), 216);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(PeriodicGrid::new(3, 8).is_err());
        assert!(PeriodicGrid::new(1, 2).is_err());
        assert!(PeriodicGrid::new(1, 7).is_err());
    }

    #[test]
    fn wavenumbers_are_signed() {
        let g = PeriodicGrid::new(1, 8).unwrap();
        let ks: Vec<i64> = (0..8).map(|s| g.wavenumber(s)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert!(g.is_nyquist(4));
    }
}
