//! Fourier machinery on the periodic grid.
//!
//! Forward transforms are unnormalized; inverse transforms divide by the
//! number of points so that `inverse(forward(f)) == f`. Odd-order derivative
//! multipliers vanish on the Nyquist slot, even-order pure derivatives keep it.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::PeriodicGrid;

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

fn transform(grid: &PeriodicGrid, data: &mut [Complex64], inverse: bool) {
    let n = grid.resolution();
    let (fwd, inv) = plans(n);
    let fft = if inverse { inv } else { fwd };
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let dim = grid.real_dim();
    // Contiguous last axis: one batched call.
    fft.process_with_scratch(data, &mut scratch);
    let mut lines = Vec::new();
    for axis in 0..dim - 1 {
        let s = grid.stride(axis);
        let block = s * n;
        lines.resize(block, Complex64::new(0.0, 0.0));
        for chunk in data.chunks_mut(block) {
            for j in 0..s {
                for i in 0..n {
                    lines[j * n + i] = chunk[i * s + j];
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            for j in 0..s {
                for i in 0..n {
                    chunk[i * s + j] = lines[j * n + i];
                }
            }
        }
    }
    if inverse {
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

pub fn forward(grid: &PeriodicGrid, data: &mut [Complex64]) {
    transform(grid, data, false);
}

pub fn inverse(grid: &PeriodicGrid, data: &mut [Complex64]) {
    transform(grid, data, true);
}

/// Multiplier of `d/dx^axis` for a wavevector, Nyquist slot zeroed.
pub fn first_multiplier(grid: &PeriodicGrid, flat: usize, axis: usize) -> Complex64 {
    let m = grid.multi_index(flat);
    if grid.is_nyquist(m[axis]) {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, 2.0 * PI * grid.wavenumber(m[axis]) as f64)
}

/// Multiplier of `d^2/dx^a dx^b`.
pub fn second_multiplier(grid: &PeriodicGrid, flat: usize, a: usize, b: usize) -> Complex64 {
    if a == b {
        let m = grid.multi_index(flat);
        let k = 2.0 * PI * grid.wavenumber(m[a]) as f64;
        Complex64::new(-k * k, 0.0)
    } else {
        first_multiplier(grid, flat, a) * first_multiplier(grid, flat, b)
    }
}

/// Symbol of the flat Laplacian, Nyquist slots included.
pub fn laplacian_symbol(grid: &PeriodicGrid, flat: usize) -> f64 {
    let k = grid.wavevector(flat);
    -(0..grid.real_dim())
        .map(|a| (2.0 * PI * k[a] as f64).powi(2))
        .sum::<f64>()
}

/// Fourier coefficients of a sampled field, reusable for many derivatives.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: PeriodicGrid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn of_real(grid: &PeriodicGrid, values: &[f64]) -> Self {
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        forward(grid, &mut coeffs);
        Self {
            grid: *grid,
            coeffs,
        }
    }

    pub fn of_complex(grid: &PeriodicGrid, values: &[Complex64]) -> Self {
        let mut coeffs = values.to_vec();
        forward(grid, &mut coeffs);
        Self {
            grid: *grid,
            coeffs,
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Inverse transform of `multiplier(k) * coeff(k)`.
    pub fn apply<M>(&self, multiplier: M) -> Vec<Complex64>
    where
        M: Fn(usize) -> Complex64,
    {
        let mut out: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * multiplier(k))
            .collect();
        inverse(&self.grid, &mut out);
        out
    }

    pub fn derivative(&self, axis: usize) -> Vec<Complex64> {
        let g = self.grid;
        self.apply(|k| first_multiplier(&g, k, axis))
    }

    pub fn second_derivative(&self, a: usize, b: usize) -> Vec<Complex64> {
        let g = self.grid;
        self.apply(|k| second_multiplier(&g, k, a, b))
    }

    pub fn derivative_real(&self, axis: usize) -> Vec<f64> {
        self.derivative(axis).into_iter().map(|c| c.re).collect()
    }

    pub fn second_derivative_real(&self, a: usize, b: usize) -> Vec<f64> {
        self.second_derivative(a, b).into_iter().map(|c| c.re).collect()
    }

    pub fn laplacian_real(&self) -> Vec<f64> {
        let g = self.grid;
        self.apply(|k| Complex64::new(laplacian_symbol(&g, k), 0.0))
            .into_iter()
            .map(|c| c.re)
            .collect()
    }

    /// Fraction of spectral energy carried by modes with some `|k_a| >= 3N/8`.
    pub fn top_band_fraction(&self) -> f64 {
        let n = self.grid.resolution() as i64;
        let cutoff = (3 * n + 7) / 8;
        let mut total = 0.0;
        let mut band = 0.0;
        for (flat, c) in self.coeffs.iter().enumerate() {
            let e = c.norm_sqr();
            total += e;
            let k = self.grid.wavevector(flat);
            if (0..self.grid.real_dim()).any(|a| k[a].abs() >= cutoff) {
                band += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            band / total
        }
    }

    /// Trigonometric interpolant evaluated at an arbitrary point.
    pub fn interpolate(&self, x: &[f64; 4]) -> Complex64 {
        let n = self.grid.resolution();
        let dim = self.grid.real_dim();
        let factors: Vec<Vec<Complex64>> = (0..dim)
            .map(|a| {
                (0..n)
                    .map(|slot| {
                        if self.grid.is_nyquist(slot) {
                            Complex64::new((PI * n as f64 * x[a]).cos(), 0.0)
                        } else {
                            let k = self.grid.wavenumber(slot) as f64;
                            Complex64::from_polar(1.0, 2.0 * PI * k * x[a])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (flat, c) in self.coeffs.iter().enumerate() {
            let m = self.grid.multi_index(flat);
            let mut f = *c;
            for a in 0..dim {
                f *= factors[a][m[a]];
            }
            sum += f;
        }
        sum / self.coeffs.len() as f64
    }
}

/// Solve `Δu = f` for mean-zero `u`; the mean of `f` is discarded.
pub fn solve_poisson(grid: &PeriodicGrid, f: &[f64]) -> Vec<f64> {
    let spec = Spectrum::of_real(grid, f);
    spec.apply(|k| {
        let s = laplacian_symbol(grid, k);
        if s == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0 / s, 0.0)
        }
    })
    .into_iter()
    .map(|c| c.re)
    .collect()
}
