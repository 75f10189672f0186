//! Modified curvature tensor and sampled Griffiths positivity.

use num_complex::Complex64 as C;
use serde::Serialize;

use super::algebra::griffiths_form;
use crate::error::{Error, Result};
use crate::geometry::PeriodicGrid;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Deterministic quasi-random pairs of unit vectors in `Cⁿ`: Halton points
/// pushed through Box–Muller and normalized.
pub fn unit_vector_pairs(n: usize, count: usize, seed: u64) -> Vec<(Vec<C>, Vec<C>)> {
    let dims = 4 * n;
    let mut out = Vec::with_capacity(count);
    let mut idx = seed + 1;
    while out.len() < count {
        let u: Vec<f64> = (0..dims).map(|k| radical_inverse(idx, PRIMES[k])).collect();
        idx += 1;
        if u.iter().any(|&v| v <= 0.0) {
            continue;
        }
        let mut normals = Vec::with_capacity(dims);
        for pair in u.chunks(2) {
            let r = (-2.0 * pair[0].ln()).sqrt();
            let t = 2.0 * std::f64::consts::PI * pair[1];
            normals.push(r * t.cos());
            normals.push(r * t.sin());
        }
        let unit = |z: &[f64]| -> Vec<C> {
            let v: Vec<C> = z.chunks(2).map(|c| C::new(c[0], c[1])).collect();
            let s = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|c| c / s).collect()
        };
        out.push((unit(&normals[..2 * n]), unit(&normals[2 * n..])));
    }
    out
}

/// Most negative sampled value of the Griffiths form.
#[derive(Debug, Clone, Serialize)]
pub struct GriffithsWitness {
    pub min: f64,
    pub point: usize,
    pub x: Vec<[f64; 2]>,
    pub y: Vec<[f64; 2]>,
}

/// `R_{ij̄kl̄}` in a unitary frame at every grid point, component
/// `((i * n + j) * n + k) * n + l`.
#[derive(Debug, Clone)]
pub struct ModifiedCurvature {
    grid: PeriodicGrid,
    comps: Vec<Vec<C>>,
}

impl ModifiedCurvature {
    pub(crate) fn new(grid: PeriodicGrid, comps: Vec<Vec<C>>) -> Self {
        Self { grid, comps }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn at(&self, p: usize) -> Vec<C> {
        self.comps.iter().map(|c| c[p]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Minimum of `R(X, X̄, Y, Ȳ)` over grid points and `samples` unit pairs.
    pub fn griffiths_min(&self, samples: usize, seed: u64) -> Result<GriffithsWitness> {
        griffiths_min_over(
            (0..self.grid.len()).map(|p| self.at(p)),
            self.grid.complex_dim(),
            samples,
            seed,
        )
    }
}

/// Sampled Griffiths minimum over any sequence of pointwise tensors.
pub fn griffiths_min_over(
    tensors: impl Iterator<Item = Vec<C>>,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<GriffithsWitness> {
    if samples < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let vs = unit_vector_pairs(n, samples, seed);
    let mut best = GriffithsWitness {
        min: f64::INFINITY,
        point: 0,
        x: vec![],
        y: vec![],
    };
    for (p, t) in tensors.enumerate() {
        for (x, y) in &vs {
            let v = griffiths_form(&t, n, x, y);
            if v < best.min {
                best = GriffithsWitness {
                    min: v,
                    point: p,
                    x: x.iter().map(|z| [z.re, z.im]).collect(),
                    y: y.iter().map(|z| [z.re, z.im]).collect(),
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_vectors_are_unit() {
        for (x, y) in unit_vector_pairs(2, 50, 3) {
            let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            let ny: f64 = y.iter().map(|z| z.norm_sqr()).sum();
            assert!((nx - 1.0).abs() < 1e-14 && (ny - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let r = griffiths_min_over(std::iter::empty(), 1, 0, 0);
        assert!(r.is_err());
    }
}
