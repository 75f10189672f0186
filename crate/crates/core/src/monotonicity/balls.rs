//! Ball integrals of the energy density on the flat torus, the monotonicity
//! scan, the decay corollary and the ε-regularity scatter.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{traces, FormField, MetricField, PeriodicGrid, ScalarField, Spectrum, TwoFormField};

/// Largest admissible radius: balls of radius below ½ embed in the unit torus.
pub const DEFAULT_R0: f64 = 0.45;

/// `A` values scanned for the monotonicity fit.
pub fn a_grid() -> Vec<f64> {
    (0..=16).map(|k| k as f64 * 0.5).collect()
}

/// Relative tolerance on the ratio being nondecreasing.
pub const RATIO_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallFamily {
    pub centers: Vec<[f64; 4]>,
    pub radii: Vec<f64>,
    pub r0: f64,
}

impl BallFamily {
    pub fn new(centers: Vec<[f64; 4]>, radii: Vec<f64>, r0: f64) -> Result<Self> {
        if radii.is_empty() || radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("radii must be positive and strictly increasing".into()));
        }
        if !(r0 > 0.0 && r0 < 0.5) {
            return Err(Error::InvalidArgument("r0 must lie in (0, 1/2)".into()));
        }
        let last = *radii.last().unwrap();
        if last > r0 {
            return Err(Error::RadiusTooLarge { radius: last, cap: r0 });
        }
        if centers.is_empty() {
            return Err(Error::InvalidArgument("no centers".into()));
        }
        Ok(Self { centers, radii, r0 })
    }

    /// `count` centers: the extrema of `density` followed by fixed lattice
    /// points; `m` radii evenly spaced in `[r_min, r_max]`.
    pub fn standard(density: &ScalarField, count: usize, r_min: f64, r_max: f64, m: usize) -> Result<Self> {
        let grid = *density.grid();
        let mut centers = vec![grid.point(density.argmax().0), grid.point(density.argmin().0)];
        let d = grid.real_dim();
        let lattice = [0.0, 0.25, 0.5, 0.75, 0.125, 0.375, 0.625, 0.875];
        let mut k = 0;
        while centers.len() < count {
            let mut x = [0.0; 4];
            for a in 0..d {
                x[a] = lattice[(k + a * 3) % lattice.len()];
            }
            if !centers.contains(&x) {
                centers.push(x);
            }
            k += 1;
        }
        centers.truncate(count.max(1));
        let radii = if m == 1 {
            vec![r_max]
        } else {
            (0..m).map(|i| r_min + (r_max - r_min) * i as f64 / (m - 1) as f64).collect()
        };
        Self::new(centers, radii, DEFAULT_R0)
    }
}

/// Fourier transform of the indicator of a ball of radius `r` in `ℝ^d` at
/// frequency `|k| = rho` (cycles per unit length).
pub fn ball_transform(dim: usize, r: f64, rho: f64) -> f64 {
    if rho == 0.0 {
        return match dim {
            2 => PI * r * r,
            _ => 0.5 * PI * PI * r.powi(4),
        };
    }
    let z = 2.0 * PI * r * rho;
    match dim {
        2 => r * libm::jn(1, z) / rho,
        _ => r * r * libm::jn(2, z) / (rho * rho),
    }
}

/// `∫_{B(p, r)} f dx` for the trigonometric interpolant of `f`, optionally
/// against a Gaussian-mollified indicator of width `sigma`.
#[derive(Debug, Clone)]
pub struct BallIntegrator {
    grid: PeriodicGrid,
    spec: Spectrum,
    /// `|k|` per spectral slot.
    rho: Vec<f64>,
}

impl BallIntegrator {
    pub fn new(f: &ScalarField) -> Self {
        let grid = *f.grid();
        let rho = (0..grid.len())
            .map(|flat| {
                let k = grid.wavevector(flat);
                (0..grid.real_dim()).map(|a| (k[a] * k[a]) as f64).sum::<f64>().sqrt()
            })
            .collect();
        Self { grid, spec: f.spectrum(), rho }
    }

    pub fn integrate(&self, center: &[f64; 4], r: f64, sigma: f64) -> f64 {
        let d = self.grid.real_dim();
        let mut sum = C::new(0.0, 0.0);
        for (flat, c) in self.spec.coeffs().iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let k = self.grid.wavevector(flat);
            let phase: f64 = (0..d).map(|a| k[a] as f64 * center[a]).sum();
            let rho = self.rho[flat];
            let mollify = (-2.0 * PI * PI * sigma * sigma * rho * rho).exp();
            sum += c * C::from_polar(1.0, 2.0 * PI * phase) * ball_transform(d, r, rho) * mollify;
        }
        sum.re / self.grid.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterScan {
    pub center: [f64; 4],
    /// `E(p, r)` per radius.
    pub integrals: Vec<f64>,
    /// `r^{2−2n} E(p, r)` (the ratio at `A = 0`).
    pub ratio: Vec<f64>,
    /// Smallest `A` on the scan grid making `e^{Ar} r^{2−2n} E` nondecreasing.
    pub fitted_a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub radii: Vec<f64>,
    pub scans: Vec<CenterScan>,
    /// Max over centers; `None` when some center fails for every `A`.
    pub fitted_a: Option<f64>,
    pub decay_c: f64,
    pub l1: Option<f64>,
    pub equivalence_c: Option<f64>,
}

impl MonotonicityReport {
    pub fn integrals_nondecreasing(&self) -> bool {
        self.scans
            .iter()
            .all(|s| s.integrals.windows(2).all(|w| w[1] >= w[0] * (1.0 - RATIO_TOLERANCE)))
    }

    /// CSV rows `center_index, x1..x4, r, E, ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("center,x1,y1,x2,y2,r,E,ratio\n");
        for (i, s) in self.scans.iter().enumerate() {
            for (k, r) in self.radii.iter().enumerate() {
                out.push_str(&format!(
                    "{i},{},{},{},{},{r},{:e},{:e}\n",
                    s.center[0], s.center[1], s.center[2], s.center[3], s.integrals[k], s.ratio[k]
                ));
            }
        }
        out
    }
}

fn nondecreasing_with(ratio: &[f64], radii: &[f64], a: f64) -> bool {
    let vals: Vec<f64> = ratio.iter().zip(radii).map(|(q, r)| q * (a * r).exp()).collect();
    vals.windows(2).all(|w| w[1] >= w[0] * (1.0 - RATIO_TOLERANCE))
}

/// Ball integrals of `tr_g g̃` (flat `g`) for every center and radius, with
/// the fitted `A` and `decay_C = max r^{−2} E(p, r)`.
pub fn monotonicity_scan(g: &MetricField, g_tilde: &MetricField, balls: &BallFamily, a_values: &[f64]) -> Result<MonotonicityReport> {
    monotonicity_scan_mollified(g, g_tilde, balls, a_values, 0.0)
}

pub fn monotonicity_scan_mollified(
    g: &MetricField,
    g_tilde: &MetricField,
    balls: &BallFamily,
    a_values: &[f64],
    sigma: f64,
) -> Result<MonotonicityReport> {
    if g.inner().max_abs_diff(MetricField::euclidean(*g.grid()).inner()) > 1e-14 {
        return Err(Error::Hypothesis("ball integrals need the flat background metric".into()));
    }
    if let Some(&r) = balls.radii.iter().find(|&&r| r > balls.r0) {
        return Err(Error::RadiusTooLarge { radius: r, cap: balls.r0 });
    }
    let grid = *g.grid();
    let n = grid.complex_dim() as i32;
    let (tr, _) = traces(g, g_tilde)?;
    let integ = BallIntegrator::new(&tr);
    let mut decay_c: f64 = 0.0;
    let mut scans = Vec::with_capacity(balls.centers.len());
    for c in &balls.centers {
        let integrals: Vec<f64> = balls.radii.iter().map(|&r| integ.integrate(c, r, sigma)).collect();
        let ratio: Vec<f64> = integrals.iter().zip(&balls.radii).map(|(e, r)| e * r.powi(2 - 2 * n)).collect();
        for (e, r) in integrals.iter().zip(&balls.radii) {
            decay_c = decay_c.max(e / (r * r));
        }
        let fitted_a = a_values.iter().copied().find(|&a| nondecreasing_with(&ratio, &balls.radii, a));
        scans.push(CenterScan { center: *c, integrals, ratio, fitted_a });
    }
    let fitted_a = scans
        .iter()
        .map(|s| s.fitted_a)
        .try_fold(0.0_f64, |m, a| a.map(|a| m.max(a)));
    Ok(MonotonicityReport {
        radii: balls.radii.clone(),
        scans,
        fitted_a,
        decay_c,
        l1: None,
        equivalence_c: None,
    })
}

/// The `L¹` chain `∫tr_g̃ g dV ≤ C_a ∫tr_g̃ g Ω² ≤ C_a C_b ∫ω̃∧Ω = C_a C_b ∫Ω²`
/// evaluated term by term, with `C_a = max dV/Ω²`, `C_b = 4 max Ω²/ω̃²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1Chain {
    pub l1: f64,
    pub weighted: f64,
    pub mixed: f64,
    pub omega_volume: f64,
    pub c_a: f64,
    pub c_b: f64,
    /// Slacks of the two inequalities and the cohomological equality defect.
    pub margins: [f64; 2],
    pub cohomology_defect: f64,
    /// Smallest `C` with `C⁻¹ tr_g g̃ ≤ tr_g̃ g ≤ C tr_g g̃`.
    pub equivalence_c: f64,
    /// `max e^{|F|}` with `e^F = ω̃²/Ω²`: for `n = 2` the traces satisfy
    /// `tr_g̃ g = e^{−F} tr_g g̃` exactly.
    pub equivalence_prediction: f64,
}

/// Decay constant and the `L¹` chain on a solved `n = 2` instance.
pub fn decay_and_l1(
    g: &MetricField,
    g_tilde: &MetricField,
    omega_tilde: &TwoFormField,
    omega: &TwoFormField,
    balls: &BallFamily,
    cy_residual: f64,
    residual_threshold: f64,
) -> Result<(MonotonicityReport, L1Chain)> {
    if g.grid().complex_dim() != 2 {
        return Err(Error::Hypothesis("the L¹ chain is specific to real dimension four".into()));
    }
    if !(cy_residual <= residual_threshold) {
        return Err(Error::Hypothesis(format!(
            "Calabi-Yau residual {cy_residual:.3e} above {residual_threshold:.1e}"
        )));
    }
    let mut report = monotonicity_scan(g, g_tilde, balls, &a_grid())?;
    let (fwd, back) = traces(g, g_tilde)?;
    let dv = g.volume_density();
    let w = FormField::from_two_form(omega);
    let wt = FormField::from_two_form(omega_tilde);
    let w2 = w.power(2)?.top_density()?;
    let wt2 = wt.power(2)?.top_density()?;
    let mixed_density = wt.wedge(&w)?.top_density()?;
    let l1 = back.zip_map(&dv, |a, b| a * b).integrate();
    let weighted = back.zip_map(&w2, |a, b| a * b).integrate();
    let mixed = mixed_density.integrate();
    let omega_volume = w2.integrate();
    let c_a = dv.zip_map(&w2, |a, b| a / b).max();
    let c_b = 4.0 * w2.zip_map(&wt2, |a, b| a / b).max();
    let ratio = back.zip_map(&fwd, |a, b| a / b);
    let equivalence_c = ratio.max().max(1.0 / ratio.min());
    let equivalence_prediction = wt2.zip_map(&w2, |a, b| (a / b).ln().abs().exp()).max();
    report.l1 = Some(l1);
    report.equivalence_c = Some(equivalence_c);
    let chain = L1Chain {
        l1,
        weighted,
        mixed,
        omega_volume,
        c_a,
        c_b,
        margins: [c_a * weighted - l1, c_b * mixed - weighted],
        cohomology_defect: (mixed - omega_volume).abs(),
        equivalence_c,
        equivalence_prediction,
    };
    Ok((report, chain))
}

/// One point of the ε-regularity scatter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonPoint {
    pub center: usize,
    pub r: f64,
    /// `r^{−2} ∫_{B(p,r)} tr_g g̃`.
    pub x: f64,
    /// `sup_{B(p,r/2)} tr_g g̃ · r⁴ / ∫_{B(p,r)} tr_g g̃`.
    pub y: f64,
}

/// Scatter `(x, y)` over the ball family; the conjectured implication
/// `x ≤ ε ⇒ y ≤ C` is left for inspection.
pub fn epsilon_regularity_probe(g: &MetricField, g_tilde: &MetricField, balls: &BallFamily) -> Result<Vec<EpsilonPoint>> {
    let report = monotonicity_scan(g, g_tilde, balls, &[0.0])?;
    let grid = *g.grid();
    let (tr, _) = traces(g, g_tilde)?;
    let mut out = Vec::new();
    for (ci, scan) in report.scans.iter().enumerate() {
        for (k, &r) in balls.radii.iter().enumerate() {
            let e = scan.integrals[k];
            let half = 0.5 * r;
            let mut sup = f64::NEG_INFINITY;
            let mut nearest = (f64::INFINITY, 0.0);
            for p in 0..grid.len() {
                let off = grid.periodic_offset(&grid.point(p), &scan.center);
                let dist = off.iter().map(|v| v * v).sum::<f64>().sqrt();
                let v = tr.values()[p];
                if dist <= half {
                    sup = sup.max(v);
                }
                if dist < nearest.0 {
                    nearest = (dist, v);
                }
            }
            if sup == f64::NEG_INFINITY {
                sup = nearest.1;
            }
            out.push(EpsilonPoint { center: ci, r, x: e / (r * r), y: sup * r.powi(4) / e });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_ball_integrals_are_exact() {
        let grid = PeriodicGrid::new(2, 8).unwrap();
        let g = MetricField::euclidean(grid);
        let balls = BallFamily::new(vec![[0.1, 0.2, 0.3, 0.4]], vec![0.1, 0.2, 0.3], DEFAULT_R0).unwrap();
        let rep = monotonicity_scan(&g, &g, &balls, &a_grid()).unwrap();
        for (e, r) in rep.scans[0].integrals.iter().zip(&balls.radii) {
            assert!((e - 2.0 * PI * PI * r.powi(4)).abs() < 1e-14);
        }
        assert_eq!(rep.fitted_a, Some(0.0));
        let eps = epsilon_regularity_probe(&g, &g, &balls).unwrap();
        assert!(eps.iter().all(|p| (p.y - 2.0 / (PI * PI)).abs() < 1e-12));
    }

    #[test]
    fn planar_disc_of_a_cosine() {
        // ∫_{|y|<r} cos(2π y1) dy = r J1(2πr)
        let grid = PeriodicGrid::new(1, 16).unwrap();
        let f = ScalarField::from_fn(grid, |x| (2.0 * PI * x[0]).cos());
        let got = BallIntegrator::new(&f).integrate(&[0.0; 4], 0.3, 0.0);
        assert!((got - 0.3 * libm::jn(1, 2.0 * PI * 0.3)).abs() < 1e-14);
    }

    #[test]
    fn rejects_oversized_radius() {
        assert!(matches!(
            BallFamily::new(vec![[0.0; 4]], vec![0.1, 0.46], DEFAULT_R0),
            Err(Error::RadiusTooLarge { .. })
        ));
    }
}
