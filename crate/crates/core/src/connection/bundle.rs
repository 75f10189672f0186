//! Canonical connection, torsion and curvature on the whole grid.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

use super::algebra::{
    conj_column, connection_at, curvature_at, eval2, modified_at, skew_hermitian_defect,
    torsion_at, torsion_one_one,
};
use super::frame::{build_unitary_frame, UnitaryFrame};
use super::modified::ModifiedCurvature;
use crate::error::{Error, Result};
use crate::geometry::spectral::Spectrum;
use crate::geometry::{
    AlmostComplexField, FormField, MatrixField, MetricField, NijenhuisField, PeriodicGrid,
    ScalarField, TwoFormField,
};

/// Index pairs `a < b` in lexicographic order.
pub fn pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            out.push((a, b));
        }
    }
    out
}

/// Exterior derivative of complex 1-forms stored `forms[f * d + a]`; result
/// stored in pair slots `out[f * P + s]`.
fn d_complex(grid: &PeriodicGrid, forms: &[Vec<C>]) -> Vec<Vec<C>> {
    let d = grid.real_dim();
    let ps = pairs(d);
    let count = forms.len() / d;
    let mut out = vec![vec![C::new(0.0, 0.0); grid.len()]; count * ps.len()];
    for f in 0..count {
        for a in 0..d {
            let spec = Spectrum::of_complex(grid, &forms[f * d + a]);
            for b in 0..d {
                if a == b {
                    continue;
                }
                let der = spec.derivative(b);
                // (dα)_{ab} = ∂_a α_b − ∂_b α_a
                let (slot, sign) = if a < b {
                    (ps.iter().position(|&q| q == (a, b)).unwrap(), -1.0)
                } else {
                    (ps.iter().position(|&q| q == (b, a)).unwrap(), 1.0)
                };
                for (o, v) in out[f * ps.len() + slot].iter_mut().zip(der) {
                    *o += v * sign;
                }
            }
        }
    }
    out
}

fn full_at(store: &[Vec<C>], base: usize, ps: &[(usize, usize)], d: usize, p: usize) -> DMatrix<C> {
    let mut m = DMatrix::zeros(d, d);
    for (s, &(a, b)) in ps.iter().enumerate() {
        let v = store[base + s][p];
        m[(a, b)] = v;
        m[(b, a)] = -v;
    }
    m
}

/// Frame, canonical connection forms, torsion and curvature of `(g, J)`.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    grid: PeriodicGrid,
    frame: UnitaryFrame,
    /// `gamma[(i * n + j) * d + a]`
    gamma: Vec<Vec<C>>,
    /// `torsion[i * P + s]`
    torsion: Vec<Vec<C>>,
    /// `psi[(i * n + j) * P + s]`
    psi: Vec<Vec<C>>,
}

impl CurvatureBundle {
    pub fn compute(g: &MetricField, j: &AlmostComplexField) -> Result<Self> {
        let frame = build_unitary_frame(g, j)?;
        let grid = *frame.grid();
        let gamma = canonical_connection(&frame)?;
        let (torsion, psi) = torsion_curvature(&frame, &gamma);
        Ok(Self {
            grid,
            frame,
            gamma,
            torsion,
            psi,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn frame(&self) -> &UnitaryFrame {
        &self.frame
    }

    fn n(&self) -> usize {
        self.grid.complex_dim()
    }

    fn d(&self) -> usize {
        self.grid.real_dim()
    }

    pub fn gamma_at(&self, p: usize) -> Vec<C> {
        self.gamma.iter().map(|c| c[p]).collect()
    }

    pub fn torsion_at(&self, p: usize) -> Vec<DMatrix<C>> {
        let ps = pairs(self.d());
        (0..self.n())
            .map(|i| full_at(&self.torsion, i * ps.len(), &ps, self.d(), p))
            .collect()
    }

    /// `Ψ^i_j` at one point, index `i * n + j`.
    pub fn curvature_at(&self, p: usize) -> Vec<DMatrix<C>> {
        let ps = pairs(self.d());
        let n = self.n();
        (0..n * n)
            .map(|ij| full_at(&self.psi, ij * ps.len(), &ps, self.d(), p))
            .collect()
    }

    /// `max |Γ^i_j + conj(Γ^j_i)|` over the grid.
    pub fn skew_hermitian_defect(&self) -> f64 {
        (0..self.grid.len())
            .map(|p| skew_hermitian_defect(&self.gamma_at(p), self.n(), self.d()))
            .fold(0.0, f64::max)
    }

    /// `max |Ψ^i_j + conj(Ψ^j_i)|` over the grid.
    pub fn curvature_skew_defect(&self) -> f64 {
        let n = self.n();
        let np = pairs(self.d()).len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for s in 0..np {
                    let a = &self.psi[(i * n + j) * np + s];
                    let b = &self.psi[(j * n + i) * np + s];
                    for p in 0..self.grid.len() {
                        worst = worst.max((a[p] + b[p].conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// `max |Θ^i(e_j, ē_k)|`, zero for the canonical connection.
    pub fn torsion_one_one_defect(&self) -> f64 {
        (0..self.grid.len())
            .map(|p| torsion_one_one(&self.torsion_at(p), &self.frame.e_at(p)))
            .fold(0.0, f64::max)
    }

    /// Largest torsion coefficient; vanishes for Kähler data.
    pub fn torsion_max(&self) -> f64 {
        self.torsion
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max |Θ^i(ē_j, ē_k) − ¼ θ^i(N(ē_j, ē_k))|`.
    pub fn nijenhuis_mismatch(&self, nij: &NijenhuisField) -> f64 {
        let n = self.n();
        let d = self.d();
        let mut worst: f64 = 0.0;
        for p in 0..self.grid.len() {
            let e = self.frame.e_at(p);
            let th = self.frame.theta_at(p);
            let tor = self.torsion_at(p);
            for j in 0..n {
                for k in 0..n {
                    let (zj, zk) = (conj_column(&e, j), conj_column(&e, k));
                    // N(ē_j, ē_k) extended complex-bilinearly
                    let mut v = vec![C::new(0.0, 0.0); d];
                    for (c, vc) in v.iter_mut().enumerate() {
                        for a in 0..d {
                            for b in 0..d {
                                *vc += zj[a] * zk[b] * nij.component(c, a, b)[p];
                            }
                        }
                    }
                    for i in 0..n {
                        let contracted: C = (0..d).map(|c| th[(i, c)] * v[c]).sum();
                        let lhs = eval2(&tor[i], &zj, &zk);
                        worst = worst.max((lhs - contracted * 0.25).norm());
                    }
                }
            }
        }
        worst
    }

    fn trace_psi(&self) -> Vec<Vec<C>> {
        let n = self.n();
        let np = pairs(self.d()).len();
        (0..np)
            .map(|s| {
                (0..self.grid.len())
                    .map(|p| (0..n).map(|i| self.psi[(i * n + i) * np + s][p]).sum())
                    .collect()
            })
            .collect()
    }

    /// `Ric = √−1 Σ_i Ψ^i_i` as a real 2-form.
    pub fn ricci_form(&self) -> TwoFormField {
        let d = self.d();
        let ps = pairs(d);
        let tr = self.trace_psi();
        let mut comps = vec![vec![0.0; self.grid.len()]; d * d];
        for (s, &(a, b)) in ps.iter().enumerate() {
            comps[a * d + b] = tr[s].iter().map(|z| -z.im).collect();
            comps[b * d + a] = tr[s].iter().map(|z| z.im).collect();
        }
        let m = MatrixField::from_components(self.grid, comps).expect("shape");
        TwoFormField::new(m).expect("antisymmetric by construction")
    }

    /// `max |Re Σ_i Ψ^i_i|`: how far `√−1 Ψ^i_i` is from real.
    pub fn ricci_imaginary_residue(&self) -> f64 {
        self.trace_psi()
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.re.abs()))
    }

    /// `max |d Ric|`.
    pub fn chern_closedness(&self) -> f64 {
        if self.n() == 1 {
            // 3-forms vanish on a real surface
            return 0.0;
        }
        FormField::from_two_form(&self.ricci_form())
            .exterior_derivative()
            .expect("degree 3 fits")
            .max_abs()
    }

    /// `∫ Ric ∧ ω̃^{n−1}`.
    pub fn integrated_ricci(&self, omega: &TwoFormField) -> Result<f64> {
        let ric = FormField::from_two_form(&self.ricci_form());
        let w = FormField::from_two_form(omega);
        ric.wedge(&w.power(self.n() - 1)?)?.integrate_top()
    }

    pub fn modified_curvature(&self) -> ModifiedCurvature {
        let n = self.n();
        let mut comps = vec![vec![C::new(0.0, 0.0); self.grid.len()]; n * n * n * n];
        for p in 0..self.grid.len() {
            let r = modified_at(&self.curvature_at(p), &self.torsion_at(p), &self.frame.e_at(p));
            for (c, v) in comps.iter_mut().zip(r) {
                c[p] = v;
            }
        }
        ModifiedCurvature::new(self.grid, comps)
    }
}

/// Connection 1-forms `Γ^i_j` from a frame, `out[(i * n + j) * d + a]`.
pub fn canonical_connection(frame: &UnitaryFrame) -> Result<Vec<Vec<C>>> {
    let grid = *frame.grid();
    let n = grid.complex_dim();
    let d = grid.real_dim();
    let ps = pairs(d);
    let theta: Vec<Vec<C>> = (0..n)
        .flat_map(|i| (0..d).map(move |a| (i, a)))
        .map(|(i, a)| frame.coframe(i, a).to_vec())
        .collect();
    let dtheta = d_complex(&grid, &theta);
    let mut gamma = vec![vec![C::new(0.0, 0.0); grid.len()]; n * n * d];
    for p in 0..grid.len() {
        let dt: Vec<DMatrix<C>> = (0..n).map(|i| full_at(&dtheta, i * ps.len(), &ps, d, p)).collect();
        let g = connection_at(&frame.e_at(p), &frame.theta_at(p), &dt);
        if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::DegenerateFrame { point: p });
        }
        for (c, v) in gamma.iter_mut().zip(g) {
            c[p] = v;
        }
    }
    Ok(gamma)
}

/// Torsion `Θ^i` and curvature `Ψ^i_j` in pair storage.
pub fn torsion_curvature(frame: &UnitaryFrame, gamma: &[Vec<C>]) -> (Vec<Vec<C>>, Vec<Vec<C>>) {
    let grid = *frame.grid();
    let n = grid.complex_dim();
    let d = grid.real_dim();
    let ps = pairs(d);
    let np = ps.len();
    let theta: Vec<Vec<C>> = (0..n)
        .flat_map(|i| (0..d).map(move |a| (i, a)))
        .map(|(i, a)| frame.coframe(i, a).to_vec())
        .collect();
    let dtheta = d_complex(&grid, &theta);
    let dgamma = d_complex(&grid, gamma);
    let zero = vec![C::new(0.0, 0.0); grid.len()];
    let mut torsion = vec![zero.clone(); n * np];
    let mut psi = vec![zero; n * n * np];
    for p in 0..grid.len() {
        let g: Vec<C> = gamma.iter().map(|c| c[p]).collect();
        let dt: Vec<DMatrix<C>> = (0..n).map(|i| full_at(&dtheta, i * np, &ps, d, p)).collect();
        let dg: Vec<DMatrix<C>> = (0..n * n).map(|ij| full_at(&dgamma, ij * np, &ps, d, p)).collect();
        let tor = torsion_at(&frame.theta_at(p), &dt, &g);
        let cur = curvature_at(&g, &dg, n);
        for i in 0..n {
            for (s, &(a, b)) in ps.iter().enumerate() {
                torsion[i * np + s][p] = tor[i][(a, b)];
            }
        }
        for ij in 0..n * n {
            for (s, &(a, b)) in ps.iter().enumerate() {
                psi[ij * np + s][p] = cur[ij][(a, b)];
            }
        }
    }
    (torsion, psi)
}

/// `F = log(det_C g̃ / det_C g)`, half the log of the real determinant ratio.
pub fn log_volume_ratio(g: &MetricField, g_tilde: &MetricField) -> ScalarField {
    let a = g.determinant();
    let b = g_tilde.determinant();
    b.zip_map(&a, |x, y| 0.5 * (x / y).ln())
}

/// `½ d(J dF)`, with `J` acting on 1-forms by `α ↦ α ∘ J`.
pub fn half_d_jdf(j: &AlmostComplexField, f: &ScalarField) -> Result<TwoFormField> {
    let grid = *f.grid();
    let d = grid.real_dim();
    let df: Vec<Vec<f64>> = (0..d).map(|a| f.derivative(a).map(|s| s.into_values())).collect::<Result<_>>()?;
    let comps: Vec<Vec<f64>> = (0..d)
        .map(|b| {
            (0..grid.len())
                .map(|p| (0..d).map(|a| df[a][p] * j.component(a, b)[p]).sum())
                .collect()
        })
        .collect();
    let jdf = FormField::one_form(grid, comps)?;
    jdf.exterior_derivative()?.scaled(0.5).to_two_form()
}

/// `max |½ d(J dF) − Ric(g̃, J) + Ric(g, J)|` with `F` as given.
pub fn ric_transformation_check(
    g: &MetricField,
    g_tilde: &MetricField,
    j: &AlmostComplexField,
    f: &ScalarField,
) -> Result<f64> {
    let lhs = half_d_jdf(j, f)?;
    let r1 = CurvatureBundle::compute(g_tilde, j)?.ricci_form();
    let r0 = CurvatureBundle::compute(g, j)?.ricci_form();
    Ok(lhs.sub(&r1).add(&r0).inner().max_abs())
}
