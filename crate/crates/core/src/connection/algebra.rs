//! Pointwise structure-equation algebra in a unitary frame.
//!
//! 2-forms are full antisymmetric `d × d` complex matrices `w` with
//! `w(X, Y) = Xᵀ w Y`; 1-forms are length-`d` rows. The connection convention
//! is `∇e_j = Σ_i Γ^i_j e_i`, with
//! `dθ^i = −Γ^i_j ∧ θ^j + Θ^i` and `dΓ^i_j = −Γ^i_k ∧ Γ^k_j + Ψ^i_j`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

/// Connection 1-forms at one point, `gamma[(i * n + j) * d + a]`.
pub type PointGamma = Vec<C>;

/// `w(X, Y)` for a 2-form matrix and complex vectors.
pub fn eval2(w: &DMatrix<C>, x: &[C], y: &[C]) -> C {
    let d = w.nrows();
    let mut s = C::new(0.0, 0.0);
    for a in 0..d {
        if x[a] == C::new(0.0, 0.0) {
            continue;
        }
        for b in 0..d {
            s += x[a] * w[(a, b)] * y[b];
        }
    }
    s
}

/// Antisymmetric matrix of `α ∧ β`.
pub fn wedge11(alpha: &[C], beta: &[C]) -> DMatrix<C> {
    let d = alpha.len();
    DMatrix::from_fn(d, d, |a, b| alpha[a] * beta[b] - alpha[b] * beta[a])
}

pub fn column(m: &DMatrix<C>, i: usize) -> Vec<C> {
    m.column(i).iter().copied().collect()
}

pub fn conj_column(m: &DMatrix<C>, i: usize) -> Vec<C> {
    m.column(i).iter().map(|z| z.conj()).collect()
}

/// The skew-Hermitian connection whose torsion has no (1,1)-part.
///
/// With `Q^i_{jk} = dθ^i(e_j, ē_k)` the unique solution is
/// `Γ^i_j = Σ_k (−conj(Q^j_{ik})) θ^k + Q^i_{jk} θ̄^k`.
pub fn connection_at(e: &DMatrix<C>, theta: &DMatrix<C>, dtheta: &[DMatrix<C>]) -> PointGamma {
    let d = e.nrows();
    let n = e.ncols();
    let ecols: Vec<Vec<C>> = (0..n).map(|i| column(e, i)).collect();
    let ebar: Vec<Vec<C>> = (0..n).map(|i| conj_column(e, i)).collect();
    let mut q = vec![C::new(0.0, 0.0); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                q[(i * n + j) * n + k] = eval2(&dtheta[i], &ecols[j], &ebar[k]);
            }
        }
    }
    let mut gamma = vec![C::new(0.0, 0.0); n * n * d];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a_coef = -q[(j * n + i) * n + k].conj();
                let b_coef = q[(i * n + j) * n + k];
                for a in 0..d {
                    gamma[(i * n + j) * d + a] +=
                        a_coef * theta[(k, a)] + b_coef * theta[(k, a)].conj();
                }
            }
        }
    }
    gamma
}

fn gamma_row(gamma: &[C], n: usize, d: usize, i: usize, j: usize) -> &[C] {
    let s = (i * n + j) * d;
    &gamma[s..s + d]
}

/// `Θ^i = dθ^i + Γ^i_j ∧ θ^j`.
pub fn torsion_at(theta: &DMatrix<C>, dtheta: &[DMatrix<C>], gamma: &[C]) -> Vec<DMatrix<C>> {
    let n = theta.nrows();
    let d = theta.ncols();
    (0..n)
        .map(|i| {
            let mut t = dtheta[i].clone();
            for j in 0..n {
                let th: Vec<C> = theta.row(j).iter().copied().collect();
                t += wedge11(gamma_row(gamma, n, d, i, j), &th);
            }
            t
        })
        .collect()
}

/// `Ψ^i_j = dΓ^i_j + Γ^i_k ∧ Γ^k_j`; `dgamma[i * n + j]`.
pub fn curvature_at(gamma: &[C], dgamma: &[DMatrix<C>], n: usize) -> Vec<DMatrix<C>> {
    let d = dgamma[0].nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut psi = dgamma[i * n + j].clone();
            for k in 0..n {
                psi += wedge11(gamma_row(gamma, n, d, i, k), gamma_row(gamma, n, d, k, j));
            }
            out.push(psi);
        }
    }
    out
}

/// `max_{i,j} |Γ^i_j + conj(Γ^j_i)|` at one point.
pub fn skew_hermitian_defect(gamma: &[C], n: usize, d: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for a in 0..d {
                let v = gamma[(i * n + j) * d + a] + gamma[(j * n + i) * d + a].conj();
                worst = worst.max(v.norm());
            }
        }
    }
    worst
}

/// `max |Θ^i(e_j, ē_k)|`: the (1,1)-part of the torsion.
pub fn torsion_one_one(torsion: &[DMatrix<C>], e: &DMatrix<C>) -> f64 {
    let n = e.ncols();
    let mut worst: f64 = 0.0;
    for t in torsion {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max(eval2(t, &column(e, j), &conj_column(e, k)).norm());
            }
        }
    }
    worst
}

/// `N^i_{j̄k̄} = ½ Θ^i(ē_j, ē_k)`, index `(i * n + j) * n + k`.
pub fn nijenhuis_frame(torsion: &[DMatrix<C>], e: &DMatrix<C>) -> Vec<C> {
    let n = e.ncols();
    let mut out = vec![C::new(0.0, 0.0); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[(i * n + j) * n + k] =
                    eval2(&torsion[i], &conj_column(e, j), &conj_column(e, k)) * 0.5;
            }
        }
    }
    out
}

/// `R_{ij̄kl̄} = Ψ^j_i(e_k, ē_l) + 4 Σ_r N^r_{l̄j̄} conj(N^i_{r̄k̄})`, index
/// `((i * n + j) * n + k) * n + l`.
pub fn modified_at(psi: &[DMatrix<C>], torsion: &[DMatrix<C>], e: &DMatrix<C>) -> Vec<C> {
    let n = e.ncols();
    let nij = nijenhuis_frame(torsion, e);
    let nn = |i: usize, j: usize, k: usize| nij[(i * n + j) * n + k];
    let mut out = vec![C::new(0.0, 0.0); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = eval2(&psi[j * n + i], &column(e, k), &conj_column(e, l));
                    for r in 0..n {
                        v += nn(r, l, j) * nn(i, r, k).conj() * 4.0;
                    }
                    out[((i * n + j) * n + k) * n + l] = v;
                }
            }
        }
    }
    out
}

/// `R_{ij̄kl̄} X^i X̄^j Y^k Ȳ^l`.
pub fn griffiths_form(tensor: &[C], n: usize, x: &[C], y: &[C]) -> f64 {
    let mut s = C::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let xx = x[i] * x[j].conj();
            for k in 0..n {
                for l in 0..n {
                    s += tensor[((i * n + j) * n + k) * n + l] * xx * y[k] * y[l].conj();
                }
            }
        }
    }
    s.re
}
