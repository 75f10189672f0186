//! Restarted GMRES and preconditioned CG on flat vectors.

use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct KrylovOptions {
    pub rel_tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            restart: 40,
            max_iter: 400,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KrylovOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub rel_residual: f64,
}

/// Right-preconditioned restarted GMRES for `A x = b`, starting from zero.
pub fn gmres(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    precond: &dyn Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    opts: KrylovOptions,
) -> Result<KrylovOutcome> {
    let len = b.len();
    let bnorm = norm(b);
    let mut x = vec![0.0; len];
    if bnorm == 0.0 {
        return Ok(KrylovOutcome {
            x,
            iterations: 0,
            rel_residual: 0.0,
        });
    }
    let m = opts.restart.max(1);
    let mut total = 0;
    let mut rel = 1.0;
    while total < opts.max_iter {
        let ax = apply(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        rel = beta / bnorm;
        if rel <= opts.rel_tol {
            break;
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|ri| ri / beta).collect()];
        let mut z: Vec<Vec<f64>> = Vec::new();
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut s = vec![0.0; m + 1];
        s[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            let zk = precond(&v[k]);
            let mut w = apply(&zk);
            z.push(zk);
            for i in 0..=k {
                h[i][k] = dot(&w, &v[i]);
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= h[i][k] * vj;
                }
            }
            // one reorthogonalization pass for stability
            for i in 0..=k {
                let c = dot(&w, &v[i]);
                h[i][k] += c;
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= c * vj;
                }
            }
            h[k + 1][k] = norm(&w);
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            s[k + 1] = -sn[k] * s[k];
            s[k] *= cs[k];
            k_used = k + 1;
            total += 1;
            rel = s[k + 1].abs() / bnorm;
            let hk1 = norm(&w);
            if rel <= opts.rel_tol || total >= opts.max_iter || hk1 == 0.0 {
                break;
            }
            v.push(w.iter().map(|wj| wj / hk1).collect());
        }
        // back substitution
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut acc = s[i];
            for j in i + 1..k_used {
                acc -= h[i][j] * y[j];
            }
            y[i] = acc / h[i][i];
        }
        for (yi, zi) in y.iter().zip(&z) {
            for (xj, zj) in x.iter_mut().zip(zi) {
                *xj += yi * zj;
            }
        }
    }
    let ax = apply(&x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let true_rel = norm(&r) / bnorm;
    if true_rel > opts.rel_tol.max(1e-14) * 10.0 {
        return Err(Error::LinearSolveFailed {
            residual: true_rel.max(rel),
            iterations: total,
        });
    }
    Ok(KrylovOutcome {
        x,
        iterations: total,
        rel_residual: true_rel,
    })
}

/// Preconditioned conjugate gradients for a symmetric positive (semi)definite
/// `A`, starting from zero.
pub fn conjugate_gradient(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    precond: &dyn Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    opts: KrylovOptions,
) -> Result<KrylovOutcome> {
    let bnorm = norm(b);
    let mut x = vec![0.0; b.len()];
    if bnorm == 0.0 {
        return Ok(KrylovOutcome {
            x,
            iterations: 0,
            rel_residual: 0.0,
        });
    }
    let mut r = b.to_vec();
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 1..=opts.max_iter {
        let ap = apply(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rel = norm(&r) / bnorm;
        if rel <= opts.rel_tol {
            return Ok(KrylovOutcome {
                x,
                iterations: it,
                rel_residual: rel,
            });
        }
        z = precond(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..p.len() {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::LinearSolveFailed {
        residual: norm(&r) / bnorm,
        iterations: opts.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = 3.0 * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < n {
                    v -= 0.5 * x[i + 1];
                }
                v
            })
            .collect()
    }

    #[test]
    fn gmres_solves_nonsymmetric_system() {
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let out = gmres(&tridiag, &|v| v.to_vec(), &b, KrylovOptions { restart: 7, ..Default::default() }).unwrap();
        let r = tridiag(&out.x);
        let err = r.iter().zip(&b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn cg_solves_spd_system() {
        let sym = |x: &[f64]| -> Vec<f64> {
            let n = x.len();
            (0..n)
                .map(|i| {
                    let mut v = 2.5 * x[i];
                    if i > 0 {
                        v -= x[i - 1];
                    }
                    if i + 1 < n {
                        v -= x[i + 1];
                    }
                    v
                })
                .collect()
        };
        let b: Vec<f64> = (0..40).map(|i| (i as f64 * 0.3).cos()).collect();
        let out = conjugate_gradient(&sym, &|v| v.to_vec(), &b, KrylovOptions::default()).unwrap();
        let err = sym(&out.x).iter().zip(&b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }
}
