//! Krylov solvers.

use super::precond::{Identity, Preconditioner};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Outcome of a converged solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Final `‖b − A x‖₂ / ‖b‖₂`.
    pub relative_residual: f64,
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual(a: &CsrMatrix, b: &[f64], x: &[f64], r: &mut [f64]) {
    a.matvec_into(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
}

fn check_dims(a: &CsrMatrix, b: &[f64], x: &[f64]) -> Result<()> {
    if a.nrows() != a.ncols() || b.len() != a.nrows() || x.len() != a.ncols() {
        return Err(Error::Dimension(format!(
            "system {}×{} with rhs {} and guess {}",
            a.nrows(),
            a.ncols(),
            b.len(),
            x.len()
        )));
    }
    Ok(())
}

/// Conjugate gradients for symmetric positive definite `a`, starting from `x`.
pub fn cg(a: &CsrMatrix, b: &[f64], x: &mut [f64], rel_tol: f64, max_iter: usize) -> Result<SolveStats> {
    check_dims(a, b, x)?;
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolveStats { iterations: 0, relative_residual: 0.0 });
    }
    let n = b.len();
    let mut r = vec![0.0; n];
    residual(a, b, x, &mut r);
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let tol = rel_tol * bnorm;
    for it in 0..=max_iter {
        if rr.sqrt() <= tol {
            return Ok(SolveStats { iterations: it, relative_residual: rr.sqrt() / bnorm });
        }
        if it == max_iter {
            break;
        }
        a.matvec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::Breakdown { iterations: it });
        }
        let alpha = rr / pap;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for k in 0..n {
            p[k] = r[k] + beta * p[k];
        }
    }
    Err(Error::NotConverged { iterations: max_iter, residual: rr.sqrt() / bnorm })
}

/// BiCGStab for general square `a`, starting from `x`.
///
/// Convergence is confirmed on the true residual; if the recursively updated
/// residual drifted, the iteration restarts from the current iterate.
pub fn bicgstab(a: &CsrMatrix, b: &[f64], x: &mut [f64], rel_tol: f64, max_iter: usize) -> Result<SolveStats> {
    bicgstab_impl(a, b, x, &Identity, rel_tol, max_iter)
}

/// BiCGStab right-preconditioned by `precond`.
pub fn bicgstab_preconditioned(
    a: &CsrMatrix,
    b: &[f64],
    x: &mut [f64],
    precond: &dyn Preconditioner,
    rel_tol: f64,
    max_iter: usize,
) -> Result<SolveStats> {
    bicgstab_impl(a, b, x, precond, rel_tol, max_iter)
}

fn bicgstab_impl(a: &CsrMatrix, b: &[f64], x: &mut [f64], precond: &dyn Preconditioner, rel_tol: f64, max_iter: usize) -> Result<SolveStats> {
    check_dims(a, b, x)?;
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolveStats { iterations: 0, relative_residual: 0.0 });
    }
    let n = b.len();
    let tol = rel_tol * bnorm;
    let mut r = vec![0.0; n];
    residual(a, b, x, &mut r);
    if norm2(&r) <= tol {
        return Ok(SolveStats { iterations: 0, relative_residual: norm2(&r) / bnorm });
    }
    let mut r_hat = r.clone();
    let mut p = r.clone();
    let mut p_hat = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut s_hat = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut rho = dot(&r_hat, &r);
    let mut it = 0;
    while it < max_iter {
        it += 1;
        precond.apply(&p, &mut p_hat);
        a.matvec_into(&p_hat, &mut v);
        let rv = dot(&r_hat, &v);
        if rv == 0.0 || !rv.is_finite() {
            return Err(Error::Breakdown { iterations: it });
        }
        let alpha = rho / rv;
        for k in 0..n {
            s[k] = r[k] - alpha * v[k];
        }
        if norm2(&s) <= tol {
            for k in 0..n {
                x[k] += alpha * p_hat[k];
            }
            residual(a, b, x, &mut r);
            let res = norm2(&r);
            if res <= tol {
                return Ok(SolveStats { iterations: it, relative_residual: res / bnorm });
            }
            r_hat.copy_from_slice(&r);
            p.copy_from_slice(&r);
            rho = dot(&r_hat, &r);
            continue;
        }
        precond.apply(&s, &mut s_hat);
        a.matvec_into(&s_hat, &mut t);
        let tt = dot(&t, &t);
        if tt == 0.0 || !tt.is_finite() {
            return Err(Error::Breakdown { iterations: it });
        }
        let omega = dot(&t, &s) / tt;
        for k in 0..n {
            x[k] += alpha * p_hat[k] + omega * s_hat[k];
            r[k] = s[k] - omega * t[k];
        }
        if norm2(&r) <= tol {
            residual(a, b, x, &mut r);
            let res = norm2(&r);
            if res <= tol {
                return Ok(SolveStats { iterations: it, relative_residual: res / bnorm });
            }
            r_hat.copy_from_slice(&r);
            p.copy_from_slice(&r);
            rho = dot(&r_hat, &r);
            continue;
        }
        if omega == 0.0 {
            return Err(Error::Breakdown { iterations: it });
        }
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            return Err(Error::Breakdown { iterations: it });
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for k in 0..n {
            p[k] = r[k] + beta * (p[k] - omega * v[k]);
        }
    }
    residual(a, b, x, &mut r);
    Err(Error::NotConverged { iterations: max_iter, residual: norm2(&r) / bnorm })
}
