//! Preconditioners for the Krylov solvers.

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Approximate inverse applied as `dst = P⁻¹ src`.
pub trait Preconditioner {
    fn apply(&self, src: &[f64], dst: &mut [f64]);
}

/// No preconditioning.
pub struct Identity;

impl Preconditioner for Identity {
    fn apply(&self, src: &[f64], dst: &mut [f64]) {
        dst.copy_from_slice(src);
    }
}

/// Inverse of the diagonal.
pub struct Jacobi {
    inv: Vec<f64>,
}

impl Jacobi {
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        let inv = (0..a.nrows())
            .map(|i| {
                let d = a.get(i, i);
                if d != 0.0 && d.is_finite() {
                    Ok(1.0 / d)
                } else {
                    Err(Error::Breakdown { iterations: 0 })
                }
            })
            .collect::<Result<_>>()?;
        Ok(Jacobi { inv })
    }
}

impl Preconditioner for Jacobi {
    fn apply(&self, src: &[f64], dst: &mut [f64]) {
        for ((d, s), i) in dst.iter_mut().zip(src).zip(&self.inv) {
            *d = s * i;
        }
    }
}

/// Incomplete LU factorization with the sparsity pattern of the matrix.
pub struct Ilu0 {
    lu: CsrMatrix,
    diag: Vec<usize>,
}

impl Ilu0 {
    /// Factorizes a square matrix whose pattern contains the diagonal.
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows();
        let mut lu = a.clone();
        let diag: Vec<usize> = (0..n)
            .map(|i| lu.find(i, i).ok_or(Error::Breakdown { iterations: 0 }))
            .collect::<Result<_>>()?;
        let row_ptr = lu.row_ptr().to_vec();
        let col = lu.col_idx().to_vec();
        let mut marker = vec![usize::MAX; n];
        let vals = lu.values_mut();
        for i in 0..n {
            for k in row_ptr[i]..row_ptr[i + 1] {
                marker[col[k]] = k;
            }
            for k in row_ptr[i]..diag[i] {
                let c = col[k];
                let pivot = vals[diag[c]];
                if pivot == 0.0 || !pivot.is_finite() {
                    return Err(Error::Breakdown { iterations: 0 });
                }
                let lik = vals[k] / pivot;
                vals[k] = lik;
                for kk in diag[c] + 1..row_ptr[c + 1] {
                    let m = marker[col[kk]];
                    if m != usize::MAX {
                        vals[m] -= lik * vals[kk];
                    }
                }
            }
            for k in row_ptr[i]..row_ptr[i + 1] {
                marker[col[k]] = usize::MAX;
            }
            if vals[diag[i]] == 0.0 || !vals[diag[i]].is_finite() {
                return Err(Error::Breakdown { iterations: 0 });
            }
        }
        Ok(Ilu0 { lu, diag })
    }
}

impl Preconditioner for Ilu0 {
    fn apply(&self, src: &[f64], dst: &mut [f64]) {
        let rp = self.lu.row_ptr();
        let col = self.lu.col_idx();
        let v = self.lu.values();
        let n = src.len();
        for i in 0..n {
            let mut s = src[i];
            for k in rp[i]..self.diag[i] {
                s -= v[k] * dst[col[k]];
            }
            dst[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = dst[i];
            for k in self.diag[i] + 1..rp[i + 1] {
                s -= v[k] * dst[col[k]];
            }
            dst[i] = s / v[self.diag[i]];
        }
    }
}
