use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SparseOperator;
use crate::{Error, Result};

/// Largest dimension handed to the dense eigensolver.
pub const DENSE_LIMIT: usize = 4096;

/// Row-major dense matrix of `op`, built column by column.
pub fn dense_matrix(op: &SparseOperator) -> Result<Vec<Complex64>> {
    let n = op.dimension();
    if n > DENSE_LIMIT {
        return Err(Error::ResourceLimit {
            requested: n as u128,
            budget: DENSE_LIMIT as u128,
        });
    }
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        op.apply(&e, &mut col);
        for i in 0..n {
            m[i * n + j] = col[i];
        }
        e[j] = Complex64::new(0.0, 0.0);
    }
    Ok(m)
}

/// Full spectrum of a Hermitian operator, ascending.
pub fn dense_spectrum(op: &SparseOperator) -> Result<Vec<f64>> {
    if !op.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = op.dimension();
    let m = DMatrix::from_row_slice(n, n, &dense_matrix(op)?);
    let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}
