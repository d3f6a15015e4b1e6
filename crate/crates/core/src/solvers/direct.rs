use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{BasisSet, LinWeights};

/// Solves the normal equations `(A^T A) w = A^T x_h` with a Cholesky
/// factorisation. Weights are on the normalised columns.
pub fn solve_direct(basis: &BasisSet, x: &[f64]) -> Result<LinWeights> {
    let len = basis.frame_len();
    if x.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: x.len(),
        });
    }
    let cols = basis.num_columns();
    let a = DMatrix::from_fn(len, cols, |n, j| basis.column(j)[n]);
    let gram = a.tr_mul(&a);
    let rhs = a.tr_mul(&DVector::from_column_slice(x));
    let chol = gram.cholesky().ok_or(Error::SingularSystem)?;
    let w = chol.solve(&rhs);
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(LinWeights::from_flat(w.as_slice()))
}
