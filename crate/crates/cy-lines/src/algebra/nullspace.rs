//! Tolerance-based numeric nullspace via rank-revealing SVD.

use nalgebra::{DMatrix, DVector};

use super::Scalar;

/// Orthonormal basis of the nullspace of `m`, treating singular values below
/// `tol` times the largest singular value as zero. An empty list means the
/// nullspace is trivial.
pub fn numeric_nullspace(m: &DMatrix<Scalar>, tol: f64) -> Vec<DVector<Scalar>> {
    let cols = m.ncols();
    // Pad with zero rows so the thin SVD carries a complete right factor.
    let work = if m.nrows() < cols {
        let mut padded = DMatrix::<Scalar>::zeros(cols, cols);
        padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut basis = Vec::new();
    for i in 0..cols {
        let sigma = if i < svd.singular_values.len() {
            svd.singular_values[i]
        } else {
            0.0
        };
        if sigma <= tol * sigma_max {
            basis.push(v_t.row(i).transpose().map(|z| z.conj()));
        }
    }
    basis
}

/// Numerical rank of `m` with the same cutoff convention.
pub fn numeric_rank(m: &DMatrix<Scalar>, tol: f64) -> usize {
    let sv = m.clone().singular_values();
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * sigma_max).count()
}
