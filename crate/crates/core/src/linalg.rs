//! Thin dense-matrix helpers over nalgebra: sorted SVDs, rank decisions, null spaces.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen, SVD};

use crate::tol;

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

fn threshold(values: &[f64]) -> f64 {
    values.first().copied().unwrap_or(0.0) * tol::RANK_REL
}

/// Numerical rank with the crate-wide relative threshold.
pub fn rank(m: &DMatrix<f64>) -> usize {
    let values = singular_values(m);
    let thr = threshold(&values);
    values.iter().filter(|&&s| s > thr && s > 0.0).count()
}

/// Orthonormal basis (as columns) of the right null space.
pub fn null_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    // Zero rows leave the null space unchanged and make V square.
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested V");
    let values = svd.singular_values.as_slice();
    let thr = threshold(values);
    let keep: Vec<usize> = (0..values.len()).filter(|&i| !(values[i] > thr && values[i] > 0.0)).collect();
    let mut basis = DMatrix::zeros(cols, keep.len());
    for (out, &i) in keep.iter().enumerate() {
        basis.set_column(out, &v_t.row(i).transpose());
    }
    basis
}

/// Orthonormal basis (as columns) of the column space.
pub fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("requested U");
    let values = svd.singular_values.as_slice();
    let thr = threshold(values);
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > thr && values[i] > 0.0).collect();
    let mut basis = DMatrix::zeros(m.nrows(), keep.len());
    for (out, &i) in keep.iter().enumerate() {
        basis.set_column(out, &u.column(i));
    }
    basis
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a symmetric matrix.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (out, &i) in order.iter().enumerate() {
        vectors.set_column(out, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}
