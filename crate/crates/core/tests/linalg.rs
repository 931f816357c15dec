use schrograph_core::linalg::*;
use schrograph_core::*;

#[test]
fn null_space_of_wide_matrix() {
    let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
    let ns = null_space(&m);
    assert_eq!(ns.ncols(), 2);
    assert!((&m * &ns).norm() < 1e-14);
    assert!((ns.transpose() * &ns - DMatrix::identity(2, 2)).norm() < 1e-14);
}

#[test]
fn rank_ignores_roundoff() {
    let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0 + 1e-15]);
    assert_eq!(rank(&m), 1);
    assert_eq!(column_space(&m).ncols(), 1);
}

#[test]
fn eigen_sorted() {
    let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let (vals, vecs) = sym_eigen(&m);
    assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    let r = &m * vecs.column(0) + vecs.column(0);
    assert!(r.norm() < 1e-14);
    assert_eq!(sym_eigenvalues(&m).len(), 2);
}
