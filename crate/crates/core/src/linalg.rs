//! Small dense helpers on row-major `Vec<Vec<f64>>` matrices, backed by nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn to_dmatrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub(crate) fn from_dmatrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub(crate) fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub(crate) fn quad_form(m: &[Vec<f64>], v: &[f64]) -> f64 {
    dot(v, &mat_vec(m, v))
}

/// Eigenvalues of the symmetrised matrix `(m + mᵀ)/2`.
pub(crate) fn sym_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let a = to_dmatrix(m);
    let s = (&a + a.transpose()) * 0.5;
    SymmetricEigen::new(s).eigenvalues.iter().copied().collect()
}

/// A factor `L` with `L Lᵀ = Q` for a positive semidefinite `Q`; tiny negative
/// eigenvalues from roundoff are clipped to zero.
pub(crate) fn psd_sqrt(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let a = to_dmatrix(m);
    let s = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(s);
    let n = eig.eigenvalues.len();
    let mut l = eig.eigenvectors.clone();
    for j in 0..n {
        let lam = eig.eigenvalues[j].max(0.0).sqrt();
        for i in 0..n {
            l[(i, j)] *= lam;
        }
    }
    from_dmatrix(&l)
}

pub(crate) fn inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    to_dmatrix(m).try_inverse().map(|inv| from_dmatrix(&inv))
}

/// Least-squares solution of `x ≈ Σ c_i g_i` for the rows `g_i`.
pub(crate) fn lstsq_coords(generators: &[Vec<f64>], x: &[f64]) -> Option<Vec<f64>> {
    let g = to_dmatrix(generators); // k × n
    let gram = &g * g.transpose();
    let rhs = &g * nalgebra::DVector::from_column_slice(x);
    gram.try_inverse().map(|inv| (inv * rhs).iter().copied().collect())
}
