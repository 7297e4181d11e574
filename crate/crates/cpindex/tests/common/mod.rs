#![allow(dead_code)]

use cpindex::fixtures::{self, Fixture, Separation};
use cpindex::nalgebra::{DMatrix, SymmetricEigen};

/// Orthonormal basis of the null space, from a full SVD.
pub fn null_space(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max().max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= rel * smax).collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        out.set_column(c, &v_t.row(i).transpose());
    }
    out
}

/// The `k` right singular vectors of smallest singular value, and the ratio
/// `σ_k / σ_{k+1}` (ascending order) measuring how well they are separated.
pub fn smallest_right_vectors(m: &DMatrix<f64>, k: usize) -> (DMatrix<f64>, f64) {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut out = DMatrix::zeros(n, k);
    for (c, &i) in order[..k].iter().enumerate() {
        out.set_column(c, &v_t.row(i).transpose());
    }
    let gap = if k < n { svd.singular_values[order[k - 1]] / svd.singular_values[order[k]] } else { 0.0 };
    (out, gap)
}

/// `(n₊, n₋, nullity)` of a symmetric matrix.
pub fn inertia(m: &DMatrix<f64>, rel: f64) -> (usize, usize, usize) {
    if m.nrows() == 0 {
        return (0, 0, 0);
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let scale = eig.amax().max(1.0);
    let plus = eig.iter().filter(|&&e| e > rel * scale).count();
    let minus = eig.iter().filter(|&&e| e < -rel * scale).count();
    (plus, minus, eig.len() - plus - minus)
}

pub fn restrict(g: &DMatrix<f64>, basis: &DMatrix<f64>) -> DMatrix<f64> {
    basis.transpose() * g * basis
}

pub fn shifted(a: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    a - DMatrix::identity(a.nrows(), a.ncols()) * lambda
}

pub fn mixed(seed: u64, count: usize) -> Vec<Fixture> {
    fixtures::mixed(&mut fixtures::rng(seed), count, &Separation::default())
}
