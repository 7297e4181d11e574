//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn max_abs<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

pub fn check_square<T: Real>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

pub fn check_finite<T: Real>(m: &DMatrix<T>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn symmetrize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * T::lit(0.5)
}

/// Largest entry of `m − mᵀ` relative to the largest entry of `m`.
pub fn asymmetry<T: Real>(m: &DMatrix<T>) -> T {
    let scale = max_abs(m);
    if scale == T::zero() {
        return T::zero();
    }
    max_abs(&(m - m.transpose())) / scale
}

/// Thin SVD with singular values sorted in descending order.
pub struct SortedSvd<T: Real> {
    pub s: Vec<T>,
    /// Right singular vectors as columns, full square when built with [`full_svd`].
    pub v: DMatrix<T>,
}

fn sorted_from<T: Real>(svd: SVD<T, nalgebra::Dyn, nalgebra::Dyn>) -> Result<SortedSvd<T>> {
    let vt = svd.v_t.ok_or_else(|| Error::numeric("svd", "missing Vᵀ"))?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let s = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let v = DMatrix::from_fn(vt.ncols(), idx.len(), |r, c| vt[(idx[c], r)]);
    Ok(SortedSvd { s, v })
}

pub fn svd<T: Real>(m: &DMatrix<T>) -> Result<SortedSvd<T>> {
    check_finite(m)?;
    let svd = SVD::try_new(m.clone(), false, true, T::eps(), 0)
        .ok_or_else(|| Error::numeric("svd", "did not converge"))?;
    sorted_from(svd)
}

/// SVD whose `v` is a full orthogonal matrix (wide inputs are zero-padded).
pub fn full_svd<T: Real>(m: &DMatrix<T>) -> Result<SortedSvd<T>> {
    if m.nrows() >= m.ncols() {
        return svd(m);
    }
    let mut padded = DMatrix::zeros(m.ncols(), m.ncols());
    padded.rows_mut(0, m.nrows()).copy_from(m);
    svd(&padded)
}

pub fn singular_values<T: Real>(m: &DMatrix<T>) -> Result<Vec<T>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    check_finite(m)?;
    let mut s: Vec<T> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(s)
}

pub fn spectral_norm<T: Real>(m: &DMatrix<T>) -> Result<T> {
    Ok(singular_values(m)?.first().copied().unwrap_or_else(T::zero))
}

/// Numerical rank: singular values above `tol · max(σ_max, floor)`.
pub fn rank<T: Real>(m: &DMatrix<T>, tol: T, floor: T) -> Result<usize> {
    let s = singular_values(m)?;
    let scale = s.first().copied().unwrap_or_else(T::zero).max(floor);
    Ok(s.iter().filter(|&&x| x > tol * scale).count())
}

/// Orthonormal basis of the null space, threshold relative to `max(σ_max, floor)`.
pub fn null_space<T: Real>(m: &DMatrix<T>, tol: T, floor: T) -> Result<DMatrix<T>> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return Ok(DMatrix::identity(n, n));
    }
    let f = full_svd(m)?;
    let scale = f.s.first().copied().unwrap_or_else(T::zero).max(floor);
    let r = f.s.iter().filter(|&&x| x > tol * scale).count();
    Ok(f.v.columns(r, n - r).into_owned())
}

/// The `k` right singular vectors of smallest singular value.
pub fn smallest_right_vectors<T: Real>(m: &DMatrix<T>, k: usize) -> Result<(DMatrix<T>, Vec<T>)> {
    let n = m.ncols();
    let f = full_svd(m)?;
    let mut s = f.s.clone();
    s.resize(n, T::zero());
    Ok((f.v.columns(n - k, k).into_owned(), s))
}

/// Orthonormalise a full-rank frame (thin QR).
pub fn qr_frame<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    m.clone().qr().q()
}

pub fn mat_pow<T: Real>(m: &DMatrix<T>, k: usize) -> DMatrix<T> {
    let mut out = DMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
pub fn sym_eigen<T: Real>(m: &DMatrix<T>) -> Result<(Vec<T>, DMatrix<T>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    check_finite(m)?;
    let eig = SymmetricEigen::try_new(symmetrize(m), T::eps(), 0)
        .ok_or_else(|| Error::numeric("symmetric eigensolver", "did not converge"))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok((vals, vecs))
}

pub fn invert<T: Real>(m: &DMatrix<T>, what: &'static str) -> Result<DMatrix<T>> {
    m.clone()
        .try_inverse()
        .filter(|inv| inv.iter().all(|x| x.is_finite()))
        .ok_or_else(|| Error::numeric(what, "matrix is singular"))
}

pub fn block_diag<T: Real>(blocks: &[DMatrix<T>]) -> DMatrix<T> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn hstack<T: Real>(nrows: usize, parts: &[&DMatrix<T>]) -> DMatrix<T> {
    let m: usize = parts.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(nrows, m);
    let mut c = 0;
    for p in parts {
        out.view_mut((0, c), (nrows, p.ncols())).copy_from(*p);
        c += p.ncols();
    }
    out
}

pub fn diag<T: Real>(d: &[T]) -> DMatrix<T> {
    DMatrix::from_diagonal(&DVector::from_row_slice(d))
}

/// `[[0, I], [−I, 0]]` of size `2n`.
pub fn canonical_j<T: Real>(n: usize) -> DMatrix<T> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = T::one();
        j[(n + i, i)] = -T::one();
    }
    j
}
