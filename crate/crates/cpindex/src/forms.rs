//! Symmetric bilinear forms: inertia, signature, restriction, sip matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;

/// A symmetric bilinear form on `R^dim`, stored as an exactly symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm<T: Real> {
    entries: DMatrix<T>,
}

/// Sylvester inertia `(n₊, n₋, nullity)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub nullity: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.nullity
    }

    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    /// Coindex plus nullity.
    pub fn extended_coindex(&self) -> usize {
        self.n_plus + self.nullity
    }
}

impl<T: Real> BilinearForm<T> {
    /// Validates squareness, finiteness and symmetry (relative to the largest
    /// entry), then stores the symmetrised matrix.
    pub fn new(entries: DMatrix<T>, tol_sym: T) -> Result<Self> {
        linalg::check_square(&entries)?;
        linalg::check_finite(&entries)?;
        let residual = linalg::asymmetry(&entries);
        if residual > tol_sym {
            return Err(Error::NotSymmetric { residual: residual.as_f64() });
        }
        Ok(Self { entries: linalg::symmetrize(&entries) })
    }

    /// Builds a form with the default symmetry tolerance of `T`.
    pub fn from_matrix(entries: DMatrix<T>) -> Result<Self> {
        Self::new(entries, T::default_tolerances().sym)
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        Self { entries: linalg::diag(d) }
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: DMatrix::identity(n, n) }
    }

    pub(crate) fn from_symmetric_unchecked(entries: DMatrix<T>) -> Self {
        Self { entries: linalg::symmetrize(&entries) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.entries
    }

    pub fn eval(&self, u: &DVector<T>, v: &DVector<T>) -> T {
        (u.transpose() * &self.entries * v)[(0, 0)]
    }

    pub fn scaled(&self, c: T) -> Self {
        Self { entries: &self.entries * c }
    }
}

/// Counts eigenvalues above `tol·scale`, below `−tol·scale` and in between,
/// where `scale` is the largest eigenvalue magnitude (or 1 if that is below `tol`).
pub fn inertia<T: Real>(form: &BilinearForm<T>, tol: T) -> Result<Inertia> {
    let (vals, _) = linalg::sym_eigen(form.matrix())?;
    Ok(inertia_of_eigenvalues(&vals, tol))
}

pub(crate) fn inertia_of_eigenvalues<T: Real>(vals: &[T], tol: T) -> Inertia {
    let max = vals.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let scale = if max < tol { T::one() } else { max };
    let band = tol * scale;
    let mut out = Inertia::default();
    for &v in vals {
        if v > band {
            out.n_plus += 1;
        } else if v < -band {
            out.n_minus += 1;
        } else {
            out.nullity += 1;
        }
    }
    out
}

/// Inertia of an arbitrary square matrix after the symmetry check.
pub fn inertia_of_matrix<T: Real>(m: &DMatrix<T>, tol: T) -> Result<Inertia> {
    inertia(&BilinearForm::new(m.clone(), T::default_tolerances().sym)?, tol)
}

/// `n₊ − n₋` with the default nullity tolerance.
pub fn signature<T: Real>(form: &BilinearForm<T>) -> Result<i64> {
    Ok(inertia(form, T::default_tolerances().null)?.signature())
}

/// The form restricted to the span of the columns of `basis`: entries `form(bᵢ, bⱼ)`.
pub fn restrict<T: Real>(form: &BilinearForm<T>, basis: &DMatrix<T>) -> Result<BilinearForm<T>> {
    restrict_with_tol(form, basis, T::default_tolerances().rank)
}

pub fn restrict_with_tol<T: Real>(
    form: &BilinearForm<T>,
    basis: &DMatrix<T>,
    tol_rank: T,
) -> Result<BilinearForm<T>> {
    if basis.nrows() != form.dim() {
        return Err(Error::DimensionMismatch { expected: form.dim(), found: basis.nrows() });
    }
    let k = basis.ncols();
    if k > 0 {
        let r = linalg::rank(basis, tol_rank, T::zero())?;
        if r < k {
            return Err(Error::RankDeficientBasis { rank: r, expected: k });
        }
    }
    Ok(BilinearForm::from_symmetric_unchecked(basis.transpose() * form.matrix() * basis))
}

/// Anti-diagonal matrix of ones.
pub fn sip_matrix<T: Real>(n: usize) -> BilinearForm<T> {
    assert!(n >= 1, "sip matrix needs n ≥ 1");
    BilinearForm { entries: DMatrix::from_fn(n, n, |i, j| if i + j + 1 == n { T::one() } else { T::zero() }) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, data.len() / rows, data)
    }

    #[test]
    fn inertia_examples() {
        let tol = 1e-9;
        let d = BilinearForm::from_diagonal(&[2.0, -3.0]);
        assert_eq!(inertia(&d, tol).unwrap(), Inertia { n_plus: 1, n_minus: 1, nullity: 0 });
        assert_eq!(
            inertia(&sip_matrix::<f64>(2), tol).unwrap(),
            Inertia { n_plus: 1, n_minus: 1, nullity: 0 }
        );
        let z = BilinearForm::from_matrix(DMatrix::<f64>::zeros(3, 3)).unwrap();
        assert_eq!(inertia(&z, tol).unwrap(), Inertia { n_plus: 0, n_minus: 0, nullity: 3 });
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            BilinearForm::from_matrix(m(2, &[1.0, 2.0, 3.0, 4.0])),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(matches!(
            BilinearForm::from_matrix(DMatrix::<f64>::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&BilinearForm::from_diagonal(&[1.0, 1.0, -1.0])).unwrap(), 1);
        for n in 1..8 {
            let s = sip_matrix::<f64>(n);
            assert_eq!(signature(&s).unwrap(), if n % 2 == 0 { 0 } else { 1 });
            assert_eq!(signature(&s.scaled(-1.0)).unwrap(), if n % 2 == 0 { 0 } else { -1 });
            let i = inertia(&s, 1e-9).unwrap();
            assert_eq!((i.n_plus, i.n_minus, i.nullity), (n.div_ceil(2), n / 2, 0));
        }
    }

    #[test]
    fn restrict_examples() {
        let g = BilinearForm::from_diagonal(&[1.0, -1.0, 1.0]);
        let b = m(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(restrict(&g, &b).unwrap().matrix(), &DMatrix::<f64>::identity(2, 2));

        let r = restrict(&sip_matrix::<f64>(2), &m(2, &[1.0, 0.0])).unwrap();
        assert_eq!(r.matrix(), &DMatrix::<f64>::zeros(1, 1));

        let r = restrict(&BilinearForm::from_diagonal(&[1.0, -1.0]), &m(2, &[1.0, 1.0])).unwrap();
        assert_eq!(r.matrix(), &DMatrix::<f64>::zeros(1, 1));

        let dep = m(3, &[1.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(restrict(&g, &dep), Err(Error::RankDeficientBasis { rank: 1, expected: 2 })));
    }

    #[test]
    fn sip_matrix_shape() {
        assert_eq!(sip_matrix::<f64>(1).matrix(), &m(1, &[1.0]));
        assert_eq!(sip_matrix::<f64>(2).matrix(), &m(2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(
            sip_matrix::<f64>(3).matrix(),
            &m(3, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0])
        );
    }

    #[test]
    fn works_in_single_precision() {
        let d = BilinearForm::<f32>::from_diagonal(&[2.0, -3.0, 0.0]);
        let i = inertia(&d, 1e-4).unwrap();
        assert_eq!((i.n_plus, i.n_minus, i.nullity), (1, 1, 1));
    }
}
