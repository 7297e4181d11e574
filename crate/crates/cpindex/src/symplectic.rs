//! Constant linear Hamiltonian systems
//! `v' = 𝔄v + 𝔅α`, `α' = ℭv − 𝔄ᵀα` with `𝔅`, `ℭ` symmetric.
//!
//! When `𝔅` is invertible and `𝔅⁻¹𝔄` is symmetric, the symplectic change of
//! coordinates `(v, α) ↦ (v, α + 𝔅⁻¹𝔄v)` fixes the vertical Lagrangian and
//! turns the system into `v'' = Av` with `g = 𝔅⁻¹`,
//! `A = 𝔅(𝔄ᵀ𝔅⁻¹𝔄 + ℭ)`; conjugate instants and Maslov index are unchanged.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jordan::{self, GSymmetricSystem};
use crate::linalg;
use crate::scalar::Real;
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticCoefficient<T: Real> {
    block_a: DMatrix<T>,
    block_b: DMatrix<T>,
    block_c: DMatrix<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Reducible,
    /// `Ker 𝔄ᵀ ∩ Ker 𝔅 ≠ 0`: every instant of `(0, T]` is conjugate.
    DegenerateContinuum,
    /// Conjugate instants may be finite but no closed form applies.
    Unsupported,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Reducible => "reducible",
            Classification::DegenerateContinuum => "degenerate_continuum",
            Classification::Unsupported => "unsupported",
        }
    }
}

/// `v'' + damping·v' + stiffness·v = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderForm<T: Real> {
    pub damping: DMatrix<T>,
    pub stiffness: DMatrix<T>,
}

impl<T: Real> SymplecticCoefficient<T> {
    pub fn new(block_a: DMatrix<T>, block_b: DMatrix<T>, block_c: DMatrix<T>) -> Result<Self> {
        Self::with_tol(block_a, block_b, block_c, &T::default_tolerances())
    }

    pub fn with_tol(block_a: DMatrix<T>, block_b: DMatrix<T>, block_c: DMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let n = linalg::check_square(&block_a)?;
        for m in [&block_b, &block_c] {
            let k = linalg::check_square(m)?;
            if k != n {
                return Err(Error::DimensionMismatch { expected: n, found: k });
            }
        }
        for m in [&block_a, &block_b, &block_c] {
            linalg::check_finite(m)?;
        }
        for m in [&block_b, &block_c] {
            let scale = linalg::max_abs(m).max(T::one());
            let r = linalg::asymmetry(m);
            if r > tol.sym * scale {
                return Err(Error::NotSymmetric { residual: (r / scale).as_f64() });
            }
        }
        let block_b = linalg::symmetrize(&block_b);
        let block_c = linalg::symmetrize(&block_c);
        Ok(Self { block_a, block_b, block_c })
    }

    pub fn dim(&self) -> usize {
        self.block_a.nrows()
    }

    pub fn block_a(&self) -> &DMatrix<T> {
        &self.block_a
    }

    pub fn block_b(&self) -> &DMatrix<T> {
        &self.block_b
    }

    pub fn block_c(&self) -> &DMatrix<T> {
        &self.block_c
    }

    /// `X = [[𝔄, 𝔅], [ℭ, −𝔄ᵀ]]`.
    pub fn hamiltonian(&self) -> DMatrix<T> {
        let n = self.dim();
        let mut x = DMatrix::zeros(2 * n, 2 * n);
        x.view_mut((0, 0), (n, n)).copy_from(&self.block_a);
        x.view_mut((0, n), (n, n)).copy_from(&self.block_b);
        x.view_mut((n, 0), (n, n)).copy_from(&self.block_c);
        x.view_mut((n, n), (n, n)).copy_from(&(-self.block_a.transpose()));
        x
    }
}

fn kernel_intersection_dim<T: Real>(x: &SymplecticCoefficient<T>, tol: &Tolerances<T>) -> Result<usize> {
    let n = x.dim();
    let mut stacked = DMatrix::zeros(2 * n, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&x.block_a.transpose());
    stacked.view_mut((n, 0), (n, n)).copy_from(&x.block_b);
    Ok(n - linalg::rank(&stacked, tol.rank, T::zero())?)
}

/// Total classification; numerical failures are reported as `Unsupported`.
pub fn classify<T: Real>(x: &SymplecticCoefficient<T>, tol: &Tolerances<T>) -> Classification {
    match kernel_intersection_dim(x, tol) {
        Ok(k) if k > 0 => return Classification::DegenerateContinuum,
        Ok(_) => {}
        Err(_) => return Classification::Unsupported,
    }
    let n = x.dim();
    if linalg::rank(&x.block_b, tol.rank, T::zero()).map_or(true, |r| r < n) {
        return Classification::Unsupported;
    }
    let Ok(b_inv) = linalg::invert(&x.block_b, "B") else { return Classification::Unsupported };
    let s = &b_inv * &x.block_a;
    let scale = linalg::max_abs(&s).max(T::one());
    if linalg::asymmetry(&s) <= tol.sym * scale {
        Classification::Reducible
    } else {
        Classification::Unsupported
    }
}

/// `(g, A, T) = (𝔅⁻¹, 𝔅(𝔄ᵀ𝔅⁻¹𝔄 + ℭ), T)`.
pub fn reduce<T: Real>(x: &SymplecticCoefficient<T>, horizon: T) -> Result<GSymmetricSystem<T>> {
    reduce_with_tol(x, horizon, &T::default_tolerances())
}

pub fn reduce_with_tol<T: Real>(
    x: &SymplecticCoefficient<T>,
    horizon: T,
    tol: &Tolerances<T>,
) -> Result<GSymmetricSystem<T>> {
    match classify(x, tol) {
        Classification::Reducible => {}
        Classification::DegenerateContinuum => return Err(Error::Continuum),
        Classification::Unsupported => {
            return Err(Error::NotReducible("B must be invertible with B⁻¹𝔄 symmetric"))
        }
    }
    let b_inv = linalg::invert(&x.block_b, "B")?;
    let g = linalg::symmetrize(&b_inv);
    let a = &x.block_b * (x.block_a.transpose() * &b_inv * &x.block_a + &x.block_c);
    jordan::validate(g, a, horizon, tol)
}

/// Damped second-order equation satisfied by the `v`-component.
pub fn second_order_form<T: Real>(x: &SymplecticCoefficient<T>) -> Result<SecondOrderForm<T>> {
    let b_inv = linalg::invert(&x.block_b, "B")?;
    let bab = &x.block_b * x.block_a.transpose() * &b_inv;
    let damping = &bab - &x.block_a;
    let stiffness = -(&x.block_b * &x.block_c + &bab * &x.block_a);
    Ok(SecondOrderForm { damping, stiffness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, v)
    }

    fn coef(a: &[f64], b: &[f64], c: &[f64]) -> SymplecticCoefficient<f64> {
        SymplecticCoefficient::new(m(2, a), m(2, b), m(2, c)).unwrap()
    }

    #[test]
    fn classification_examples() {
        let tol = Tolerances::default();
        let x = coef(&[0.; 4], &[1., 0., 0., 1.], &[-1., 0., 0., -1.]);
        assert_eq!(classify(&x, &tol), Classification::Reducible);
        let x = coef(&[0.; 4], &[1., 0., 0., 0.], &[0.; 4]);
        assert_eq!(classify(&x, &tol), Classification::DegenerateContinuum);
        let x = coef(&[0., 1., 0., 0.], &[1., 0., 0., 1.], &[0.; 4]);
        assert_eq!(classify(&x, &tol), Classification::Unsupported);
    }

    #[test]
    fn reduction_examples() {
        let r = reduce(&coef(&[0.; 4], &[1., 0., 0., 1.], &[-1., 0., 0., -1.]), 1.0).unwrap();
        assert_eq!(r.a(), &m(2, &[-1., 0., 0., -1.]));
        assert_eq!(r.g().matrix(), &m(2, &[1., 0., 0., 1.]));
        let r = reduce(&coef(&[0.; 4], &[1., 0., 0., -1.], &[-1., 0., 0., 4.]), 1.0).unwrap();
        assert_eq!(r.a(), &m(2, &[-1., 0., 0., -4.]));
        assert_eq!(r.g().matrix(), &m(2, &[1., 0., 0., -1.]));
        let r = reduce(&coef(&[1., 0., 0., 1.], &[1., 0., 0., 1.], &[0.; 4]), 1.0).unwrap();
        assert_eq!(r.a(), &m(2, &[1., 0., 0., 1.]));
        assert!(matches!(reduce(&coef(&[0.; 4], &[1., 0., 0., 0.], &[0.; 4]), 1.0), Err(Error::Continuum)));
    }

    #[test]
    fn second_order_examples() {
        let f = second_order_form(&coef(&[0.; 4], &[1., 0., 0., 1.], &[-1., 0., 0., -1.])).unwrap();
        assert_eq!(f.damping, DMatrix::zeros(2, 2));
        assert_eq!(f.stiffness, DMatrix::identity(2, 2));
        let f = second_order_form(&coef(&[0.; 4], &[2., 1., 1., -1.], &[3., 0., 0., 1.])).unwrap();
        assert_eq!(f.stiffness, -(m(2, &[2., 1., 1., -1.]) * m(2, &[3., 0., 0., 1.])));
    }

    #[test]
    fn rejects_asymmetric_blocks() {
        let e = SymplecticCoefficient::new(m(2, &[0.; 4]), m(2, &[1., 1., 0., 1.]), m(2, &[0.; 4]));
        assert!(matches!(e, Err(Error::NotSymmetric { .. })));
    }
}
