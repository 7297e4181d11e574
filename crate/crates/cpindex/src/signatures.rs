//! Jordan signatures ς, ϱ, τ of a real eigenvalue.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::BilinearForm;
use crate::jordan::{CanonicalBlock, GSymmetricSystem};
use crate::linalg;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSignature {
    pub size: usize,
    pub epsilon: i8,
    pub varsigma: usize,
    pub varrho: usize,
    pub tau: usize,
}

impl BlockSignature {
    pub fn new(size: usize, epsilon: i8) -> Self {
        assert!(size >= 1 && (epsilon == 1 || epsilon == -1));
        let even = size % 2 == 0;
        let varsigma = match (even, epsilon > 0) {
            (true, _) => size / 2,
            (false, true) => (size - 1) / 2,
            (false, false) => (size + 1) / 2,
        };
        let varrho = match (even, epsilon > 0) {
            (false, _) => (size - 1) / 2,
            (true, true) => size / 2 - 1,
            (true, false) => size / 2,
        };
        // (1 + ε(−1)^{n+1}) / 2
        let tau = usize::from((epsilon > 0) != even);
        Self { size, epsilon, varsigma, varrho, tau }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanSignatures {
    pub varsigma: usize,
    pub varrho: usize,
    pub tau: usize,
    pub per_block: Vec<BlockSignature>,
}

impl JordanSignatures {
    pub fn blocks(&self) -> usize {
        self.per_block.len()
    }
}

/// Sums the closed-form per-block signatures from `(size, ε)` pairs.
pub fn signatures_from_data(data: &[(usize, i8)]) -> JordanSignatures {
    let per_block: Vec<BlockSignature> = data.iter().map(|&(n, e)| BlockSignature::new(n, e)).collect();
    JordanSignatures {
        varsigma: per_block.iter().map(|b| b.varsigma).sum(),
        varrho: per_block.iter().map(|b| b.varrho).sum(),
        tau: per_block.iter().map(|b| b.tau).sum(),
        per_block,
    }
}

/// Jordan signatures of the blocks of one eigenvalue.
pub fn jordan_signatures<T: Real>(blocks: &[CanonicalBlock<T>]) -> Result<JordanSignatures> {
    let first = blocks.first().ok_or(Error::MixedEigenvalues)?;
    let band = T::eps() * T::lit(100.0) * first.lambda.abs().max(T::one());
    if blocks.iter().any(|b| (b.lambda - first.lambda).abs() > band) {
        return Err(Error::MixedEigenvalues);
    }
    let data: Vec<(usize, i8)> = blocks.iter().map(|b| (b.size, b.epsilon)).collect();
    Ok(signatures_from_data(&data))
}

/// The degenerate form `b_λ(v, w) = g((A − λ)v, w)` on the span of the blocks,
/// in the block basis. Its index is ϱ.
pub fn b_lambda_form<T: Real>(system: &GSymmetricSystem<T>, blocks: &[CanonicalBlock<T>]) -> BilinearForm<T> {
    let n = system.dim();
    let parts: Vec<&DMatrix<T>> = blocks.iter().map(|b| &b.basis).collect();
    let v = linalg::hstack(n, &parts);
    let lambda = blocks.first().map(|b| b.lambda).unwrap_or_else(T::zero);
    let shifted = system.a() - DMatrix::identity(n, n) * lambda;
    BilinearForm::from_symmetric_unchecked(v.transpose() * system.g().matrix() * shifted * &v)
}
