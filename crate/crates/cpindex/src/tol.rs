//! Numerical tolerances used across the pipeline.

use crate::scalar::Real;

/// Every threshold is relative to a natural scale of the quantity tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Symmetry / g-symmetry residual, relative to the largest entry.
    pub sym: T,
    /// Eigenvalues of a form below `null · max|eigenvalue|` count as kernel.
    pub null: T,
    /// Eigenvalue clustering radius, relative to `max(1, spectral radius)`.
    pub eig: T,
    /// Singular values below `rank · σ_max` count as zero.
    pub rank: T,
    /// Reconstruction residual accepted for canonical pairs.
    pub recon: T,
    /// Conjugate instants closer than `merge · T` are merged; `|t − T|` below
    /// the same band marks the final instant.
    pub merge: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        T::default_tolerances()
    }
}

impl<T: Real> Tolerances<T> {
    pub fn with_eig(mut self, eig: T) -> Self {
        self.eig = eig;
        self
    }

    pub fn with_rank(mut self, rank: T) -> Self {
        self.rank = rank;
        self
    }
}
