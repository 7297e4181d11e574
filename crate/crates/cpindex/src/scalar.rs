//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

use crate::tol::Tolerances;

/// Floating-point scalar the analysis can run on (`f32` or `f64`).
///
/// Tolerances scale with the precision of the type, so every entry point
/// takes its defaults from [`Real::default_tolerances`].
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + LowerExp + Send + Sync + 'static
{
    fn default_tolerances() -> Tolerances<Self>;

    /// Machine epsilon.
    fn eps() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(k: usize) -> Self {
        Self::from_usize(k).expect("usize representable in scalar type")
    }
}

impl Real for f64 {
    fn default_tolerances() -> Tolerances<Self> {
        Tolerances {
            sym: 1e-9,
            null: 1e-9,
            eig: 1e-4,
            rank: 1e-9,
            recon: 1e-8,
            merge: 1e-8,
        }
    }

    fn eps() -> Self {
        f64::EPSILON
    }
}

impl Real for f32 {
    fn default_tolerances() -> Tolerances<Self> {
        Tolerances {
            sym: 1e-4,
            null: 1e-4,
            eig: 5e-2,
            rank: 1e-4,
            recon: 1e-3,
            merge: 1e-4,
        }
    }

    fn eps() -> Self {
        f32::EPSILON
    }
}
