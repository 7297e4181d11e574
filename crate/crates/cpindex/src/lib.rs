//! Conjugate points, Maslov index and Conley–Zehnder index of constant
//! symplectic systems `v'' = A v` with `A` symmetric for a nondegenerate
//! (possibly indefinite) form `g`.
//!
//! Every closed-form result has an independent definitional counterpart in
//! [`oracle`], which evolves the Lagrangian path numerically and counts
//! intersections with chart forms.

pub mod conjugate;
pub mod conley_zehnder;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod jordan;
pub mod liegroup;
mod linalg;
pub mod maslov;
pub mod oracle;
pub mod scalar;
pub mod signatures;
pub mod symplectic;
pub mod tol;

pub use nalgebra;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Real;
pub use tol::Tolerances;

/// Double-precision aliases.
pub type Matrix = nalgebra::DMatrix<f64>;
pub type BilinearForm = forms::BilinearForm<f64>;
pub type GSymmetricSystem = jordan::GSymmetricSystem<f64>;
pub type CanonicalBlock = jordan::CanonicalBlock<f64>;
pub type CanonicalPairDecomposition = jordan::CanonicalPairDecomposition<f64>;
pub type EigenvalueRecord = jordan::EigenvalueRecord<f64>;






pub type ConjugateInstant = conjugate::ConjugateInstant<f64>;
pub type MaslovBreakdown = maslov::MaslovBreakdown<f64>;
pub type CzBreakdown = conley_zehnder::CzBreakdown<f64>;
pub type SymplecticCoefficient = symplectic::SymplecticCoefficient<f64>;
pub type SymplecticPathSample = oracle::SymplecticPathSample<f64>;
pub type LieAlgebraSpec = liegroup::LieAlgebraSpec<f64>;
pub type GeodesicReport = liegroup::GeodesicReport<f64>;
