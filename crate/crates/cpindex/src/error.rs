use thiserror::Error;

/// Coarse classification used by front ends to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numeric,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix must be square but is {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric (relative residual {residual:.3e})")]
    NotSymmetric { residual: f64 },
    #[error("bilinear form is degenerate (nullity {nullity})")]
    DegenerateForm { nullity: usize },
    #[error("operator is not g-symmetric (relative residual {residual:.3e})")]
    NotGSymmetric { residual: f64 },
    #[error("horizon must be positive and finite, got {0}")]
    NonPositiveHorizon(f64),
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("basis is rank deficient (rank {rank} of {expected})")]
    RankDeficientBasis { rank: usize, expected: usize },
    #[error("blocks belong to different eigenvalues")]
    MixedEigenvalues,
    #[error("{value} is not a real eigenvalue of the operator")]
    NotAnEigenvalue { value: f64 },
    #[error("instant does not belong to this system: {0}")]
    ForeignInstant(String),
    #[error("matrix must have even dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric (relative residual {residual:.3e})")]
    NotSkew { residual: f64 },
    #[error("structure constants are not antisymmetric at C^{k}_{{{i}{j}}}")]
    Antisymmetry { k: usize, i: usize, j: usize },
    #[error("Jacobi identity violated (residual {residual:.3e})")]
    Jacobi { residual: f64 },
    #[error("metric is not bi-invariant (residual {residual:.3e})")]
    BiInvariance { residual: f64 },
    #[error("metric signs must be ±1")]
    MetricSigns,
    #[error("quadratic structure-constant identities fail; use the general spectral path")]
    IdentitiesFail,
    #[error("degenerate_continuum: every instant conjugate")]
    Continuum,
    #[error("symplectic coefficient is not reducible ({0})")]
    NotReducible(&'static str),
    #[error("ill-conditioned {what}: {detail}; consider adjusting tolerances")]
    IllConditioned { what: &'static str, detail: String },
    #[error("numerical failure in {what}: {detail}")]
    Numeric { what: &'static str, detail: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::IllConditioned { .. } | Error::Numeric { .. } => ErrorKind::Numeric,
            _ => ErrorKind::Validation,
        }
    }

    /// Stable snake_case name of the violated invariant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "not_square",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::DegenerateForm { .. } => "degenerate_form",
            Error::NotGSymmetric { .. } => "not_g_symmetric",
            Error::NonPositiveHorizon(_) => "non_positive_horizon",
            Error::NonFinite => "non_finite",
            Error::RankDeficientBasis { .. } => "rank_deficient_basis",
            Error::MixedEigenvalues => "mixed_eigenvalues",
            Error::NotAnEigenvalue { .. } => "not_an_eigenvalue",
            Error::ForeignInstant(_) => "foreign_instant",
            Error::OddDimension(_) => "odd_dimension",
            Error::NotSkew { .. } => "not_skew",
            Error::Antisymmetry { .. } => "antisymmetry",
            Error::Jacobi { .. } => "jacobi",
            Error::BiInvariance { .. } => "bi_invariance",
            Error::MetricSigns => "metric_signs",
            Error::IdentitiesFail => "identities_fail",
            Error::Continuum => "degenerate_continuum",
            Error::NotReducible(_) => "not_reducible",
            Error::IllConditioned { .. } => "ill_conditioned",
            Error::Numeric { .. } => "numeric",
        }
    }

    pub(crate) fn numeric(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric { what, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
