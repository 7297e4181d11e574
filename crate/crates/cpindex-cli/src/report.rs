//! Report layout. Field order is the serialization order; every index is an
//! integer and every float goes through [`Num`].

use serde::Serialize;

use crate::error::CliError;
use crate::num::Num;
use crate::problem::Echo;
use crate::settings::SettingsOut;

pub const GENERATOR: &str = concat!("cpindex ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Disagreement,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub generator: &'static str,
    pub status: Status,
    pub echo: Echo,
    pub settings: SettingsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symplectic: Option<SymplecticSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicSection>,
    /// Closed-form analysis; absent for unsupported symplectic coefficients.
    pub analysis: Option<Analysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// Written instead of a [`Report`] when the pipeline stops early.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub schema_version: u32,
    pub generator: &'static str,
    pub status: Status,
    pub exit_code: i32,
    pub error: CliError,
}

impl ErrorReport {
    pub fn new(error: CliError) -> Self {
        ErrorReport {
            schema_version: crate::problem::SCHEMA_VERSION,
            generator: GENERATOR,
            status: Status::Failed,
            exit_code: error.exit_code(),
            error,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEntry {
    pub re: Num,
    pub im: Num,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub real: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockEntry {
    pub lambda: Num,
    pub size: usize,
    pub epsilon: i8,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignatureEntry {
    pub lambda: Num,
    pub varsigma: usize,
    pub varrho: usize,
    pub tau: usize,
    /// `n₋(g|Ker(A − λ)ⁿ)`.
    pub generalized_n_minus: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContributorEntry {
    pub lambda: Num,
    pub k: usize,
    pub geometric_multiplicity: usize,
    pub algebraic_multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstantEntry {
    pub t: Num,
    pub contributors: Vec<ContributorEntry>,
    pub multiplicity: usize,
    pub degenerate: bool,
    pub is_final: bool,
    pub contribution: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaslovEntry {
    pub total: i64,
    /// `−n₋(g)`.
    pub initial_correction: i64,
    /// Robbin–Salamon value, a half-integer.
    pub rs_value: Num,
    pub rs_twice: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimedContribution {
    pub t: Num,
    pub contribution: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CzEntry {
    pub total: i64,
    pub initial_contribution: i64,
    pub positive_spectrum_term: i64,
    pub interior: Vec<TimedContribution>,
    pub final_contribution: i64,
    pub kernel_correction: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub dim: usize,
    pub spectrum: Vec<SpectrumEntry>,
    pub canonical_blocks: Vec<BlockEntry>,
    /// Relative residuals of `PᵀgP` and `P⁻¹AP` against the canonical pair.
    pub reconstruction_residual: [Num; 2],
    pub jordan_signatures: Vec<SignatureEntry>,
    pub conjugate_instants: Vec<InstantEntry>,
    /// Sum of multiplicities over `(0, T]`.
    pub conjugate_count: usize,
    pub maslov: MaslovEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conley_zehnder: Option<CzEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymplecticSection {
    pub classification: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedSystem>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReducedSystem {
    pub g: Vec<Vec<Num>>,
    pub a: Vec<Vec<Num>>,
    /// `v'' + D v' + K v = 0` satisfied by the position component.
    pub damping: Vec<Vec<Num>>,
    pub stiffness: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicInstantEntry {
    pub t: Num,
    pub multiplicity: usize,
    pub contribution: i64,
    pub local_injectivity_broken: bool,
    pub ad_multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenplaneEntry {
    pub alpha: Num,
    pub pivot: Option<[usize; 2]>,
    pub n_plus: usize,
    pub n_minus: usize,
    pub nullity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PfaffianEntry {
    pub identities_hold: bool,
    /// Ascending coefficients of `det(B′ − λI)` on `X^⊥`.
    pub char_poly_restricted: Vec<Num>,
    pub char_poly_full: Vec<Num>,
    pub s: Num,
    /// Relative deviation from the direct characteristic polynomial.
    pub deviation: Num,
    pub eigenplane: Option<EigenplaneEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicSection {
    pub ad: Vec<Vec<Num>>,
    pub instants: Vec<GeodesicInstantEntry>,
    pub even_multiplicities: bool,
    pub spectrally_consistent: bool,
    pub pfaffian: Option<PfaffianEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleInstant {
    pub t: Num,
    pub deficiency: usize,
}

/// `null` means there is nothing to compare against.
#[derive(Debug, Clone, Serialize)]
pub struct Agreement {
    pub maslov: Option<bool>,
    pub conjugate_instants: Option<bool>,
    pub conley_zehnder: Option<bool>,
}

impl Agreement {
    pub fn all_hold(&self) -> bool {
        [self.maslov, self.conjugate_instants, self.conley_zehnder].iter().all(|f| f.unwrap_or(true))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub maslov: i64,
    pub conjugate_instants: Vec<OracleInstant>,
    pub conley_zehnder: Option<i64>,
    /// Instants agree when their locations differ by at most this much.
    pub location_tolerance: Num,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub closed_form_ms: Num,
    pub oracle_ms: Num,
}
