//! Runs the closed-form pipeline and, unless disabled, the definitional
//! oracle on one problem.

use std::time::{Duration, Instant};

use cpindex::conjugate::{self, ConjugateInstant};
use cpindex::jordan::{self, CanonicalPairDecomposition, GSymmetricSystem};
use cpindex::liegroup::{self, LieAlgebraSpec};
use cpindex::nalgebra::{DMatrix, DVector};
use cpindex::oracle::{self, OracleConfig};
use cpindex::symplectic::{self, Classification, SymplecticCoefficient};
use cpindex::{conley_zehnder, maslov, signatures, Tolerances};

use crate::error::CliError;
use crate::num::{self, Num};
use crate::problem::{Payload, ProblemFile};
use crate::report::*;
use crate::settings::Settings;

/// Instants from the oracle must lie within this fraction of `T`.
pub const LOCATION_TOLERANCE: f64 = 1e-8;

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, rows.first().map_or(0, Vec::len), |i, j| rows[i][j])
}

fn instants_entry(per_instant: &[(ConjugateInstant<f64>, i64)]) -> Vec<InstantEntry> {
    per_instant
        .iter()
        .map(|(i, c)| InstantEntry {
            t: Num(i.t),
            contributors: i
                .contributors
                .iter()
                .map(|c| ContributorEntry {
                    lambda: Num(c.lambda),
                    k: c.k,
                    geometric_multiplicity: c.geometric_multiplicity,
                    algebraic_multiplicity: c.algebraic_multiplicity,
                })
                .collect(),
            multiplicity: i.multiplicity,
            degenerate: i.degenerate,
            is_final: i.is_final,
            contribution: *c,
        })
        .collect()
}

fn closed_form(
    system: &GSymmetricSystem<f64>,
    decomposition: &CanonicalPairDecomposition<f64>,
    tol: &Tolerances<f64>,
    with_cz: bool,
) -> Result<Analysis, CliError> {
    let spectrum = decomposition.spectrum();
    let (r_g, r_a) = decomposition.reconstruction_residual(system)?;
    let mut jordan_signatures = Vec::new();
    for group in &decomposition.real_blocks {
        let sig = signatures::jordan_signatures(&group.blocks)?;
        jordan_signatures.push(SignatureEntry {
            lambda: Num(group.lambda()),
            varsigma: sig.varsigma,
            varrho: sig.varrho,
            tau: sig.tau,
            generalized_n_minus: group.generalized_n_minus(),
        });
    }
    let instants = conjugate::conjugate_instants(system, &spectrum, tol);
    let m = maslov::maslov_index(system, decomposition, &instants, tol)?;
    let conley_zehnder = if with_cz {
        let cz = conley_zehnder::cz_index(system, decomposition, tol)?;
        Some(CzEntry {
            total: cz.total,
            initial_contribution: cz.initial_contribution,
            positive_spectrum_term: cz.positive_spectrum_term,
            interior: cz
                .interior_contributions
                .iter()
                .map(|&(t, c)| TimedContribution { t: Num(t), contribution: c })
                .collect(),
            final_contribution: cz.final_contribution,
            kernel_correction: cz.kernel_correction,
        })
    } else {
        None
    };
    Ok(Analysis {
        dim: system.dim(),
        spectrum: spectrum
            .iter()
            .map(|r| SpectrumEntry {
                re: Num(r.value.re),
                im: Num(r.value.im),
                algebraic_multiplicity: r.algebraic_multiplicity,
                geometric_multiplicity: r.geometric_multiplicity,
                real: r.is_real,
            })
            .collect(),
        canonical_blocks: decomposition
            .real_blocks
            .iter()
            .flat_map(|g| g.blocks.iter())
            .map(|b| BlockEntry { lambda: Num(b.lambda), size: b.size, epsilon: b.epsilon })
            .collect(),
        reconstruction_residual: [Num(r_g), Num(r_a)],
        jordan_signatures,
        conjugate_instants: instants_entry(&m.per_instant),
        conjugate_count: instants.iter().map(|i| i.multiplicity).sum(),
        maslov: MaslovEntry {
            total: m.total,
            initial_correction: m.initial_correction,
            rs_value: Num(m.rs_value()),
            rs_twice: m.rs_twice,
        },
        conley_zehnder,
    })
}

fn instants_agree(analysis: &Analysis, detected: &[(f64, usize)], horizon: f64) -> bool {
    let band = LOCATION_TOLERANCE * horizon;
    analysis.conjugate_instants.len() == detected.len()
        && analysis
            .conjugate_instants
            .iter()
            .zip(detected)
            .all(|(a, &(t, d))| a.multiplicity == d && (a.t.0 - t).abs() <= band)
}

/// What the oracle is run on: the reduced system, or the Hamiltonian itself.
enum OracleTarget<'a> {
    System(&'a GSymmetricSystem<f64>, bool),
    Hamiltonian { h: DMatrix<f64>, reduced: Option<&'a GSymmetricSystem<f64>>, horizon: f64 },
}

fn run_oracle(target: OracleTarget<'_>, analysis: Option<&Analysis>, cfg: &OracleConfig) -> Result<OracleSection, CliError> {
    let (maslov, detected, cz, horizon) = match target {
        OracleTarget::System(system, with_cz) => {
            let cz = if with_cz { Some(oracle::cz_definitional(system, cfg)?) } else { None };
            (oracle::maslov_definitional(system, cfg)?, oracle::detect_conjugate(system, cfg)?, cz, system.horizon())
        }
        OracleTarget::Hamiltonian { h, reduced, horizon } => {
            let cz = match reduced {
                Some(system) => Some(oracle::cz_definitional(system, cfg)?),
                None => None,
            };
            (oracle::maslov_hamiltonian(&h, horizon, cfg)?, oracle::detect_hamiltonian(&h, horizon, cfg)?, cz, horizon)
        }
    };
    let agreement = match analysis {
        Some(a) => Agreement {
            maslov: Some(a.maslov.total == maslov),
            conjugate_instants: Some(instants_agree(a, &detected, horizon)),
            conley_zehnder: match (&a.conley_zehnder, cz) {
                (Some(c), Some(o)) => Some(c.total == o),
                _ => None,
            },
        },
        None => Agreement { maslov: None, conjugate_instants: None, conley_zehnder: None },
    };
    Ok(OracleSection {
        maslov,
        conjugate_instants: detected.iter().map(|&(t, d)| OracleInstant { t: Num(t), deficiency: d }).collect(),
        conley_zehnder: cz,
        location_tolerance: Num(LOCATION_TOLERANCE * horizon),
        agreement,
    })
}

fn geodesic_section(report: &liegroup::GeodesicReport<f64>) -> GeodesicSection {
    GeodesicSection {
        ad: num::matrix(&report.ad),
        instants: report
            .instants
            .iter()
            .map(|g| GeodesicInstantEntry {
                t: Num(g.instant.t),
                multiplicity: g.instant.multiplicity,
                contribution: g.contribution,
                local_injectivity_broken: g.local_injectivity_broken,
                ad_multiplicity: g.ad_multiplicity,
            })
            .collect(),
        even_multiplicities: report.instants.iter().all(|g| g.instant.multiplicity % 2 == 0),
        spectrally_consistent: report.spectrally_consistent(),
        pfaffian: report.pfaffian.as_ref().map(|p| PfaffianEntry {
            identities_hold: p.identities_hold,
            char_poly_restricted: num::vector(&p.char_poly.restricted),
            char_poly_full: num::vector(&p.char_poly.full),
            s: Num(p.char_poly.s),
            deviation: Num(p.char_poly.deviation),
            eigenplane: p.eigenplane.as_ref().map(|e| EigenplaneEntry {
                alpha: Num(e.alpha),
                pivot: e.pivot.map(|(p, q)| [p, q]),
                n_plus: e.inertia.n_plus,
                n_minus: e.inertia.n_minus,
                nullity: e.inertia.nullity,
            }),
        }),
    }
}

fn millis(d: Duration) -> Num {
    Num(d.as_secs_f64() * 1e3)
}

pub fn analyze(problem: &ProblemFile, settings: &Settings) -> Result<Report, CliError> {
    let tol = &settings.tol;
    let horizon = problem.horizon;
    let start = Instant::now();
    let mut symplectic_section = None;
    let mut geodesic = None;
    let mut oracle_elapsed = Duration::ZERO;
    let mut oracle_section = None;
    let mut timed_oracle = |target: OracleTarget<'_>, analysis: Option<&Analysis>| -> Result<(), CliError> {
        if let Some(cfg) = &settings.oracle {
            let t0 = Instant::now();
            oracle_section = Some(run_oracle(target, analysis, cfg)?);
            oracle_elapsed += t0.elapsed();
        }
        Ok(())
    };

    let analysis = match &problem.payload {
        Payload::SecondOrder(p) => {
            let system = jordan::validate(to_matrix(&p.g), to_matrix(&p.a), horizon, tol)?;
            let decomposition = jordan::decompose(&system, tol)?;
            let analysis = closed_form(&system, &decomposition, tol, true)?;
            timed_oracle(OracleTarget::System(&system, true), Some(&analysis))?;
            Some(analysis)
        }
        Payload::Symplectic(p) => {
            let x = SymplecticCoefficient::with_tol(to_matrix(&p.a), to_matrix(&p.b), to_matrix(&p.c), tol)?;
            if !(horizon.is_finite() && horizon > 0.0) {
                return Err(cpindex::Error::NonPositiveHorizon(horizon).into());
            }
            let classification = symplectic::classify(&x, tol);
            match classification {
                Classification::DegenerateContinuum => return Err(cpindex::Error::Continuum.into()),
                Classification::Reducible => {
                    let system = symplectic::reduce_with_tol(&x, horizon, tol)?;
                    let second = symplectic::second_order_form(&x)?;
                    symplectic_section = Some(SymplecticSection {
                        classification: classification.as_str(),
                        reduced: Some(ReducedSystem {
                            g: num::matrix(system.g().matrix()),
                            a: num::matrix(system.a()),
                            damping: num::matrix(&second.damping),
                            stiffness: num::matrix(&second.stiffness),
                        }),
                    });
                    let decomposition = jordan::decompose(&system, tol)?;
                    let analysis = closed_form(&system, &decomposition, tol, true)?;
                    let target = OracleTarget::Hamiltonian { h: x.hamiltonian(), reduced: Some(&system), horizon };
                    timed_oracle(target, Some(&analysis))?;
                    Some(analysis)
                }
                Classification::Unsupported => {
                    symplectic_section = Some(SymplecticSection { classification: classification.as_str(), reduced: None });
                    timed_oracle(OracleTarget::Hamiltonian { h: x.hamiltonian(), reduced: None, horizon }, None)?;
                    None
                }
            }
        }
        Payload::LieAlgebra(p) => {
            let spec = LieAlgebraSpec::new(p.structure_constants.clone(), p.metric_signs.clone())?;
            liegroup::validate_algebra(&spec, tol)?;
            let x = DVector::from_column_slice(&p.direction);
            let report = liegroup::geodesic_report(&spec, &x, horizon, tol)?;
            let decomposition = jordan::decompose(&report.system, tol)?;
            let analysis = closed_form(&report.system, &decomposition, tol, false)?;
            geodesic = Some(geodesic_section(&report));
            timed_oracle(OracleTarget::System(&report.system, false), Some(&analysis))?;
            Some(analysis)
        }
    };

    let total = start.elapsed();
    let status = match &oracle_section {
        Some(o) if !o.agreement.all_hold() => Status::Disagreement,
        _ => Status::Ok,
    };
    let timing = settings
        .timing
        .then(|| Timing { closed_form_ms: millis(total.saturating_sub(oracle_elapsed)), oracle_ms: millis(oracle_elapsed) });
    Ok(Report {
        schema_version: crate::problem::SCHEMA_VERSION,
        generator: GENERATOR,
        status,
        echo: problem.echo(),
        settings: settings.describe(),
        symplectic: symplectic_section,
        geodesic,
        analysis,
        oracle: oracle_section,
        timing,
    })
}
