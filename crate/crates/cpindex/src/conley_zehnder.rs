//! Closed-form Conley–Zehnder index i_CZ(g, A, T).
//!
//! The graph of `Φ(t)` meets the diagonal at `t > 0` exactly when
//! `−4k²π²/t²` is an eigenvalue of `A`, or for every `t` when `A` is
//! singular. Singular `A` is handled by splitting off the generalized kernel
//! `W̃ = Ker Aⁿ`, whose contribution is `−ϱ(g, A, 0) − n₊(g|W̃)`.
//!
//! On the invertible part the path starts inside the diagonal with
//! extended coindex `2n`; just after `0` the chart form is `t·(gA ⊕ −g⁻¹)`
//! to first order, so the initial contribution is
//! `n₊(g̃Ã) + n₋(g̃) − 2ñ = −2n₊(g̃) + Σ_{λ>0} σ(g|Ker(A−λ)ⁿ)`. Without
//! positive real eigenvalues this reduces to `−2n₊(g̃)`.

use crate::conjugate::instants_with_period;
use crate::error::{Error, Result};
use crate::forms;
use crate::jordan::{CanonicalPairDecomposition, EigenGroup, EigenvalueRecord, GSymmetricSystem};
use crate::maslov::group_for;
use crate::scalar::Real;
use crate::signatures;
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct NontransversalInstant<T: Real> {
    pub t: T,
    /// `(λ, k)` with `t = 2kπ/√|λ|`.
    pub contributors: Vec<(T, usize)>,
    pub is_final: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CzBreakdown<T: Real> {
    pub nontransversal_set: Vec<NontransversalInstant<T>>,
    /// Start of the invertible part, including the positive-spectrum term.
    pub initial_contribution: i64,
    /// `Σ_{λ>0} σ(g|Ker(A−λ)ⁿ)`, already contained in `initial_contribution`.
    pub positive_spectrum_term: i64,
    pub interior_contributions: Vec<(T, i64)>,
    pub final_contribution: i64,
    /// `−ϱ(g, A, 0) − n₊(g|Ker Aⁿ)`; zero when `A` is invertible.
    pub kernel_correction: i64,
    pub total: i64,
}

/// Radius within which a real eigenvalue counts as zero.
pub(crate) fn zero_radius<T: Real>(spectrum: &[EigenvalueRecord<T>], tol: &Tolerances<T>) -> T {
    let rho = spectrum
        .iter()
        .fold(T::zero(), |acc, r| acc.max((r.value.re * r.value.re + r.value.im * r.value.im).sqrt()));
    tol.eig * rho.max(T::one())
}

fn full_period<T: Real>(lambda: T) -> Option<T> {
    (lambda < T::zero()).then(|| T::two_pi() / (-lambda).sqrt())
}

/// `t ∈ (0, T]` where `Gr Φ(t)` meets the diagonal. A zero eigenvalue makes
/// this the whole interval, reported as [`Error::Continuum`].
pub fn nontransversal_instants<T: Real>(
    spectrum: &[EigenvalueRecord<T>],
    horizon: T,
    tol: &Tolerances<T>,
) -> Result<Vec<NontransversalInstant<T>>> {
    let zr = zero_radius(spectrum, tol);
    if spectrum.iter().any(|r| r.is_real && r.value.re.abs() <= zr) {
        return Err(Error::Continuum);
    }
    Ok(invertible_instants(spectrum, horizon, tol))
}

fn invertible_instants<T: Real>(
    spectrum: &[EigenvalueRecord<T>],
    horizon: T,
    tol: &Tolerances<T>,
) -> Vec<NontransversalInstant<T>> {
    instants_with_period(spectrum, horizon, tol, full_period)
        .into_iter()
        .map(|i| NontransversalInstant {
            t: i.t,
            contributors: i.contributors.iter().map(|c| (c.lambda, c.k)).collect(),
            is_final: i.is_final,
        })
        .collect()
}

pub fn cz_index<T: Real>(
    system: &GSymmetricSystem<T>,
    decomposition: &CanonicalPairDecomposition<T>,
    tol: &Tolerances<T>,
) -> Result<CzBreakdown<T>> {
    let spectrum = decomposition.spectrum();
    let zr = zero_radius(&spectrum, tol);
    let zero: Option<&EigenGroup<T>> = decomposition.real_blocks.iter().find(|g| g.lambda().abs() <= zr);

    let (kernel_correction, kernel_n_plus) = match zero {
        None => (0, 0),
        Some(g0) => {
            let sig = signatures::jordan_signatures(&g0.blocks)?;
            let n_plus = g0.generalized_n_plus() as i64;
            let first = -(sig.varrho as i64) - n_plus;
            let dim_ker = g0.blocks.len() as i64;
            let dim_gen = g0.record.algebraic_multiplicity as i64;
            let second = dim_ker - dim_gen - sig.tau as i64;
            if first != second {
                return Err(Error::numeric(
                    "kernel reduction",
                    format!("the two forms of the kernel contribution disagree ({first} vs {second})"),
                ));
            }
            (first, n_plus)
        }
    };

    let n_plus_reduced = forms::inertia(system.g(), tol.null)?.n_plus as i64 - kernel_n_plus;
    let positive_spectrum_term: i64 = decomposition
        .real_blocks
        .iter()
        .filter(|g| g.lambda() > zr)
        .map(|g| g.generalized_signature())
        .sum();
    let initial_contribution = -2 * n_plus_reduced + positive_spectrum_term;

    let nonzero: Vec<EigenvalueRecord<T>> =
        spectrum.into_iter().filter(|r| !(r.is_real && r.value.re.abs() <= zr)).collect();
    let nontransversal_set = invertible_instants(&nonzero, system.horizon(), tol);

    let mut interior_contributions = Vec::new();
    let mut final_contribution = 0i64;
    for inst in &nontransversal_set {
        let mut c = 0i64;
        for &(lambda, _) in &inst.contributors {
            let group = group_for(decomposition, lambda)?;
            c += if inst.is_final {
                let tau = signatures::jordan_signatures(&group.blocks)?.tau as i64;
                2 * (group.blocks.len() as i64 - tau)
            } else {
                -2 * group.generalized_signature()
            };
        }
        if inst.is_final {
            final_contribution += c;
        } else {
            interior_contributions.push((inst.t, c));
        }
    }
    let total = initial_contribution
        + interior_contributions.iter().map(|x| x.1).sum::<i64>()
        + final_contribution
        + kernel_correction;
    Ok(CzBreakdown {
        nontransversal_set,
        initial_contribution,
        positive_spectrum_term,
        interior_contributions,
        final_contribution,
        kernel_correction,
        total,
    })
}
