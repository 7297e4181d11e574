//! Closed-form Maslov index μ(g, A, T) and per-instant contributions.
//!
//! Interior instants contribute the signature of `g` on the generalized
//! eigenspaces of the contributing eigenvalues; an instant at `T` contributes
//! their Jordan signature τ. The path starts inside the Maslov cycle, which
//! costs `−n₋(g)`. The alternative convention that drops the initial point
//! equals `total + n₋(g)`.

use crate::conjugate::ConjugateInstant;
use crate::error::{Error, Result};
use crate::forms;
use crate::jordan::{CanonicalPairDecomposition, EigenGroup, GSymmetricSystem};
use crate::scalar::Real;
use crate::signatures;
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct MaslovBreakdown<T: Real> {
    pub per_instant: Vec<(ConjugateInstant<T>, i64)>,
    /// `−n₋(g)`.
    pub initial_correction: i64,
    pub total: i64,
    /// Twice the Robbin–Salamon value `μ + n/2 − dim(ℓ(T) ∩ L₀)/2`.
    pub rs_twice: i64,
}

impl<T: Real> MaslovBreakdown<T> {
    pub fn rs_value(&self) -> f64 {
        self.rs_twice as f64 / 2.0
    }
}

pub(crate) fn group_for<'a, T: Real>(
    decomposition: &'a CanonicalPairDecomposition<T>,
    lambda: T,
) -> Result<&'a EigenGroup<T>> {
    let band = T::eps() * T::lit(1e3) * lambda.abs().max(T::one());
    decomposition
        .group(lambda, band)
        .ok_or_else(|| Error::ForeignInstant(format!("no eigenvalue {:e} in decomposition", lambda.as_f64())))
}

/// Contribution of one conjugate instant.
pub fn instant_contribution<T: Real>(
    decomposition: &CanonicalPairDecomposition<T>,
    instant: &ConjugateInstant<T>,
) -> Result<i64> {
    let mut total = 0i64;
    for c in &instant.contributors {
        let group = group_for(decomposition, c.lambda)?;
        if group.blocks.len() != c.geometric_multiplicity {
            return Err(Error::ForeignInstant("multiplicity does not match decomposition".into()));
        }
        total += if instant.is_final {
            signatures::jordan_signatures(&group.blocks)?.tau as i64
        } else {
            group.generalized_signature()
        };
    }
    Ok(total)
}

pub fn maslov_index<T: Real>(
    system: &GSymmetricSystem<T>,
    decomposition: &CanonicalPairDecomposition<T>,
    instants: &[ConjugateInstant<T>],
    tol: &Tolerances<T>,
) -> Result<MaslovBreakdown<T>> {
    let n_minus = forms::inertia(system.g(), tol.null)?.n_minus as i64;
    let mut per_instant = Vec::with_capacity(instants.len());
    let mut sum = 0i64;
    for inst in instants {
        let c = instant_contribution(decomposition, inst)?;
        sum += c;
        per_instant.push((inst.clone(), c));
    }
    let total = sum - n_minus;
    let final_mult = instants.iter().filter(|i| i.is_final).map(|i| i.multiplicity as i64).sum::<i64>();
    Ok(MaslovBreakdown {
        per_instant,
        initial_correction: -n_minus,
        total,
        rs_twice: 2 * total + system.dim() as i64 - final_mult,
    })
}
