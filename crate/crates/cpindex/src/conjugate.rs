//! Conjugate instants of `v'' = A v` on `(0, T]`.
//!
//! A real eigenvalue `λ < 0` produces instants `kπ/√|λ|`; nothing else does.

use crate::jordan::{EigenvalueRecord, GSymmetricSystem};
use crate::scalar::Real;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contributor<T: Real> {
    pub lambda: T,
    pub k: usize,
    pub geometric_multiplicity: usize,
    pub algebraic_multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateInstant<T: Real> {
    pub t: T,
    pub contributors: Vec<Contributor<T>>,
    pub multiplicity: usize,
    pub degenerate: bool,
    pub is_final: bool,
}

/// Instants `t = k·period(λ) ≤ T + band` for every real λ accepted by
/// `select`, merged when closer than `band = tol.merge · T`.
pub(crate) fn instants_with_period<T: Real>(
    spectrum: &[EigenvalueRecord<T>],
    horizon: T,
    tol: &Tolerances<T>,
    period: impl Fn(T) -> Option<T>,
) -> Vec<ConjugateInstant<T>> {
    let band = tol.merge * horizon;
    let mut raw: Vec<(T, Contributor<T>)> = Vec::new();
    for rec in spectrum.iter().filter(|r| r.is_real) {
        let Some(p) = period(rec.value.re) else { continue };
        let kmax = ((horizon + band) / p).floor().to_usize().unwrap_or(0);
        for k in 1..=kmax {
            raw.push((
                p * T::from_usize_lossy(k),
                Contributor {
                    lambda: rec.value.re,
                    k,
                    geometric_multiplicity: rec.geometric_multiplicity,
                    algebraic_multiplicity: rec.algebraic_multiplicity,
                },
            ));
        }
    }
    raw.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<ConjugateInstant<T>> = Vec::new();
    let mut anchor = T::zero();
    for (t, c) in raw {
        match out.last_mut() {
            Some(last) if t - anchor <= band => {
                last.contributors.push(c);
            }
            _ => {
                anchor = t;
                out.push(ConjugateInstant {
                    t,
                    contributors: vec![c],
                    multiplicity: 0,
                    degenerate: false,
                    is_final: false,
                });
            }
        }
    }
    for inst in &mut out {
        inst.multiplicity = inst.contributors.iter().map(|c| c.geometric_multiplicity).sum();
        inst.degenerate = inst.contributors.iter().any(|c| c.algebraic_multiplicity != c.geometric_multiplicity);
        inst.is_final = (inst.t - horizon).abs() <= band;
        if inst.is_final {
            inst.t = horizon;
        }
    }
    out
}

fn half_period<T: Real>(lambda: T) -> Option<T> {
    (lambda < T::zero()).then(|| T::pi() / (-lambda).sqrt())
}

/// Ordered conjugate instants in `(0, T]` with multiplicity and degeneracy.
pub fn conjugate_instants<T: Real>(
    system: &GSymmetricSystem<T>,
    spectrum: &[EigenvalueRecord<T>],
    tol: &Tolerances<T>,
) -> Vec<ConjugateInstant<T>> {
    instants_with_period(spectrum, system.horizon(), tol, half_period)
}

/// `Σ_λ<0 dim Ker(A − λ) · ⌊T√|λ|/π⌋`, with the same band at `T` as
/// [`conjugate_instants`].
pub fn count_formula<T: Real>(spectrum: &[EigenvalueRecord<T>], horizon: T, tol: &Tolerances<T>) -> usize {
    let band = tol.merge * horizon;
    spectrum
        .iter()
        .filter(|r| r.is_real && r.value.re < T::zero())
        .map(|r| {
            let p = T::pi() / (-r.value.re).sqrt();
            r.geometric_multiplicity * ((horizon + band) / p).floor().to_usize().unwrap_or(0)
        })
        .sum()
}
