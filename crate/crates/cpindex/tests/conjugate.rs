mod common;

use cpindex::conjugate::{self, ConjugateInstant};
use cpindex::fixtures::named_second_order;
use cpindex::oracle::{self, OracleConfig};
use cpindex::{jordan, Tolerances};

fn assert_matches(name: &str, closed: &[ConjugateInstant<f64>], detected: &[(f64, usize)], horizon: f64) {
    assert_eq!(closed.len(), detected.len(), "{name}: {closed:?} vs {detected:?}");
    for (c, &(t, d)) in closed.iter().zip(detected) {
        assert_eq!(c.multiplicity, d, "{name} at t = {t}");
        assert!((c.t - t).abs() <= 1e-8 * horizon, "{name}: {} vs {t}", c.t);
    }
}

/// Σ dim Ker(A − λ)·⌊T√|λ|/π⌋ = Σ multiplicities = Σ oracle deficiencies.
#[test]
fn count_formula_three_ways() {
    let tol = Tolerances::default();
    let cfg = OracleConfig::default();
    for f in common::mixed(31, 60).iter().chain(&named_second_order()) {
        let spectrum = jordan::real_spectrum(&f.system, &tol).unwrap();
        let instants = conjugate::conjugate_instants(&f.system, &spectrum, &tol);
        let detected = oracle::detect_conjugate(&f.system, &cfg).unwrap();
        let formula = conjugate::count_formula(&spectrum, f.system.horizon(), &tol);
        assert_eq!(formula, instants.iter().map(|i| i.multiplicity).sum::<usize>(), "{}", f.name);
        assert_eq!(formula, detected.iter().map(|d| d.1).sum::<usize>(), "{}", f.name);
        assert_matches(&f.name, &instants, &detected, f.system.horizon());
    }
}

#[test]
fn instants_of_an_oscillator() {
    let tol = Tolerances::default();
    let f = named_second_order().into_iter().find(|f| f.name == "oscillator-7").unwrap();
    let spectrum = jordan::real_spectrum(&f.system, &tol).unwrap();
    let instants = conjugate::conjugate_instants(&f.system, &spectrum, &tol);
    let t: Vec<f64> = instants.iter().map(|i| i.t).collect();
    assert_eq!(t.len(), 2);
    assert!((t[0] - std::f64::consts::PI).abs() < 1e-12 && (t[1] - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(instants.iter().all(|i| i.multiplicity == 1 && !i.degenerate && !i.is_final));
}

/// An instant at `T` itself is reported as final.
#[test]
fn final_instant_is_flagged() {
    let tol = Tolerances::default();
    let f = named_second_order().into_iter().find(|f| f.name == "sip2-jordan-pi").unwrap();
    let spectrum = jordan::real_spectrum(&f.system, &tol).unwrap();
    let instants = conjugate::conjugate_instants(&f.system, &spectrum, &tol);
    assert_eq!(instants.len(), 1);
    assert!(instants[0].is_final && instants[0].degenerate);
    let detected = oracle::detect_conjugate(&f.system, &OracleConfig::default()).unwrap();
    assert_matches(&f.name, &instants, &detected, f.system.horizon());
}
