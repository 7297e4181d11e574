mod common;

use cpindex::conley_zehnder::{self, nontransversal_instants};
use cpindex::fixtures::named_second_order;
use cpindex::nalgebra::DMatrix;
use cpindex::oracle::{self, OracleConfig};
use cpindex::{jordan, Error, GSymmetricSystem, Tolerances};

fn closed_form(system: &GSymmetricSystem) -> i64 {
    let tol = Tolerances::default();
    let d = jordan::decompose(system, &tol).unwrap();
    conley_zehnder::cz_index(system, &d, &tol).unwrap().total
}

#[test]
fn closed_form_matches_oracle() {
    let cfg = OracleConfig::default();
    let tol = Tolerances::default();
    let mut singular = 0;
    let fixtures: Vec<_> = common::mixed(51, 120).into_iter().filter(|f| f.system.dim() <= 4).collect();
    for f in fixtures.iter().chain(&named_second_order()) {
        let spectrum = jordan::real_spectrum(&f.system, &tol).unwrap();
        if matches!(nontransversal_instants(&spectrum, f.system.horizon(), &tol), Err(Error::Continuum)) {
            singular += 1;
        }
        assert_eq!(closed_form(&f.system), oracle::cz_definitional(&f.system, &cfg).unwrap(), "{}", f.name);
    }
    assert!(singular >= 5, "only {singular} fixtures with singular A");
}

#[test]
fn scalar_examples() {
    let one = |a: f64, t: f64| GSymmetricSystem::new(DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, a), t).unwrap();
    let cfg = OracleConfig::default();
    // v'' = −v on [0, 7]: period 2π is crossed once.
    for (a, t) in [(-1.0, 7.0), (-1.0, 3.0), (1.0, 10.0), (-4.0, 10.0)] {
        let s = one(a, t);
        assert_eq!(closed_form(&s), oracle::cz_definitional(&s, &cfg).unwrap(), "a = {a}, T = {t}");
    }
    assert_eq!(closed_form(&one(-1.0, 3.0)), -2);
}
