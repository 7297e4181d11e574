use cpindex::fixtures::{self, Separation};
use cpindex::nalgebra::DMatrix;
use cpindex::oracle::{self, OracleConfig};
use cpindex::symplectic::{self, Classification};
use cpindex::{conjugate, jordan, maslov, Error, SymplecticCoefficient, Tolerances};

/// The reduced `(g, A)` has the instants and index of the original system.
#[test]
fn reduction_fidelity() {
    let mut rng = fixtures::rng(71);
    let sep = Separation::default();
    let cfg = OracleConfig::default();
    let tol = Tolerances::default();
    for i in 0..40 {
        let (x, horizon) = fixtures::reducible_symplectic(&mut rng, 1 + i % 4, &sep);
        assert_eq!(symplectic::classify(&x, &tol), Classification::Reducible);
        let system = symplectic::reduce(&x, horizon).unwrap();
        let d = jordan::decompose(&system, &tol).unwrap();
        let instants = conjugate::conjugate_instants(&system, &d.spectrum(), &tol);
        let m = maslov::maslov_index(&system, &d, &instants, &tol).unwrap();
        let h = x.hamiltonian();
        assert_eq!(m.total, oracle::maslov_hamiltonian(&h, horizon, &cfg).unwrap(), "case {i}");
        let detected = oracle::detect_hamiltonian(&h, horizon, &cfg).unwrap();
        assert_eq!(instants.len(), detected.len(), "case {i}");
        for (a, &(t, k)) in instants.iter().zip(&detected) {
            assert_eq!(a.multiplicity, k, "case {i}");
            assert!((a.t - t).abs() <= 1e-8 * horizon, "case {i}: {} vs {t}", a.t);
        }
    }
}

#[test]
fn continuum_detection() {
    let mut rng = fixtures::rng(72);
    let tol = Tolerances::default();
    for i in 0..30 {
        let x = fixtures::continuum_symplectic(&mut rng, 1 + i % 4);
        assert_eq!(symplectic::classify(&x, &tol), Classification::DegenerateContinuum, "case {i}");
        assert_eq!(symplectic::reduce(&x, 1.0).unwrap_err(), Error::Continuum);
    }
    let m = |v: &[f64]| DMatrix::from_row_slice(2, 2, v);
    let x = SymplecticCoefficient::new(m(&[0., 0., 0., 0.]), m(&[1., 0., 0., 0.]), m(&[0., 0., 0., 0.])).unwrap();
    let e = symplectic::reduce(&x, 1.0).unwrap_err();
    assert_eq!(e.to_string(), "degenerate_continuum: every instant conjugate");
}

/// The position component solves `v'' + Dv' + Kv = 0`.
#[test]
fn second_order_form_solves_flow() {
    let mut rng = fixtures::rng(73);
    let (x, _) = fixtures::reducible_symplectic(&mut rng, 3, &Separation::default());
    let f = symplectic::second_order_form(&x).unwrap();
    let h = x.hamiltonian();
    let n = x.dim();
    // Along z(t) = exp(tH)z₀: v' = [I 0]Hz, v'' = [I 0]H²z for every z.
    let top = |m: &DMatrix<f64>| m.rows(0, n).into_owned();
    let h2 = &h * &h;
    let residual = top(&h2) + &f.damping * top(&h) + &f.stiffness * top(&DMatrix::identity(2 * n, 2 * n));
    assert!(residual.norm() <= 1e-10 * h2.norm(), "{residual}");
}

#[test]
fn unsupported_is_not_reduced() {
    let m = |v: &[f64]| DMatrix::from_row_slice(2, 2, v);
    let tol = Tolerances::default();
    let x = SymplecticCoefficient::new(m(&[0., 0., 1., 0.]), m(&[1., 0., 0., 0.]), m(&[-1., 0., 0., -1.])).unwrap();
    assert_eq!(symplectic::classify(&x, &tol), Classification::Unsupported);
    assert!(matches!(symplectic::reduce(&x, 1.0), Err(Error::NotReducible(_))));
    let cfg = OracleConfig::default();
    assert!(oracle::maslov_hamiltonian(&x.hamiltonian(), 6.0, &cfg).is_ok());
}
