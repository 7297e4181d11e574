mod common;

use cpindex::fixtures::named_second_order;
use cpindex::signatures::{self, BlockSignature};
use cpindex::{conjugate, jordan, Tolerances};

/// τ = ϱ + dim Ker(A − λ) − n₋(g|Ker(A − λ)ⁿ), right side from null spaces
/// and eigenvalue inertia computed here.
#[test]
fn tau_identity() {
    let tol = Tolerances::default();
    let mut checked = 0;
    for f in common::mixed(21, 120).iter().chain(&named_second_order()) {
        let d = jordan::decompose(&f.system, &tol).unwrap();
        for group in &d.real_blocks {
            let sig = signatures::jordan_signatures(&group.blocks).unwrap();
            let shifted = common::shifted(f.system.a(), group.lambda());
            let kernel = common::null_space(&shifted, 1e-7).ncols();
            let m = group.record.algebraic_multiplicity;
            let (generalized, gap) = common::smallest_right_vectors(&shifted.pow(m as u32), m);
            assert!(gap <= 1e-4, "{}: no spectral gap at λ = {} ({gap:e})", f.name, group.lambda());
            let (_, n_minus, nullity) = common::inertia(&common::restrict(f.system.g().matrix(), &generalized), 1e-8);
            assert_eq!(nullity, 0, "{}: g degenerate on a generalized eigenspace", f.name);
            let rhs = sig.varrho as i64 + kernel as i64 - n_minus as i64;
            assert_eq!(sig.tau as i64, rhs, "{} at λ = {}", f.name, group.lambda());
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} eigenvalues checked");
}

#[test]
fn block_table() {
    // (size, ε) → (ς, ϱ, τ)
    for (size, eps, expected) in [
        (1, 1, (0, 0, 1)),
        (1, -1, (1, 0, 0)),
        (2, 1, (1, 0, 0)),
        (2, -1, (1, 1, 1)),
        (3, 1, (1, 1, 1)),
        (3, -1, (2, 1, 0)),
    ] {
        let b = BlockSignature::new(size, eps);
        assert_eq!((b.varsigma, b.varrho, b.tau), expected, "size {size}, ε {eps}");
    }
}

/// An instant is degenerate exactly when `g|Ker(A − λ)` is degenerate for
/// a contributing eigenvalue.
#[test]
fn degeneracy_criterion() {
    let tol = Tolerances::default();
    let (mut degenerate, mut regular) = (0, 0);
    for f in common::mixed(22, 120).iter().chain(&named_second_order()) {
        let d = jordan::decompose(&f.system, &tol).unwrap();
        for inst in conjugate::conjugate_instants(&f.system, &d.spectrum(), &tol) {
            let restricted_degenerate = inst.contributors.iter().any(|c| {
                let kernel = common::null_space(&common::shifted(f.system.a(), c.lambda), 1e-7);
                common::inertia(&common::restrict(f.system.g().matrix(), &kernel), 1e-7).2 > 0
            });
            assert_eq!(inst.degenerate, restricted_degenerate, "{} at t = {}", f.name, inst.t);
            if inst.degenerate {
                degenerate += 1;
            } else {
                regular += 1;
            }
        }
    }
    assert!(degenerate >= 10 && regular >= 10, "{degenerate} degenerate, {regular} regular");
}
