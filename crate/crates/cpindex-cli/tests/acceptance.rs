//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cpindex::conley_zehnder::{self, nontransversal_instants};
use cpindex::fixtures::{self, named_second_order, Fixture, Separation, SpectrumMix};
use cpindex::liegroup::{self, examples, LieAlgebraSpec};
use cpindex::nalgebra::{DMatrix, DVector, SymmetricEigen};
use cpindex::oracle::{self, OracleConfig};
use cpindex::symplectic::{self, Classification};
use cpindex::{conjugate, jordan, maslov, signatures, Error, GSymmetricSystem, MaslovBreakdown, Tolerances};
use cpindex_cli::ProblemFile;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn null_space(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max().max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= rel * smax).collect();
    DMatrix::from_fn(n, keep.len(), |r, c| v_t[(keep[c], r)])
}

/// The `k` right singular vectors of smallest singular value and the ratio
/// `σ_k / σ_{k+1}`.
fn smallest_right_vectors(m: &DMatrix<f64>, k: usize) -> (DMatrix<f64>, f64) {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let out = DMatrix::from_fn(n, k, |r, c| v_t[(order[c], r)]);
    let gap = if k < n { svd.singular_values[order[k - 1]] / svd.singular_values[order[k]] } else { 0.0 };
    (out, gap)
}

/// `(n₊, n₋, nullity)` from symmetric eigenvalues.
fn inertia(m: &DMatrix<f64>, rel: f64) -> (usize, usize, usize) {
    if m.nrows() == 0 {
        return (0, 0, 0);
    }
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5).eigenvalues;
    let scale = eig.amax().max(1.0);
    let plus = eig.iter().filter(|&&e| e > rel * scale).count();
    let minus = eig.iter().filter(|&&e| e < -rel * scale).count();
    (plus, minus, eig.len() - plus - minus)
}

fn restrict(g: &DMatrix<f64>, basis: &DMatrix<f64>) -> DMatrix<f64> {
    basis.transpose() * g * basis
}

fn shifted(a: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    a - DMatrix::identity(a.nrows(), a.ncols()) * lambda
}

fn closed_maslov(system: &GSymmetricSystem, tol: &Tolerances<f64>) -> Result<MaslovBreakdown, Error> {
    let d = jordan::decompose(system, tol)?;
    let instants = conjugate::conjugate_instants(system, &d.spectrum(), tol);
    maslov::maslov_index(system, &d, &instants, tol)
}

fn corpus() -> Vec<Fixture> {
    let mut all = fixtures::mixed(&mut fixtures::rng(2001), 500, &Separation::default());
    all.extend(named_second_order());
    all
}

fn criterion1(corpus: &[Fixture]) -> Outcome {
    let tol = Tolerances::default();
    let mut blocks = 0;
    for f in corpus {
        let d = jordan::decompose(&f.system, &tol).map_err(|e| format!("{}: {e}", f.name))?;
        let (rg, ra) = d.reconstruction_residual(&f.system).map_err(|e| e.to_string())?;
        ensure!(rg.max(ra) <= 1e-8, "{}: residuals {rg:e}, {ra:e}", f.name);
        for group in &d.real_blocks {
            let kernel = null_space(&shifted(f.system.a(), group.lambda()), 1e-7).ncols();
            ensure!(
                group.blocks.len() == kernel && kernel == group.record.geometric_multiplicity,
                "{}: {} blocks at λ = {}, dim Ker = {kernel}",
                f.name,
                group.blocks.len(),
                group.lambda()
            );
            blocks += group.blocks.len();
        }
    }
    Ok(format!("{} systems, {blocks} real blocks", corpus.len()))
}

fn criterion2(corpus: &[Fixture]) -> Outcome {
    let tol = Tolerances::default();
    let mut checked = 0;
    for f in corpus {
        let d = jordan::decompose(&f.system, &tol).map_err(|e| e.to_string())?;
        for group in &d.real_blocks {
            let sig = signatures::jordan_signatures(&group.blocks).map_err(|e| e.to_string())?;
            let a = shifted(f.system.a(), group.lambda());
            let kernel = null_space(&a, 1e-7).ncols();
            let m = group.record.algebraic_multiplicity;
            let (generalized, gap) = smallest_right_vectors(&a.pow(m as u32), m);
            ensure!(gap <= 1e-4, "{}: generalized eigenspace at λ = {} not separated", f.name, group.lambda());
            let (_, n_minus, nullity) = inertia(&restrict(f.system.g().matrix(), &generalized), 1e-8);
            ensure!(nullity == 0, "{}: g degenerate on Ker(A − λ)ⁿ", f.name);
            let rhs = sig.varrho as i64 + kernel as i64 - n_minus as i64;
            ensure!(sig.tau as i64 == rhs, "{} at λ = {}: τ = {} but right side {rhs}", f.name, group.lambda(), sig.tau);
            checked += 1;
        }
    }
    Ok(format!("{checked} real eigenvalues"))
}

fn criterion3(corpus: &[Fixture]) -> Outcome {
    let tol = Tolerances::default();
    let cfg = OracleConfig::default();
    let mut total = 0;
    for f in corpus {
        let spectrum = jordan::real_spectrum(&f.system, &tol).map_err(|e| e.to_string())?;
        let horizon = f.system.horizon();
        let formula = conjugate::count_formula(&spectrum, horizon, &tol);
        let instants = conjugate::conjugate_instants(&f.system, &spectrum, &tol);
        let detected = oracle::detect_conjugate(&f.system, &cfg).map_err(|e| format!("{}: {e}", f.name))?;
        let by_instants: usize = instants.iter().map(|i| i.multiplicity).sum();
        let by_oracle: usize = detected.iter().map(|d| d.1).sum();
        ensure!(formula == by_instants && formula == by_oracle, "{}: {formula} / {by_instants} / {by_oracle}", f.name);
        ensure!(instants.len() == detected.len(), "{}: {} vs {} instants", f.name, instants.len(), detected.len());
        for (i, &(t, k)) in instants.iter().zip(&detected) {
            ensure!(i.multiplicity == k, "{} at t = {t}: multiplicity {} vs {k}", f.name, i.multiplicity);
            ensure!((i.t - t).abs() <= 1e-8 * horizon, "{}: t = {} vs {t}", f.name, i.t);
        }
        total += formula;
    }
    Ok(format!("{} systems, {total} conjugate points", corpus.len()))
}

fn criterion4(corpus: &[Fixture]) -> Outcome {
    let tol = Tolerances::default();
    let cfg = OracleConfig::default();
    let random: Vec<&Fixture> = corpus.iter().filter(|f| f.system.dim() <= 6).take(250).collect();
    let named = named_second_order();
    for f in random.iter().copied().chain(&named) {
        let closed = closed_maslov(&f.system, &tol).map_err(|e| format!("{}: {e}", f.name))?.total;
        let definitional = oracle::maslov_definitional(&f.system, &cfg).map_err(|e| format!("{}: {e}", f.name))?;
        ensure!(closed == definitional, "{}: closed form {closed}, oracle {definitional}", f.name);
    }
    for (name, expected) in [("riemannian-I2", 2), ("sip2-jordan-pi", -1), ("split-diagonal", -2)] {
        let f = named.iter().find(|f| f.name == name).ok_or(name)?;
        let m = closed_maslov(&f.system, &tol).map_err(|e| e.to_string())?.total;
        ensure!(m == expected, "{name}: μ = {m}, expected {expected}");
    }
    let riemannian = named.iter().find(|f| f.name == "riemannian-I2").ok_or("riemannian-I2")?;
    let m = closed_maslov(&riemannian.system, &tol).map_err(|e| e.to_string())?;
    let count: usize = m.per_instant.iter().map(|(i, _)| i.multiplicity).sum();
    ensure!(m.total == count as i64, "definite g: μ = {} but {count} conjugate points", m.total);
    Ok(format!("{} random + {} named systems", random.len(), named.len()))
}

fn criterion5() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = fixtures::rng(2005);
    let sep = Separation::default();
    let mut points = 0;
    for i in 0..100 {
        let f = fixtures::generic(&mut rng, 1 + i % 6, true, &sep);
        let m = closed_maslov(&f.system, &tol).map_err(|e| e.to_string())?;
        let count: usize = m.per_instant.iter().map(|(i, _)| i.multiplicity).sum();
        ensure!(m.total == count as i64, "{} #{i}: μ = {}, Σ multiplicities = {count}", f.name, m.total);
        points += count;
    }
    Ok(format!("100 systems, {points} conjugate points"))
}

fn criterion6() -> Outcome {
    let tol = Tolerances::default();
    let cfg = OracleConfig::default();
    let sep = Separation::default();
    let mut rng = fixtures::rng(2006);
    let (mut total, mut singular) = (0, 0);
    let mut i = 0usize;
    while total < 120 || singular < 12 {
        let dim = 1 + i % 4;
        let f = match i % 3 {
            0 => fixtures::constructed(&mut rng, dim, &SpectrumMix { allow_zero: true, ..Default::default() }, &sep),
            1 => fixtures::constructed(&mut rng, dim, &SpectrumMix::default(), &sep),
            _ => fixtures::generic(&mut rng, dim, i % 2 == 0, &sep),
        };
        i += 1;
        let spectrum = jordan::real_spectrum(&f.system, &tol).map_err(|e| e.to_string())?;
        let is_singular = matches!(nontransversal_instants(&spectrum, f.system.horizon(), &tol), Err(Error::Continuum));
        if total >= 120 && !is_singular {
            continue;
        }
        let d = jordan::decompose(&f.system, &tol).map_err(|e| e.to_string())?;
        let closed = conley_zehnder::cz_index(&f.system, &d, &tol).map_err(|e| format!("{}: {e}", f.name))?.total;
        let definitional = oracle::cz_definitional(&f.system, &cfg).map_err(|e| format!("{}: {e}", f.name))?;
        ensure!(closed == definitional, "{} #{i}: closed form {closed}, oracle {definitional}", f.name);
        total += 1;
        singular += usize::from(is_singular);
    }
    Ok(format!("{total} systems (dim ≤ 4), {singular} with singular A"))
}

fn criterion7() -> Outcome {
    let tol = Tolerances::default();
    let cfg = OracleConfig::default();
    let sep = Separation::default();
    let mut rng = fixtures::rng(2007);
    for i in 0..100 {
        let (x, horizon) = fixtures::reducible_symplectic(&mut rng, 1 + i % 5, &sep);
        let system = symplectic::reduce(&x, horizon).map_err(|e| format!("#{i}: {e}"))?;
        let d = jordan::decompose(&system, &tol).map_err(|e| e.to_string())?;
        let instants = conjugate::conjugate_instants(&system, &d.spectrum(), &tol);
        let m = maslov::maslov_index(&system, &d, &instants, &tol).map_err(|e| e.to_string())?;
        let h = x.hamiltonian();
        let mu = oracle::maslov_hamiltonian(&h, horizon, &cfg).map_err(|e| e.to_string())?;
        ensure!(m.total == mu, "#{i}: reduced μ = {}, original {mu}", m.total);
        let detected = oracle::detect_hamiltonian(&h, horizon, &cfg).map_err(|e| e.to_string())?;
        ensure!(instants.len() == detected.len(), "#{i}: {} vs {} instants", instants.len(), detected.len());
        for (a, &(t, k)) in instants.iter().zip(&detected) {
            ensure!(a.multiplicity == k && (a.t - t).abs() <= 1e-8 * horizon, "#{i}: ({}, {}) vs ({t}, {k})", a.t, a.multiplicity);
        }
    }
    for i in 0..50 {
        let x = fixtures::continuum_symplectic(&mut rng, 1 + i % 5);
        ensure!(symplectic::classify(&x, &tol) == Classification::DegenerateContinuum, "continuum #{i} not detected");
        ensure!(symplectic::reduce(&x, 1.0) == Err(Error::Continuum), "continuum #{i} reduced");
    }
    Ok("100 reducible, 50 continuum".into())
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })
}

fn criterion8() -> Outcome {
    let tol = Tolerances::default();
    let cfg = OracleConfig::default();

    let so3 = examples::so3();
    let r = liegroup::geodesic_report(&so3, &unit(3, 2), 20.0, &tol).map_err(|e| e.to_string())?;
    ensure!(r.instants.len() == 3, "so(3): {} instants on (0, 20]", r.instants.len());
    for (k, g) in r.instants.iter().enumerate() {
        ensure!((g.instant.t - 2.0 * PI * (k + 1) as f64).abs() < 1e-12, "so(3): instant at {}", g.instant.t);
        ensure!(
            g.instant.multiplicity == 2 && !g.instant.degenerate && g.contribution == 2,
            "so(3) at {}: ({}, {}, {})",
            g.instant.t,
            g.instant.multiplicity,
            g.instant.degenerate,
            g.contribution
        );
    }
    let mu = oracle::maslov_definitional(&r.system, &cfg).map_err(|e| e.to_string())?;
    ensure!(mu == r.maslov.total, "so(3): oracle {mu}, closed form {}", r.maslov.total);

    let algebras: Vec<(&str, LieAlgebraSpec<f64>)> = vec![
        ("so3", examples::so3()),
        ("so21", examples::so21()),
        ("oscillator", examples::oscillator()),
        ("abelian4", examples::abelian(4)),
        ("s3xs3(0)", examples::s3xs3(0.0)),
        ("s3xs3(0.7)", examples::s3xs3(0.7)),
    ];
    let mut rng = fixtures::rng(2008);
    let (mut instants, mut polys) = (0, 0);
    for (name, spec) in &algebras {
        let n = spec.dim();
        let q = fixtures::random_orthogonal(&mut rng, n);
        let lorentzian = spec.metric_signs().iter().filter(|&&e| e < 0).count() == 1;
        let directions = (0..n).map(|i| unit(n, i)).chain((0..n).map(|j| q.column(j).into_owned()));
        for x in directions {
            let h: f64 = (0..n).map(|i| spec.eps(i) * x[i] * x[i]).sum();
            if h.abs() < 0.05 {
                continue;
            }
            let r = liegroup::geodesic_report(spec, &x, 15.0, &tol).map_err(|e| format!("{name}: {e}"))?;
            for g in &r.instants {
                ensure!(g.instant.multiplicity % 2 == 0, "{name} {x}: odd multiplicity at {}", g.instant.t);
                if lorentzian {
                    ensure!(g.contribution == g.instant.multiplicity as i64, "{name} {x}: contribution {}", g.contribution);
                }
                instants += 1;
            }
            let mu = oracle::maslov_definitional(&r.system, &cfg).map_err(|e| e.to_string())?;
            ensure!(mu == r.maslov.total, "{name} {x}: oracle {mu}, closed form {}", r.maslov.total);
            if let Some(p) = &r.pfaffian {
                if p.identities_hold {
                    ensure!(p.char_poly.deviation <= 1e-9, "{name} {x}: deviation {:e}", p.char_poly.deviation);
                    polys += 1;
                }
            }
        }
    }
    let s3 = examples::s3xs3(0.7);
    let last = s3.dim() - 1;
    ensure!(!liegroup::check_identities(&s3, last, &tol).map_err(|e| e.to_string())?, "S³×S³ accepted by check_identities");
    ensure!(liegroup::char_poly_pfaffian(&s3, last, &tol) == Err(Error::IdentitiesFail), "S³×S³ Pfaffian path not refused");
    Ok(format!("{instants} instants, {polys} Pfaffian polynomials"))
}

fn criterion9(corpus: &[Fixture]) -> Outcome {
    let tol = Tolerances::default();
    let (mut degenerate, mut regular) = (0, 0);
    for f in corpus {
        let d = jordan::decompose(&f.system, &tol).map_err(|e| e.to_string())?;
        for inst in conjugate::conjugate_instants(&f.system, &d.spectrum(), &tol) {
            let nilpotent = inst.contributors.iter().any(|c| c.algebraic_multiplicity > c.geometric_multiplicity);
            let restricted = inst.contributors.iter().any(|c| {
                let kernel = null_space(&shifted(f.system.a(), c.lambda), 1e-7);
                inertia(&restrict(f.system.g().matrix(), &kernel), 1e-7).2 > 0
            });
            ensure!(
                inst.degenerate == nilpotent && nilpotent == restricted,
                "{} at t = {}: flagged {}, nilpotent part {nilpotent}, g|Ker degenerate {restricted}",
                f.name,
                inst.t,
                inst.degenerate
            );
            if nilpotent {
                degenerate += 1;
            } else {
                regular += 1;
            }
        }
    }
    ensure!(degenerate > 0 && regular > 0, "only one direction exercised ({degenerate}, {regular})");
    Ok(format!("{degenerate} degenerate, {regular} nondegenerate instants"))
}

fn criterion10() -> Outcome {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    let mut summaries = Vec::new();
    for dir in &dirs {
        let out = Command::new(env!("CARGO_BIN_EXE_cpindex"))
            .args(["batch", corpus.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])
            .env_remove("MASLOV_TOL_OVERRIDE")
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "batch exited with {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stdout));
        summaries.push(out.stdout);
    }
    ensure!(summaries[0] == summaries[1], "batch summaries differ");
    let mut files = 0;
    for entry in std::fs::read_dir(dirs[0].path()).map_err(|e| e.to_string())? {
        let name = entry.map_err(|e| e.to_string())?.file_name();
        let a = std::fs::read(dirs[0].path().join(&name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].path().join(&name)).map_err(|e| e.to_string())?;
        ensure!(a == b, "{name:?} differs between runs");
        let report: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
        ensure!(report["status"] == "ok", "{name:?}: status {}", report["status"]);
        let echo = serde_json::to_string(&report["echo"]).map_err(|e| e.to_string())?;
        ProblemFile::parse(&echo).map_err(|e| format!("{name:?}: echo does not re-parse: {e}"))?;
        files += 1;
    }
    ensure!(files > 0, "no reports written");
    Ok(format!("{files} reports byte-stable, echoes re-parse"))
}

fn run(id: u32, name: &str, budget: Option<Duration>, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
    let elapsed = start.elapsed();
    let result = match (result, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
        (r, _) => r,
    };
    let pass = result.is_ok();
    let detail = result.unwrap_or_else(|e| e);
    println!("{} criterion {id:>2}: {name} — {detail} [{:.2}s]", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    pass
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = corpus();
    let generated = start.elapsed();
    let mut ok = true;
    ok &= run(1, "canonical-pair reconstruction", Some(Duration::from_secs(30) - generated), || criterion1(&corpus));
    ok &= run(2, "Jordan-signature identity", None, || criterion2(&corpus));
    ok &= run(3, "conjugate-count formula", None, || criterion3(&corpus));
    ok &= run(4, "Maslov closed form vs oracle", Some(Duration::from_secs(300)), || criterion4(&corpus));
    ok &= run(5, "Riemannian specialization", None, criterion5);
    ok &= run(6, "Conley–Zehnder closed form vs oracle", None, criterion6);
    ok &= run(7, "symplectic reduction fidelity", None, criterion7);
    ok &= run(8, "Lie-group suite", None, criterion8);
    ok &= run(9, "degeneracy criterion", None, || criterion9(&corpus));
    ok &= run(10, "CLI determinism and round-trip", None, criterion10);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
