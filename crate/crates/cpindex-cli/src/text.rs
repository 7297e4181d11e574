//! Human-readable rendering of reports and batch summaries.

use std::fmt::Write;

use crate::batch::{BatchSummary, FileOutcome};
use crate::report::{Agreement, ErrorReport, Report, Status};

fn status(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Disagreement => "DISAGREEMENT",
        Status::Failed => "FAILED",
    }
}

fn flag(f: Option<bool>) -> &'static str {
    match f {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "n/a",
    }
}

fn agreement(a: &Agreement) -> String {
    format!(
        "maslov {}, instants {}, cz {}",
        flag(a.maslov),
        flag(a.conjugate_instants),
        flag(a.conley_zehnder)
    )
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let e = &report.echo;
    let _ = writeln!(out, "{}  kind {}  T = {}  status {}", report.generator, e.kind.as_str(), e.horizon.0, status(report.status));

    if let Some(s) = &report.symplectic {
        let _ = writeln!(out, "classification: {}", s.classification);
    }
    if let Some(a) = &report.analysis {
        let _ = writeln!(out, "\nspectrum (dim {})", a.dim);
        for r in &a.spectrum {
            let value = if r.real { format!("{}", r.re.0) } else { format!("{} ± {}i", r.re.0, r.im.0) };
            let _ = writeln!(out, "  {value:<40} alg {}  geo {}", r.algebraic_multiplicity, r.geometric_multiplicity);
        }
        if !a.canonical_blocks.is_empty() {
            let _ = writeln!(out, "\ncanonical blocks (λ, size, ε)");
            for b in &a.canonical_blocks {
                let _ = writeln!(out, "  {:<24} {:>4} {:>+3}", b.lambda.0, b.size, b.epsilon);
            }
            let _ = writeln!(out, "\njordan signatures (λ: ς, ϱ, τ)");
            for s in &a.jordan_signatures {
                let _ = writeln!(out, "  {:<24} {:>3} {:>3} {:>3}", s.lambda.0, s.varsigma, s.varrho, s.tau);
            }
        }
        let _ = writeln!(out, "\nconjugate instants ({} counted with multiplicity)", a.conjugate_count);
        let _ = writeln!(
            out,
            "  {:<24} {:<36} {:>12} {:>10} {:>12}",
            "t", "contributors", "multiplicity", "degenerate", "contribution"
        );
        for i in &a.conjugate_instants {
            let contributors: Vec<String> =
                i.contributors.iter().map(|c| format!("λ={} k={}", c.lambda.0, c.k)).collect();
            let t = if i.is_final { format!("{} (final)", i.t.0) } else { format!("{}", i.t.0) };
            let _ = writeln!(
                out,
                "  {:<24} {:<36} {:>12} {:>10} {:>12}",
                t,
                contributors.join("; "),
                i.multiplicity,
                if i.degenerate { "yes" } else { "no" },
                i.contribution
            );
        }
        let _ = writeln!(out, "\nmaslov index      {}  (Robbin–Salamon {})", a.maslov.total, a.maslov.rs_value.0);
        if let Some(cz) = &a.conley_zehnder {
            let _ = writeln!(out, "conley–zehnder    {}", cz.total);
        }
    }
    if let Some(g) = &report.geodesic {
        let _ = writeln!(
            out,
            "\ngeodesic: even multiplicities {}, spectrally consistent {}",
            g.even_multiplicities, g.spectrally_consistent
        );
        if let Some(p) = &g.pfaffian {
            let _ = writeln!(out, "  pfaffian identities hold {}, s = {}", p.identities_hold, p.s.0);
        }
    }
    if let Some(o) = &report.oracle {
        let cz = o.conley_zehnder.map_or("-".to_string(), |c| c.to_string());
        let _ = writeln!(
            out,
            "\noracle: maslov {}, cz {}, {} instants; agreement: {}",
            o.maslov,
            cz,
            o.conjugate_instants.len(),
            agreement(&o.agreement)
        );
    }
    if let Some(t) = &report.timing {
        let _ = writeln!(out, "timing: closed form {:.3} ms, oracle {:.3} ms", t.closed_form_ms.0, t.oracle_ms.0);
    }
    out
}

pub fn render_error(report: &ErrorReport) -> String {
    format!(
        "{}  status {}  exit {}\n{} error ({}): {}\n",
        report.generator,
        status(report.status),
        report.exit_code,
        serde_json::to_value(report.error.category).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
        report.error.invariant,
        report.error.message
    )
}

pub fn render_summary(summary: &BatchSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<40} {:<13} {:>4} {:>7} {:>5}  agreement", "file", "status", "exit", "maslov", "cz");
    for f in &summary.files {
        let FileOutcome { file, status: s, exit_code, maslov, conley_zehnder, agreement: a, error } = f;
        let detail = match (a, error) {
            (Some(a), _) => agreement(a),
            (None, Some(e)) => format!("{}: {}", e.invariant, e.message),
            (None, None) => "-".into(),
        };
        let show = |v: &Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(
            out,
            "{:<40} {:<13} {:>4} {:>7} {:>5}  {}",
            file,
            status(*s),
            exit_code,
            show(maslov),
            show(conley_zehnder),
            detail
        );
    }
    let t = &summary.totals;
    let _ = writeln!(out, "\n{} files: {} ok, {} disagreement, {} failed", t.files, t.ok, t.disagreement, t.failed);
    out
}
