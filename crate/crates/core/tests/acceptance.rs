//! The acceptance battery: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p geovertex --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use geovertex::checker::{run_suite, Config, SuiteReport};

struct Criterion {
    n: u32,
    title: &'static str,
    suite: &'static str,
    budget: u64,
    /// Extra condition on the report beyond "every record passes".
    extra: fn(&SuiteReport) -> Result<String, String>,
}

fn none(_: &SuiteReport) -> Result<String, String> {
    Ok(String::new())
}

fn note(r: &SuiteReport, k: &str) -> String {
    r.notes.get(k).cloned().unwrap_or_else(|| "?".into())
}

fn fermion_cases(r: &SuiteReport) -> Result<String, String> {
    let cases: u64 = note(r, "cases").parse().unwrap_or(0);
    let msg = format!("{cases} anticommutator cases");
    if cases >= 169 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn gl_counts(r: &SuiteReport) -> Result<String, String> {
    Ok(format!(
        "{} mismatching quadruples; opposite-sign bracket matches {}",
        note(r, "mismatches"),
        note(r, "matches_with_opposite_sign")
    ))
}

fn central_c(r: &SuiteReport) -> Result<String, String> {
    let flag = if note(r, "c_discrepancy") == "true" { "DISCREPANCY" } else { "agrees" };
    Ok(format!(
        "c = {{{}}} vs stated {} ({flag}); with the opposite matrix sign c = {}",
        note(r, "c"),
        note(r, "c_stated"),
        note(r, "c_with_opposite_matrix_sign")
    ))
}

fn boson_counts(r: &SuiteReport) -> Result<String, String> {
    Ok(format!(
        "creation {}, annihilation {} (opposite sign {}), charge {} (opposite sign {})",
        note(r, "creation_agree"),
        note(r, "annihilation_agree"),
        note(r, "annihilation_opposite_sign"),
        note(r, "charge_agree"),
        note(r, "charge_opposite_sign")
    ))
}

fn additive_sign(r: &SuiteReport) -> Result<String, String> {
    let flag = if note(r, "sign_discrepancy") == "true" { "DISCREPANCY" } else { "agrees" };
    Ok(format!("commutator sign {} vs stated +{} ({flag})", note(r, "sign"), note(r, "sign_stated")))
}

fn pole(r: &SuiteReport) -> Result<String, String> {
    Ok(format!(
        "q = {}, pole order {}, fusion is identity: {}",
        note(r, "exchange_factor"),
        note(r, "pole_order"),
        note(r, "fusion_is_identity")
    ))
}

const CRITERIA: [Criterion; 15] = [
    Criterion { n: 1, title: "Leibniz rule for multiplication operators", suite: "leibniz", budget: 1, extra: none },
    Criterion { n: 2, title: "M_xi E_z = xi(z) E_z M_xi", suite: "mxi-ez", budget: 5, extra: none },
    Criterion { n: 3, title: "fusion relations of G", suite: "g-fusion", budget: 10, extra: none },
    Criterion { n: 4, title: "psi psi+ regular after subtracting 1/(s-r)", suite: "regularity", budget: 5, extra: none },
    Criterion { n: 5, title: "low fermion coefficients", suite: "fermion-values", budget: 1, extra: none },
    Criterion { n: 6, title: "fermion anticommutators", suite: "fermion", budget: 60, extra: fermion_cases },
    Criterion { n: 7, title: "gl(inf) commutation of X< and X>", suite: "gl-infinity", budget: 60, extra: gl_counts },
    Criterion { n: 8, title: "central extension of the G algebra", suite: "central", budget: 120, extra: central_c },
    Criterion { n: 9, title: "boson field Y_0l", suite: "boson-field", budget: 10, extra: boson_counts },
    Criterion { n: 10, title: "G< - G> and the smooth flavor", suite: "flavors", budget: 30, extra: none },
    Criterion { n: 11, title: "localization naturality", suite: "naturality", budget: 30, extra: none },
    Criterion { n: 12, title: "iterated Laurent flags", suite: "iterated-laurent", budget: 1, extra: none },
    Criterion { n: 13, title: "boson-fermion skew oracle", suite: "bf-oracle", budget: 30, extra: none },
    Criterion { n: 14, title: "additive realization series", suite: "additive", budget: 5, extra: additive_sign },
    Criterion { n: 15, title: "brackets predicted by the diagonal pole", suite: "laurent-bracket", budget: 10, extra: pole },
];

fn main() -> ExitCode {
    let cfg = Config::default();
    let mut failed = 0;
    for c in &CRITERIA {
        let t = Instant::now();
        let rep = run_suite(c.suite, &cfg);
        let dt = t.elapsed();
        let over = dt > Duration::from_secs(c.budget);
        let (ok, detail) = match &rep {
            Ok(r) => {
                let (extra_ok, msg) = match (c.extra)(r) {
                    Ok(m) => (true, m),
                    Err(m) => (false, m),
                };
                let first = r.records.iter().find(|x| !x.passed());
                let mut d = format!("{}/{} records", r.records.len() - r.failures(), r.records.len());
                if !msg.is_empty() {
                    d.push_str("; ");
                    d.push_str(&msg);
                }
                if let Some(f) = first {
                    let w: String = f.witness.as_deref().unwrap_or("").chars().take(160).collect();
                    d.push_str(&format!("; first failure {}: {w}", f.id));
                }
                (r.passed() && extra_ok && !over, d)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {:<44} {:>7.2}s / {:>3}s{}  {}",
            if ok { "PASS" } else { "FAIL" },
            c.n,
            c.title,
            dt.as_secs_f64(),
            c.budget,
            if over { " OVER" } else { "" },
            detail
        );
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
