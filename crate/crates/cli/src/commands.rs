use std::fmt::Write as _;
use std::path::Path;

use fcone_core::json::{
    certificate_to_json, form_to_json, kdivisor_from_json, mdivisor_from_json, mdivisor_to_json,
};
use fcone_core::kmaps::beta_degrees;
use fcone_core::rational::fmt_rational;
use fcone_core::{
    f_positivity_with, f_values, generate_constraints, phi_divisor_map, pullback_alpha,
    search_witness, verify_witness, Bound, BoundaryCombo, FOptions, FeasibilityResult, FormOrigin,
    KDivisor, Sense, Verdict, WitnessReport, WitnessVerdict,
};
use serde_json::{json, Value};

use crate::report::{read_json, Failure, RunReport, EXIT_OK, EXIT_REFUTED, EXIT_UNDECIDED};
use crate::{MapArg, SenseArg};

fn opt_rat(r: &Option<fcone_core::Rational>) -> Value {
    r.as_ref()
        .map_or(Value::Null, |v| Value::String(fmt_rational(v)))
}

fn opt_text(r: &Option<fcone_core::Rational>) -> String {
    r.as_ref().map_or_else(|| "-".to_string(), fmt_rational)
}

pub fn witness_json(w: &WitnessReport) -> Value {
    let (verdict, reasons) = match &w.verdict {
        WitnessVerdict::Verified => ("verified", vec![]),
        WitnessVerdict::Refuted(rs) => ("refuted", rs.iter().map(|r| r.to_string()).collect()),
        WitnessVerdict::Undecided(why) => ("undecided", vec![why.clone()]),
    };
    json!({
        "n": w.n,
        "combo": w.combo.to_string(),
        "verdict": verdict,
        "reasons": reasons,
        "f_min": opt_rat(&w.f_min),
        "f_max": opt_rat(&w.f_max),
        "f_count": w.f_count,
        "beta_degree": opt_rat(&w.beta_degree),
        "klt_note": w.klt_note,
    })
}

pub fn witness_exit(w: &WitnessReport) -> u8 {
    match w.verdict {
        WitnessVerdict::Verified => EXIT_OK,
        WitnessVerdict::Refuted(_) => EXIT_REFUTED,
        WitnessVerdict::Undecided(_) => EXIT_UNDECIDED,
    }
}

pub fn witness_text(w: &WitnessReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "divisor: K_{} + D, D = {}",
        w.n,
        display_combo(&w.combo)
    );
    let _ = writeln!(
        out,
        "F-values on M̄0,{}: {} curves, min {}, max {}",
        w.n + 1,
        w.f_count,
        opt_text(&w.f_min),
        opt_text(&w.f_max)
    );
    let _ = writeln!(out, "beta degree: {}", opt_text(&w.beta_degree));
    match &w.verdict {
        WitnessVerdict::Verified => {
            let _ = writeln!(out, "verdict: VERIFIED (anti-ample, coefficients in [0,1])");
            let _ = writeln!(
                out,
                "note: anti-ampleness is strict, so (1-e)D also works for small e > 0; no discrepancy computation is done"
            );
        }
        WitnessVerdict::Refuted(reasons) => {
            let _ = writeln!(out, "verdict: REFUTED");
            for r in reasons {
                let _ = writeln!(out, "  - {r}");
            }
        }
        WitnessVerdict::Undecided(why) => {
            let _ = writeln!(out, "verdict: UNDECIDED ({why})");
        }
    }
    out
}

fn display_combo(c: &BoundaryCombo) -> String {
    if c.a.is_empty() {
        "0".into()
    } else {
        c.to_string()
    }
}

pub fn cmd_verify(n: usize, combo: &str) -> Result<RunReport, Failure> {
    let combo = BoundaryCombo::parse(n, combo)?;
    let w = verify_witness(n, &combo)?;
    Ok(RunReport {
        command: "verify".into(),
        inputs: json!({"n": n, "combo": combo.to_string()}),
        result: witness_json(&w),
        exit_status: witness_exit(&w),
        text: witness_text(&w),
    })
}

pub fn cmd_search(n: usize, bounds: &str, unit_box: bool) -> Result<RunReport, Failure> {
    let mut all = Bound::parse_list(bounds)?;
    if unit_box {
        all.extend(Bound::unit_box(n));
    }
    let outcome = search_witness(n, &all)?;
    let system = outcome.system();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "constraints for K_{n} + Σ a_s B[s] anti-ample (one per shape):"
    );
    for (k, f) in system.iter().enumerate() {
        let _ = writeln!(text, "  [{k}] {f}");
    }
    let (exit, witness) = match &outcome.result {
        FeasibilityResult::Feasible { point } => {
            let w = outcome
                .witness
                .as_ref()
                .expect("feasible search re-verifies");
            let parts: Vec<String> = point
                .iter()
                .map(|(s, v)| format!("a{s}={}", fmt_rational(v)))
                .collect();
            let _ = writeln!(text, "FEASIBLE at {}", parts.join(","));
            text.push_str(&witness_text(w));
            (witness_exit(w), witness_json(w))
        }
        FeasibilityResult::Infeasible { multipliers } => {
            let _ = writeln!(text, "INFEASIBLE; certificate:");
            for m in multipliers {
                let _ = writeln!(text, "  {} x [{}]", fmt_rational(&m.lambda), m.form);
            }
            let combined = fcone_core::logfano::combine(&system, multipliers)
                .expect("certificate indices are in range");
            let _ = writeln!(text, "  sum: {combined}");
            (EXIT_REFUTED, Value::Null)
        }
    };
    let bounds_text: Vec<String> = all.iter().map(|b| b.to_string()).collect();
    Ok(RunReport {
        command: "search".into(),
        inputs: json!({"n": n, "bounds": bounds_text}),
        result: json!({
            "certificate": certificate_to_json(&system, &outcome.result),
            "witness": witness,
        }),
        exit_status: exit,
        text,
    })
}

pub fn cmd_constraints(n: usize, full: bool) -> Result<RunReport, Failure> {
    let forms = generate_constraints(n, !full)?;
    let mut text = String::new();
    let mut items = Vec::new();
    for g in &forms {
        let origin = match &g.origin {
            FormOrigin::FCurve {
                partition,
                shape,
                orbit_size,
            } => match orbit_size {
                Some(k) => format!("{partition} [{shape}, {k} curves]"),
                None => format!("{partition} [{shape}]"),
            },
            FormOrigin::BetaDegree => "beta degree".to_string(),
        };
        let _ = writeln!(text, "{}\t{origin}", g.form);
        items.push(json!({"form": form_to_json(&g.form), "origin": origin}));
    }
    Ok(RunReport {
        command: "constraints".into(),
        inputs: json!({"n": n, "reduced": !full}),
        result: Value::Array(items),
        exit_status: EXIT_OK,
        text,
    })
}

pub fn cmd_fcurves(
    path: &Path,
    sense: SenseArg,
    strict: bool,
    all_witnesses: bool,
) -> Result<RunReport, Failure> {
    let h = mdivisor_from_json(&read_json(path)?)?;
    let sense = match sense {
        SenseArg::Positive => Sense::StrictlyPositive,
        SenseArg::Negative => Sense::StrictlyNegative,
    };
    let decision = f_positivity_with(
        &h,
        FOptions {
            sense,
            strict,
            all_witnesses,
        },
    )?;
    let values = f_values(&h)?;
    let mut text = String::new();
    let _ = writeln!(text, "divisor on M̄0,{}: {h}", h.m());
    for fv in &values {
        let _ = writeln!(text, "{}\t{}", fv.partition, fmt_rational(&fv.value));
    }
    let relation = match (sense, strict) {
        (Sense::StrictlyPositive, true) => "> 0",
        (Sense::StrictlyPositive, false) => ">= 0",
        (Sense::StrictlyNegative, true) => "< 0",
        (Sense::StrictlyNegative, false) => "<= 0",
    };
    let (verdict, witness, exit) = match &decision.verdict {
        Verdict::Positive => ("positive", Value::Null, EXIT_OK),
        Verdict::NotPositive { witness, value } => (
            "not-positive",
            json!({"partition": witness.to_string(), "value": fmt_rational(value)}),
            EXIT_REFUTED,
        ),
        Verdict::PositiveButUndecidedAmpleness => ("undecided", Value::Null, EXIT_UNDECIDED),
    };
    let _ = writeln!(text, "all F-values {relation}: {verdict}");
    if !witness.is_null() {
        let _ = writeln!(
            text,
            "first witness: {} -> {}",
            witness["partition"].as_str().unwrap_or(""),
            witness["value"].as_str().unwrap_or("")
        );
    }
    if let Verdict::PositiveButUndecidedAmpleness = decision.verdict {
        let _ = writeln!(
            text,
            "m = {} > 7: positivity on F-curves does not decide ampleness here",
            h.m()
        );
    }
    for fv in &decision.violations {
        let _ = writeln!(text, "violation: {fv}");
    }
    let values_json: Vec<Value> = values
        .iter()
        .map(|fv| json!({"partition": fv.partition.to_string(), "value": fmt_rational(&fv.value)}))
        .collect();
    let violations: Vec<String> = decision
        .violations
        .iter()
        .map(|v| v.partition.to_string())
        .collect();
    Ok(RunReport {
        command: "fcurves".into(),
        inputs: json!({"divisor": mdivisor_to_json(&h), "relation": relation}),
        result: json!({
            "verdict": verdict,
            "witness": witness,
            "violations": violations,
            "values": values_json,
        }),
        exit_status: exit,
        text,
    })
}

pub fn cmd_pullback(
    map: MapArg,
    divisor: Option<&Path>,
    n: Option<usize>,
    canonical: bool,
    combo: Option<&str>,
) -> Result<RunReport, Failure> {
    let h = match (divisor, n) {
        (Some(path), _) => kdivisor_from_json(&read_json(path)?)?,
        (None, Some(n)) => {
            let combo = BoundaryCombo::parse(n, combo.unwrap_or(""))?;
            KDivisor::from_combo(&combo, canonical)?
        }
        (None, None) => return Err(Failure::usage("pullback needs --divisor FILE or --n N")),
    };
    let inputs = fcone_core::json::kdivisor_to_json(&h);
    match map {
        MapArg::Alpha => {
            let a = pullback_alpha(&h)?;
            let payload = mdivisor_to_json(&a);
            Ok(RunReport {
                command: "pullback-alpha".into(),
                inputs,
                result: payload.clone(),
                exit_status: EXIT_OK,
                text: format!("{}\n", serde_json::to_string(&payload).expect("json")),
            })
        }
        MapArg::Beta => {
            let degrees = beta_degrees(&h)?;
            let mut text = String::new();
            for b in &degrees {
                let _ = writeln!(text, "{}\t{}", b.i, fmt_rational(&b.degree));
            }
            let payload: serde_json::Map<String, Value> = degrees
                .iter()
                .map(|b| (b.i.to_string(), Value::String(fmt_rational(&b.degree))))
                .collect();
            Ok(RunReport {
                command: "pullback-beta".into(),
                inputs,
                result: Value::Object(payload),
                exit_status: EXIT_OK,
                text,
            })
        }
    }
}

pub fn cmd_strata(n: usize) -> Result<RunReport, Failure> {
    let corr = phi_divisor_map(n)?;
    let pairs: Vec<Value> = corr
        .pairs
        .iter()
        .map(|p| json!({"S": p.s.to_string(), "delta": p.delta_key.to_string(), "B": p.b_key.to_string()}))
        .collect();
    let covers = corr.covers_all_b_keys();
    Ok(RunReport {
        command: "strata".into(),
        inputs: json!({"n": n}),
        result: json!({"pairs": pairs, "covers_all_b_keys": covers}),
        exit_status: if covers { EXIT_OK } else { EXIT_REFUTED },
        text: corr.to_tsv(),
    })
}
