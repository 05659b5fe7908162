//! JSON encodings. Every number is an exact `p/q` string.
//!
//! - M̄₀,ₘ divisor: `{"m":5, "psi":{"5":"3"}, "delta":{"1,2,3":"1"}}`. The
//!   `psi` map holds the coefficient `c_{i}` of the singleton key, i.e. the
//!   example is `−3ψ₅ + Δ_{1,2,3}`.
//! - M̄₀,ₙ(ℙ¹,1) divisor: `{"n":5, "L":{"1":"-2"}, "B":{"1,2":"1/4"}}`, or
//!   the shorthand `{"n":5, "K":true, "a":{"2":"1/4","5":"1"}}` for
//!   `K_n + Σ a_s B[s]`. Explicit `L`/`B` entries may be combined with it.
//! - Feasibility certificate: `{"status":"infeasible","multipliers":[{"form":0,"lambda":"1/3"}]}`
//!   or `{"status":"feasible","point":{"2":"1/4"}}`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::combinat::Subset;
use crate::error::{Error, Result};
use crate::kmaps::{BoundaryCombo, KDivisor};
use crate::logfano::{FeasibilityResult, LinearForm, Multiplier, Relation};
use crate::mcurves::MDivisor;
use crate::rational::{fmt_rational, parse_rational, Rational};

fn rat(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

fn get_rat(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!(
            "expected a \"p/q\" string, got {other}"
        ))),
    }
}

fn get_size(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("missing or non-integer field {key:?}")))
}

fn get_map<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<Option<&'a Map<String, Value>>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(other) => Err(Error::Parse(format!(
            "field {key:?} must be an object, got {other}"
        ))),
    }
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))
}

fn parse_label(text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad label {text:?}")))
}

pub fn mdivisor_to_json(h: &MDivisor) -> Value {
    let mut psi = Map::new();
    let mut delta = Map::new();
    for (k, v) in h.terms() {
        if k.len() == 1 {
            psi.insert(k.to_string(), rat(v));
        } else {
            delta.insert(k.to_string(), rat(v));
        }
    }
    json!({"m": h.m(), "psi": psi, "delta": delta})
}

pub fn mdivisor_from_json(v: &Value) -> Result<MDivisor> {
    let obj = as_object(v)?;
    let m = get_size(obj, "m")?;
    let mut h = MDivisor::zero(m)?;
    if let Some(psi) = get_map(obj, "psi")? {
        for (k, c) in psi {
            h.add_term(Subset::singleton(m, parse_label(k)?)?, get_rat(c)?)?;
        }
    }
    if let Some(delta) = get_map(obj, "delta")? {
        for (k, c) in delta {
            h.add_term(Subset::parse(m, k)?, get_rat(c)?)?;
        }
    }
    Ok(h)
}

pub fn kdivisor_to_json(h: &KDivisor) -> Value {
    let l: Map<String, Value> = h.l_terms().map(|(i, v)| (i.to_string(), rat(v))).collect();
    let b: Map<String, Value> = h.b_terms().map(|(s, v)| (s.to_string(), rat(v))).collect();
    json!({"n": h.n(), "L": l, "B": b})
}

pub fn kdivisor_from_json(v: &Value) -> Result<KDivisor> {
    let obj = as_object(v)?;
    let n = get_size(obj, "n")?;
    let with_k = match obj.get("K") {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(other) => {
            return Err(Error::Parse(format!(
                "field \"K\" must be a boolean, got {other}"
            )))
        }
    };
    let mut combo = BoundaryCombo::new(n);
    if let Some(a) = get_map(obj, "a")? {
        for (s, c) in a {
            combo.set(crate::kmaps::parse_index(s)?, get_rat(c)?)?;
        }
    }
    let mut h = KDivisor::from_combo(&combo, with_k)?;
    if let Some(l) = get_map(obj, "L")? {
        for (i, c) in l {
            h.add_l(parse_label(i)?, get_rat(c)?)?;
        }
    }
    if let Some(b) = get_map(obj, "B")? {
        for (s, c) in b {
            h.add_b(Subset::parse(n, s)?, get_rat(c)?)?;
        }
    }
    Ok(h)
}

pub fn form_to_json(f: &LinearForm) -> Value {
    let coeffs: Map<String, Value> = f
        .coeffs
        .iter()
        .map(|(s, c)| (s.to_string(), rat(c)))
        .collect();
    json!({"constant": rat(&f.constant), "coeffs": coeffs, "relation": f.relation.symbol()})
}

pub fn form_from_json(v: &Value) -> Result<LinearForm> {
    let obj = as_object(v)?;
    let constant = get_rat(obj.get("constant").unwrap_or(&Value::Null))?;
    let relation = match obj.get("relation").and_then(Value::as_str) {
        Some("<") => Relation::StrictlyNegative,
        Some("<=") => Relation::NonPositive,
        other => return Err(Error::Parse(format!("bad relation {other:?}"))),
    };
    let mut coeffs = BTreeMap::new();
    if let Some(c) = get_map(obj, "coeffs")? {
        for (s, val) in c {
            coeffs.insert(crate::kmaps::parse_index(s)?, get_rat(val)?);
        }
    }
    Ok(LinearForm::new(constant, coeffs, relation))
}

pub fn point_to_json(point: &BTreeMap<usize, Rational>) -> Value {
    Value::Object(point.iter().map(|(s, v)| (s.to_string(), rat(v))).collect())
}

pub fn feasibility_to_json(r: &FeasibilityResult) -> Value {
    match r {
        FeasibilityResult::Feasible { point } => {
            json!({"status": "feasible", "point": point_to_json(point)})
        }
        FeasibilityResult::Infeasible { multipliers } => {
            let ms: Vec<Value> = multipliers
                .iter()
                .map(|m| json!({"form": m.form, "lambda": rat(&m.lambda)}))
                .collect();
            json!({"status": "infeasible", "multipliers": ms})
        }
    }
}

pub fn feasibility_from_json(v: &Value) -> Result<FeasibilityResult> {
    let obj = as_object(v)?;
    match obj.get("status").and_then(Value::as_str) {
        Some("feasible") => {
            let mut point = BTreeMap::new();
            if let Some(p) = get_map(obj, "point")? {
                for (s, val) in p {
                    point.insert(crate::kmaps::parse_index(s)?, get_rat(val)?);
                }
            }
            Ok(FeasibilityResult::Feasible { point })
        }
        Some("infeasible") => {
            let list = obj
                .get("multipliers")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing multipliers".into()))?;
            let mut multipliers = Vec::new();
            for item in list {
                let o = as_object(item)?;
                multipliers.push(Multiplier {
                    form: get_size(o, "form")?,
                    lambda: get_rat(o.get("lambda").unwrap_or(&Value::Null))?,
                });
            }
            Ok(FeasibilityResult::Infeasible { multipliers })
        }
        other => Err(Error::Parse(format!("bad status {other:?}"))),
    }
}

/// Self-contained certificate: the system plus the result.
pub fn certificate_to_json(system: &[LinearForm], r: &FeasibilityResult) -> Value {
    let mut v = feasibility_to_json(r);
    v["forms"] = Value::Array(system.iter().map(form_to_json).collect());
    v
}
