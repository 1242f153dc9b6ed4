//! JSON renderings (schema `weilrank/1`). Every number is a decimal string.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::classify::{ClassificationReport, ComponentReport, FourfoldReport, OracleCheck};
use crate::exact::IntPoly;
use crate::newton::{classify_newton, newton_polygon, NewtonPolygon};
use crate::relfinder::{OracleRank, RelationCertificate};
use crate::search::CubicReport;
use crate::subfields::{ConjugateFactorization, QuadraticElement};
use crate::weil::{eigenvalue_structure, Component, WeilError, WeilPolynomial};

pub const SCHEMA: &str = "weilrank/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("expected an integer, found {0:?}")]
    NotInteger(String),
    #[error("missing field {0:?}")]
    Missing(&'static str),
    #[error("malformed JSON: {0}")]
    Json(String),
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn strs<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(s).collect())
}

/// Adds the schema tag in front of an object.
pub fn tagged(v: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), s(SCHEMA));
    if let Value::Object(m) = v {
        out.extend(m);
    }
    Value::Object(out)
}

pub fn parse_int(t: &str) -> Result<BigInt, InputError> {
    let t = t.trim();
    let ok = !t.is_empty()
        && t.strip_prefix(['-', '+'])
            .unwrap_or(t)
            .bytes()
            .all(|b| b.is_ascii_digit());
    if !ok {
        return Err(InputError::NotInteger(t.to_string()));
    }
    t.parse().map_err(|_| InputError::NotInteger(t.to_string()))
}

/// Comma-separated coefficients, constant term first.
pub fn parse_coeffs(list: &str) -> Result<IntPoly, InputError> {
    let c = list
        .split(',')
        .map(parse_int)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntPoly::new(c))
}

fn int_value(v: &Value) -> Result<BigInt, InputError> {
    match v {
        Value::String(t) => parse_int(t),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_int(&n.to_string()),
        other => Err(InputError::NotInteger(other.to_string())),
    }
}

/// `{"coeffs": [...], "q": ...}`; integers as strings or JSON integers.
pub fn parse_poly_input(line: &str) -> Result<(IntPoly, BigInt, Value), InputError> {
    let v: Value = serde_json::from_str(line).map_err(|e| InputError::Json(e.to_string()))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or(InputError::Missing("coeffs"))?;
    let c = coeffs
        .iter()
        .map(int_value)
        .collect::<Result<Vec<_>, _>>()?;
    let q = int_value(v.get("q").ok_or(InputError::Missing("q"))?)?;
    Ok((IntPoly::new(c), q, v))
}

pub fn poly_input(p: &IntPoly, q: &BigInt) -> Value {
    json!({ "coeffs": strs(p.coeffs()), "q": s(q) })
}

/// Name of the failed check, e.g. `RiemannHypothesisFails`.
pub fn error_name(msg: &str) -> &str {
    msg.split(':').next().unwrap_or(msg)
}

pub fn error_record(e: &WeilError) -> Value {
    let msg = e.to_string();
    tagged(json!({ "valid": false, "error": error_name(&msg), "message": msg }))
}

pub fn newton_json(np: &NewtonPolygon, g: usize) -> Value {
    let class = classify_newton(np, g);
    json!({
        "segments": np.segments.iter().map(|(c, l)| json!({ "slope": s(c), "length": s(l) })).collect::<Vec<_>>(),
        "type": class.primary.as_str(),
        "labels": class.labels.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
        "integral": np.is_integral(),
    })
}

fn component_json(c: &Component) -> Value {
    json!({
        "pmin": strs(c.pmin.coeffs()),
        "e": s(c.e),
        "r_count": s(c.r_count),
        "d": s(c.d),
        "sqrt_root": serde_json::to_value(c.sqrt_root).expect("enum"),
    })
}

pub fn analysis(w: &WeilPolynomial, sufficiency: Result<u32, String>) -> Value {
    let es = eigenvalue_structure(w);
    let mut v = json!({
        "valid": true,
        "coeffs": strs(w.poly().coeffs()),
        "q": s(w.q()),
        "p": s(w.p()),
        "g": s(w.g()),
        "epsilon": s(w.epsilon()),
        "structure": {
            "pmin": strs(es.pmin.coeffs()),
            "e": es.e.map(s),
            "d": s(es.d),
            "r_count": s(es.r_count),
            "sqrt_root": serde_json::to_value(es.sqrt_root).expect("enum"),
            "components": es.components.iter().map(component_json).collect::<Vec<_>>(),
        },
        "newton": newton_json(&newton_polygon(w), w.g()),
    });
    match sufficiency {
        Ok(n) => {
            v["sufficiently_large"] = Value::Bool(n == 1);
            v["sufficiency_degree"] = s(n);
        }
        Err(e) => v["sufficiency_error"] = s(e),
    }
    tagged(v)
}

pub fn quadratic(x: &QuadraticElement) -> Value {
    json!({ "a0": s(&x.a0), "a1": s(&x.a1), "m": s(&x.m) })
}

pub fn witness(cf: &ConjugateFactorization) -> Value {
    json!({
        "m": s(&cf.m),
        "G": cf.g.iter().map(quadratic).collect::<Vec<_>>(),
    })
}

fn report_component(c: &ComponentReport) -> Value {
    json!({
        "pmin": strs(c.pmin.coeffs()),
        "e": s(c.e),
        "d": s(c.d),
        "newton": c.newton.as_str(),
        "supersingular": c.supersingular,
        "cm_field": c.cm_field.as_ref().map(s),
        "rank": s(c.rank),
    })
}

fn oracle_check(o: &OracleCheck) -> Value {
    json!({
        "rank": s(o.rank),
        "lower_bound": s(o.lower_bound),
        "confidence": serde_json::to_value(o.confidence).expect("enum"),
        "relations": o.relations.iter().map(strs).collect::<Vec<_>>(),
        "saturated": o.saturated,
        "agrees": o.agrees,
    })
}

/// `input` is the polynomial as given; the report may refer to a base change.
pub fn classification(input: (&IntPoly, &BigInt), r: &ClassificationReport) -> Value {
    tagged(json!({
        "input": poly_input(input.0, input.1),
        "classified_over": poly_input(&r.poly, &r.q),
        "g": s(r.g),
        "extension_degree": s(r.extension_degree),
        "sufficiency_degree": s(r.sufficiency_degree),
        "sufficiently_large": r.sufficiently_large,
        "components": r.components.iter().map(report_component).collect::<Vec<_>>(),
        "simple": r.simple,
        "irreducible": r.irreducible,
        "neat": r.neat,
        "rank": s(r.rank),
        "gamma_rank": s(r.gamma_rank),
        "newton": r.newton.as_str(),
        "newton_polygon": newton_json(&r.newton_polygon, r.g),
        "conditions": [r.condition_i, r.condition_ii, r.condition_iii],
        "witness": r.witness.as_ref().map(witness),
        "rank_source": serde_json::to_value(r.rank_source).expect("enum"),
        "oracle": r.oracle.as_ref().map(oracle_check),
        "notes": r.notes,
    }))
}

pub fn fourfold(input: (&IntPoly, &BigInt), f: &FourfoldReport) -> Value {
    tagged(json!({
        "input": poly_input(input.0, input.1),
        "decomposition": f.decomposition.iter().map(|(d, e)| json!({ "degree": s(d), "e": s(e) })).collect::<Vec<_>>(),
        "newton": f.newton.as_str(),
        "oracle_rank": s(f.oracle_rank),
        "confidence": serde_json::to_value(f.confidence).expect("enum"),
        "condition_i": f.condition_i,
        "condition_ii": f.condition_ii,
        "flagged": f.flagged,
    }))
}

fn certificate(c: &RelationCertificate) -> Value {
    json!({
        "exponents": strs(&c.exponents),
        "m": s(c.m),
        "target_exponent": s(c.target_exponent),
        "degree_bound": s(c.degree_bound),
        "separation_bits": s(c.separation_bits),
        "precision": s(c.precision),
    })
}

pub fn oracle(w: &WeilPolynomial, o: &OracleRank) -> Value {
    tagged(json!({
        "input": poly_input(w.poly(), w.q()),
        "rank": s(o.rank),
        "lower_bound": s(o.lower_bound),
        "confidence": serde_json::to_value(o.confidence).expect("enum"),
        "d": s(o.lattice.d()),
        "exponent_bound": s(o.lattice.exponent_bound),
        "relations": o.lattice.basis.iter().map(strs).collect::<Vec<_>>(),
        "certificates": o.lattice.certificates.iter().map(certificate).collect::<Vec<_>>(),
        "saturated": o.lattice.saturated,
    }))
}

pub fn cubic(r: &CubicReport) -> Value {
    tagged(json!({
        "p": s(r.p),
        "l": s(r.l),
        "poly": strs(r.poly.coeffs()),
        "denominator": s(&r.denominator),
        "checks": {
            "eisenstein": r.eisenstein,
            "three_real_roots": r.real_roots == 3,
            "modp_linear_times_irreducible_quadratic": r.modp_shape == [1, 2] && r.quadratic_irreducible_mod_p,
        },
        "real_roots": s(r.real_roots),
        "modp_shape": strs(&r.modp_shape),
        "all_pass": r.all_pass(),
    }))
}
