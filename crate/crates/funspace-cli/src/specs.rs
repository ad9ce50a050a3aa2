//! JSON parsing for space specs and grids.
//!
//! Exponents may be given as numbers or as the strings "inf" / "infinity";
//! JSON itself has no infinity literal. Reports write infinite exponents
//! back as "inf".

use funspace_core::{
    BesovSpec, BoxDomain, Error, LorentzSpec, Result, WeightSpec,
};
use serde_json::Value;

/// Number-or-"inf" field.
pub fn parse_exp(v: &Value, name: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::InvalidSpec(format!("field {name} is not a finite number"))),
        Value::String(s) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => {
            Ok(f64::INFINITY)
        }
        other => Err(Error::InvalidSpec(format!(
            "field {name} must be a number or \"inf\", got {other}"
        ))),
    }
}

/// Exponent rendered back into JSON (numbers stay numbers, inf -> "inf").
pub fn exp_value(x: f64) -> Value {
    if x.is_infinite() {
        Value::String("inf".into())
    } else {
        serde_json::json!(x)
    }
}

fn field<'v>(obj: &'v Value, name: &str) -> Result<&'v Value> {
    obj.get(name)
        .ok_or_else(|| Error::InvalidSpec(format!("missing field {name}")))
}

/// `{"p": .., "q": .., "weight": {..}, "omega_measure": ..}`
/// with optional `"tol_quadrature"`.
pub fn lorentz_from_json(text: &str) -> Result<LorentzSpec> {
    let v: Value = serde_json::from_str(text)?;
    let p = parse_exp(field(&v, "p")?, "p")?;
    let q = parse_exp(field(&v, "q")?, "q")?;
    let omega = field(&v, "omega_measure")?
        .as_f64()
        .ok_or_else(|| Error::InvalidSpec("omega_measure must be a number".into()))?;
    let weight: WeightSpec = serde_json::from_value(field(&v, "weight")?.clone())?;
    let spec = LorentzSpec::from_weight_spec(p, q, &weight, omega)?;
    match v.get("tol_quadrature").and_then(Value::as_f64) {
        Some(tol) => spec.with_quadrature_tol(tol),
        None => Ok(spec),
    }
}

/// JSON echo of a Lorentz spec for reports.
pub fn lorentz_to_value(spec: &LorentzSpec) -> Value {
    serde_json::json!({
        "p": exp_value(spec.p()),
        "q": exp_value(spec.q()),
        "weight": spec.weight(),
        "omega_measure": spec.omega_measure(),
    })
}

/// `{"s": .., "p": .., "q": .., "n": ..}`
pub fn besov_from_json(text: &str) -> Result<BesovSpec> {
    let v: Value = serde_json::from_str(text)?;
    let s = field(&v, "s")?
        .as_f64()
        .ok_or_else(|| Error::InvalidSpec("s must be a number".into()))?;
    let p = parse_exp(field(&v, "p")?, "p")?;
    let q = parse_exp(field(&v, "q")?, "q")?;
    let n = field(&v, "n")?
        .as_u64()
        .ok_or_else(|| Error::InvalidSpec("n must be a positive integer".into()))?;
    BesovSpec::new(s, p, q, n as usize)
}

pub fn besov_to_value(spec: &BesovSpec) -> Value {
    serde_json::json!({
        "s": spec.s,
        "p": exp_value(spec.p),
        "q": exp_value(spec.q),
        "n": spec.n,
    })
}

/// `{"box": {"lower": [...], "upper": [...]}, "cells": [...]}`
pub fn grid_from_json(text: &str) -> Result<(BoxDomain, Vec<usize>)> {
    let v: Value = serde_json::from_str(text)?;
    let b = field(&v, "box")?;
    let lower: Vec<f64> = serde_json::from_value(field(b, "lower")?.clone())?;
    let upper: Vec<f64> = serde_json::from_value(field(b, "upper")?.clone())?;
    let cells: Vec<usize> = serde_json::from_value(field(&v, "cells")?.clone())?;
    Ok((BoxDomain::new(lower, upper)?, cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentz_json_with_inf_and_weight() {
        let spec = lorentz_from_json(
            r#"{"p": 2.0, "q": "inf", "weight": {"c": 1.0, "a": 0.0, "b": 0.0}, "omega_measure": 2.0}"#,
        )
        .unwrap();
        assert_eq!(spec.p(), 2.0);
        assert!(spec.q().is_infinite());
        let echo = lorentz_to_value(&spec);
        assert_eq!(echo["q"], serde_json::json!("inf"));
    }

    #[test]
    fn lorentz_json_rejects_divergent() {
        let r = lorentz_from_json(
            r#"{"p": 1.0, "q": 1.0, "weight": {"c": 1.0, "a": -1.0, "b": 0.0}, "omega_measure": 1.0}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn besov_json_round_trip() {
        let spec = besov_from_json(r#"{"s": 0.5, "p": 1, "q": "inf", "n": 1}"#).unwrap();
        assert_eq!(spec.s, 0.5);
        assert!(spec.q.is_infinite());
    }

    #[test]
    fn grid_json_parses() {
        let (bd, cells) =
            grid_from_json(r#"{"box": {"lower": [0.0], "upper": [1.0]}, "cells": [256]}"#).unwrap();
        assert_eq!(bd.dim(), 1);
        assert_eq!(cells, vec![256]);
    }
}
