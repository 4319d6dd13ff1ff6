//! Canonical JSON formats.
//!
//! Objects are emitted with sorted keys and p-adic numbers as strings in the
//! form accepted by [`Padic::parse`]. A file carries a `"context"` header
//! `{"D", "N", "p"}`; readers check it against the context they run in.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::analytic::{CokernelElement, CokernelParams};
use crate::error::{Error, Result};
use crate::functions::{Leaf, PiecewiseFunction};
use crate::galois::{validate_crystalline, ContinuousCharacter, CrystallineParam, ScriptL, TriangulineParam};
use crate::group::{GroupLevel, IwahoriElement, WeylCellVector};
use crate::padic::{Padic, PadicContext};
use crate::tate::TateSeries;
use crate::valuation::Valuation;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn int_field(v: &Value, key: &str) -> Result<i64> {
    field(v, key)?.as_i64().ok_or_else(|| parse_err(format!("field {key:?} is not an integer")))
}

fn uint_field(v: &Value, key: &str) -> Result<u32> {
    u32::try_from(int_field(v, key)?).map_err(|_| parse_err(format!("field {key:?} out of range")))
}

pub fn context_header(ctx: &PadicContext) -> Value {
    json!({"p": ctx.p(), "N": ctx.precision(), "D": ctx.degree()})
}

/// Wraps `payload` (an object) with the context header.
pub fn document(ctx: &PadicContext, payload: Value) -> Value {
    let mut map = match payload {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    map.insert("context".into(), context_header(ctx));
    Value::Object(map)
}

/// Context described by a file header, if the file has one.
pub fn read_context(doc: &Value) -> Result<Option<Arc<PadicContext>>> {
    match doc.get("context") {
        None => Ok(None),
        Some(h) => {
            let p = u64::try_from(int_field(h, "p")?).map_err(|_| parse_err("bad p"))?;
            let n = uint_field(h, "N")?;
            let d = usize::try_from(int_field(h, "D")?).map_err(|_| parse_err("bad D"))?;
            PadicContext::new(p, n, d).map(Some)
        }
    }
}

/// Fails when the file header names a different `(p, N, D)`.
pub fn check_context(ctx: &PadicContext, doc: &Value) -> Result<()> {
    match read_context(doc)? {
        Some(file) if !file.same_as(ctx) => Err(Error::ContextMismatch),
        _ => Ok(()),
    }
}

/// Pretty-printed canonical text with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_document(text: &str) -> Result<Value> {
    if text.trim().is_empty() {
        return Err(parse_err("empty input"));
    }
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn padic_to_json(x: &Padic) -> Value {
    Value::String(x.to_string())
}

pub fn padic_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<Padic> {
    match v {
        Value::String(s) => Padic::parse(ctx, s),
        Value::Number(n) => n
            .as_i64()
            .map(|n| Padic::from_i64(ctx, n))
            .ok_or_else(|| parse_err(format!("not an integer: {n}"))),
        other => Err(parse_err(format!("not a p-adic number: {other}"))),
    }
}

fn padic_field(ctx: &Arc<PadicContext>, v: &Value, key: &str) -> Result<Padic> {
    padic_from_json(ctx, field(v, key)?)
}

fn valuation_to_json(v: Valuation) -> Value {
    match v {
        Valuation::Finite(n) => json!(n),
        Valuation::Infinity => json!("inf"),
    }
}

fn valuation_from_json(v: &Value) -> Result<Valuation> {
    match v {
        Value::String(s) if s == "inf" => Ok(Valuation::Infinity),
        Value::Number(n) => n.as_i64().map(Valuation::Finite).ok_or_else(|| parse_err("bad valuation")),
        other => Err(parse_err(format!("not a valuation: {other}"))),
    }
}

pub fn series_to_json(f: &TateSeries) -> Value {
    json!({
        "m": f.level(),
        "coeffs": f.coeffs().iter().map(padic_to_json).collect::<Vec<_>>(),
        "tail_bound": valuation_to_json(f.tail_bound()),
    })
}

pub fn series_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<TateSeries> {
    let m = uint_field(v, "m")?;
    let coeffs = field(v, "coeffs")?
        .as_array()
        .ok_or_else(|| parse_err("\"coeffs\" is not an array"))?
        .iter()
        .map(|c| padic_from_json(ctx, c))
        .collect::<Result<Vec<_>>>()?;
    let tail = match v.get("tail_bound") {
        Some(t) => valuation_from_json(t)?,
        None => Valuation::Infinity,
    };
    TateSeries::new(ctx, m, coeffs, tail)
}

pub fn piecewise_to_json(f: &PiecewiseFunction) -> Value {
    let leaves: Vec<Value> = f
        .leaves()
        .iter()
        .map(|l| json!({"center": l.center.to_string(), "level": l.level, "series": series_to_json(&l.series)}))
        .collect();
    json!({ "leaves": leaves })
}

pub fn piecewise_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<PiecewiseFunction> {
    let leaves = field(v, "leaves")?
        .as_array()
        .ok_or_else(|| parse_err("\"leaves\" is not an array"))?
        .iter()
        .map(|l| {
            let center = match field(l, "center")? {
                Value::String(s) => s.parse::<u64>().map_err(|_| parse_err(format!("bad center {s:?}")))?,
                Value::Number(n) => n.as_u64().ok_or_else(|| parse_err("bad center"))?,
                other => return Err(parse_err(format!("bad center {other}"))),
            };
            Ok(Leaf { center, level: uint_field(l, "level")?, series: series_from_json(ctx, field(l, "series")?)? })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseFunction::new(ctx, leaves)
}

pub fn matrix_to_json(g: &IwahoriElement) -> Value {
    let [a, b, c, d] = g.entries();
    let level = match g.level() {
        GroupLevel::ProP => json!("I1"),
        GroupLevel::Congruence(m) => json!(m),
    };
    json!({"a": padic_to_json(a), "b": padic_to_json(b), "c": padic_to_json(c), "d": padic_to_json(d), "level": level})
}

pub fn matrix_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<IwahoriElement> {
    let level = match field(v, "level")? {
        Value::String(s) if s == "I1" => GroupLevel::ProP,
        Value::Number(n) => GroupLevel::Congruence(
            n.as_u64().and_then(|m| u32::try_from(m).ok()).ok_or_else(|| parse_err("bad level"))?,
        ),
        other => return Err(parse_err(format!("bad level {other}"))),
    };
    IwahoriElement::new(
        padic_field(ctx, v, "a")?,
        padic_field(ctx, v, "b")?,
        padic_field(ctx, v, "c")?,
        padic_field(ctx, v, "d")?,
        level,
    )
}

pub fn character_to_json(chi: &ContinuousCharacter) -> Value {
    json!({
        "value_at_p": padic_to_json(chi.value_at_p()),
        "tame_exponent": chi.tame_exponent(),
        "wild_value": padic_to_json(chi.wild_value()),
    })
}

pub fn character_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<ContinuousCharacter> {
    ContinuousCharacter::new(
        padic_field(ctx, v, "value_at_p")?,
        int_field(v, "tame_exponent")?,
        padic_field(ctx, v, "wild_value")?,
    )
}

/// `{"delta1", "delta2", "script_l": "inf" | string}`.
pub fn trianguline_to_json(s: &TriangulineParam) -> Value {
    let l = match &s.script_l {
        ScriptL::Infinity => "inf".to_string(),
        ScriptL::Finite(t) => t.clone(),
    };
    json!({"delta1": character_to_json(&s.delta1), "delta2": character_to_json(&s.delta2), "script_l": l})
}

pub fn trianguline_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<TriangulineParam> {
    let script_l = match v.get("script_l") {
        None => ScriptL::Infinity,
        Some(Value::String(s)) if s == "inf" => ScriptL::Infinity,
        Some(Value::String(s)) => ScriptL::Finite(s.clone()),
        Some(other) => ScriptL::Finite(other.to_string()),
    };
    Ok(TriangulineParam::new(
        character_from_json(ctx, field(v, "delta1")?)?,
        character_from_json(ctx, field(v, "delta2")?)?,
        script_l,
    ))
}

pub fn crystalline_to_json(c: &CrystallineParam) -> Value {
    json!({"alpha": padic_to_json(c.alpha()), "beta": padic_to_json(c.beta()), "k": c.k()})
}

pub fn crystalline_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<CrystallineParam> {
    validate_crystalline(padic_field(ctx, v, "alpha")?, padic_field(ctx, v, "beta")?, uint_field(v, "k")?)
}

pub fn weyl_to_json(f: &WeylCellVector) -> Value {
    json!({"identity": piecewise_to_json(&f.identity), "w0": piecewise_to_json(&f.w0)})
}

pub fn weyl_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<WeylCellVector> {
    WeylCellVector::new(
        piecewise_from_json(ctx, field(v, "identity")?)?,
        piecewise_from_json(ctx, field(v, "w0")?)?,
    )
}

/// `{"k", "n", "m", "param": null | crystalline}`.
pub fn cokernel_params_to_json(p: &CokernelParams) -> Value {
    json!({"k": p.k, "n": p.n, "m": p.m, "param": p.param.as_ref().map(crystalline_to_json)})
}

pub fn cokernel_params_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<CokernelParams> {
    let param = match v.get("param") {
        None | Some(Value::Null) => None,
        Some(p) => Some(crystalline_from_json(ctx, p)?),
    };
    let m = match v.get("m") {
        None | Some(Value::Null) => None,
        Some(_) => Some(uint_field(v, "m")?),
    };
    CokernelParams::new(uint_field(v, "k")?, uint_field(v, "n")?, m, param)
}

pub fn cokernel_to_json(c: &CokernelElement) -> Value {
    json!({
        "params": cokernel_params_to_json(&c.params),
        "alpha": weyl_to_json(c.alpha.cells()),
        "beta": weyl_to_json(c.beta.cells()),
    })
}

pub fn cokernel_from_json(ctx: &Arc<PadicContext>, v: &Value) -> Result<CokernelElement> {
    CokernelElement::new(
        weyl_from_json(ctx, field(v, "alpha")?)?,
        weyl_from_json(ctx, field(v, "beta")?)?,
        cokernel_params_from_json(ctx, field(v, "params")?)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<PadicContext> {
        PadicContext::new(5, 20, 10).unwrap()
    }

    #[test]
    fn series_round_trip() {
        let c = ctx();
        let f = TateSeries::from_integers(&c, 2, &[1, -10, 25]).unwrap().with_tail(Valuation::Finite(17));
        let v = series_to_json(&f);
        assert_eq!(v["tail_bound"], json!(17));
        assert_eq!(v["coeffs"][1], json!("-10"));
        assert_eq!(series_from_json(&c, &v).unwrap(), f);
        let inv = Padic::from_i64(&c, 3).inverse().unwrap();
        let g = TateSeries::constant(&c, 0, inv);
        assert_eq!(series_from_json(&c, &series_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn keys_are_sorted() {
        let c = ctx();
        let s = to_canonical_string(&document(&c, series_to_json(&TateSeries::zero(&c, 1))));
        let keys: Vec<usize> = ["coeffs", "context", "m", "tail_bound"].iter().map(|k| s.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn matrix_and_character_round_trip() {
        let c = ctx();
        let g = IwahoriElement::new(
            Padic::from_i64(&c, 6),
            Padic::from_i64(&c, 5),
            Padic::from_i64(&c, 1),
            Padic::from_i64(&c, 6),
            GroupLevel::ProP,
        )
        .unwrap();
        let v = matrix_to_json(&g);
        assert_eq!(v["level"], json!("I1"));
        assert_eq!(matrix_from_json(&c, &v).unwrap(), g);
        let chi = ContinuousCharacter::x(&c);
        assert_eq!(character_from_json(&c, &character_to_json(&chi)).unwrap(), chi);
    }

    #[test]
    fn context_header_is_checked() {
        let c = ctx();
        let doc = document(&c, json!({}));
        assert!(check_context(&c, &doc).is_ok());
        let other = PadicContext::new(7, 20, 10).unwrap();
        assert!(matches!(check_context(&other, &doc), Err(Error::ContextMismatch)));
        assert!(parse_document("  ").is_err());
    }

    #[test]
    fn cokernel_round_trip() {
        let c = ctx();
        let params = CokernelParams::new(2, 1, None, None).unwrap();
        let w = crate::analytic::witness_nonzero(&c, params).unwrap();
        let v = cokernel_to_json(&w.element);
        assert_eq!(cokernel_from_json(&c, &v).unwrap(), w.element);
    }
}
