//! One function per subcommand. Each returns a report, an optional JSON
//! payload and the exit code it warrants.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use rigan_core::analytic::{
    cokernel_equal, inject_fault, is_analytic_vector, verify_bounds_with, witness_nonzero_with,
    CokernelParams, OrbitFamily,
};
use rigan_core::functions::PiecewiseFunction;
use rigan_core::galois::validate_crystalline;
use rigan_core::group::{act, InductionCharacter, Side};
use rigan_core::json::{self as js};
use rigan_core::{Padic, PadicContext, TateSeries, Valuation, Verdict};

use crate::config::RunConfig;
use crate::error::{exit, CliError, CliResult};
use crate::report::Report;

pub struct Outcome {
    pub report: Report,
    pub payload: Option<String>,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, payload: None, code: exit::OK }
    }
}

pub fn read_document(ctx: &PadicContext, path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    let doc = js::parse_document(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    js::check_context(ctx, &doc)?;
    Ok(doc)
}

fn verdict_value(v: Verdict) -> Value {
    match v {
        Verdict::Holds => json!(true),
        Verdict::Fails => json!(false),
        Verdict::Indeterminate => json!("indeterminate"),
    }
}

fn valuation_value(v: Valuation) -> Value {
    match v {
        Valuation::Finite(n) => json!(n),
        Valuation::Infinity => json!("inf"),
    }
}

pub fn classify(cfg: &RunConfig, file: &Path) -> CliResult<Outcome> {
    let ctx = cfg.context()?;
    let doc = read_document(&ctx, file)?;
    let s = js::trianguline_from_json(&ctx, &doc)?;
    let star = s.s_star()?;
    let w = match s.integral_weight()? {
        (Verdict::Holds, Some(n)) => json!(n),
        _ => json!(star.w.to_string()),
    };
    let ext1 = s.ext1_dimension(rigan_core::galois::DEFAULT_EXT1_BOUND)?;
    let report = Report::new()
        .field("S_star", star.holds)
        .field("S_cris", verdict_value(s.in_s_cris()?))
        .field("u", star.u)
        .field("w", w)
        .field("ext1_dimension", ext1.dimension.map_or(json!("indeterminate"), |d| json!(d)))
        .field("special_form", ext1.form.map_or(Value::Null, |f| json!(f.to_string())));
    Ok(Outcome::ok(report))
}

/// A function file holds either a single series or a piecewise function.
pub enum FunctionFile {
    Series(TateSeries),
    Piecewise(PiecewiseFunction),
}

impl FunctionFile {
    pub fn read(ctx: &Arc<PadicContext>, doc: &Value) -> CliResult<Self> {
        if doc.get("leaves").is_some() {
            Ok(FunctionFile::Piecewise(js::piecewise_from_json(ctx, doc)?))
        } else if doc.get("coeffs").is_some() {
            Ok(FunctionFile::Series(js::series_from_json(ctx, doc)?))
        } else {
            Err(CliError::Usage("function file has neither \"leaves\" nor \"coeffs\"".into()))
        }
    }

    fn to_json(&self) -> Value {
        match self {
            FunctionFile::Series(f) => js::series_to_json(f),
            FunctionFile::Piecewise(f) => js::piecewise_to_json(f),
        }
    }

    fn val_c(&self) -> Valuation {
        match self {
            FunctionFile::Series(f) => f.val_c(),
            FunctionFile::Piecewise(f) => Valuation::min_of(f.leaves().iter().map(|l| l.series.val_c())),
        }
    }
}

/// `{"k"}` alone, or with `"alpha"`, `"beta"` and optionally `"side"`.
pub fn read_character(ctx: &Arc<PadicContext>, doc: &Value) -> CliResult<InductionCharacter> {
    let k = doc
        .get("k")
        .and_then(Value::as_u64)
        .and_then(|k| u32::try_from(k).ok())
        .ok_or_else(|| CliError::Usage("character file needs an integer \"k\"".into()))?;
    let side = match doc.get("side").and_then(Value::as_str) {
        None | Some("alpha") => Side::Alpha,
        Some("beta") => Side::Beta,
        Some(other) => return Err(CliError::Usage(format!("unknown side {other:?}"))),
    };
    match (doc.get("alpha"), doc.get("beta")) {
        (Some(a), Some(b)) => {
            let param = validate_crystalline(js::padic_from_json(ctx, a)?, js::padic_from_json(ctx, b)?, k)?;
            Ok(InductionCharacter::new(param, side))
        }
        (None, None) => Ok(InductionCharacter::weight_only(k, side)?),
        _ => Err(CliError::Usage("give both \"alpha\" and \"beta\" or neither".into())),
    }
}

pub fn act_cmd(cfg: &RunConfig, matrix: &Path, function: &Path, character: Option<&Path>) -> CliResult<Outcome> {
    let ctx = cfg.context()?;
    let g = js::matrix_from_json(&ctx, &read_document(&ctx, matrix)?)?;
    let f = FunctionFile::read(&ctx, &read_document(&ctx, function)?)?;
    let chi = match character {
        Some(path) => read_character(&ctx, &read_document(&ctx, path)?)?,
        None => InductionCharacter::weight_only(2, Side::Alpha)?,
    };
    let out = match &f {
        FunctionFile::Series(s) => FunctionFile::Series(act(&g, s, &chi)?),
        FunctionFile::Piecewise(p) => FunctionFile::Piecewise(act(&g, p, &chi)?),
    };
    let report = Report::new()
        .field("val_c_before", valuation_value(f.val_c()))
        .field("val_c_after", valuation_value(out.val_c()));
    let payload = js::to_canonical_string(&js::document(&ctx, out.to_json()));
    Ok(Outcome { report, payload: Some(payload), code: exit::OK })
}

pub fn analytic_level(cfg: &RunConfig, function: &Path, max_level: u32) -> CliResult<Outcome> {
    let ctx = cfg.context()?;
    let f = match FunctionFile::read(&ctx, &read_document(&ctx, function)?)? {
        FunctionFile::Piecewise(p) => p,
        FunctionFile::Series(s) => PiecewiseFunction::global(s)?,
    };
    let mut report = Report::new().columns(&["m", "reexpansion", "orbit"]);
    let mut minimal = Value::Null;
    let mut disagreements = 0;
    for m in 0..=max_level {
        let v = is_analytic_vector(&f, m)?;
        if !v.agree() {
            disagreements += 1;
        }
        if minimal.is_null() && v.reexpansion.holds() && v.orbit.holds() {
            minimal = json!(m);
        }
        report.push_row(vec![json!(m), verdict_value(v.reexpansion), verdict_value(v.orbit)]);
    }
    report.set("minimal_level", minimal);
    report.set("criteria_agree", disagreements == 0);
    let code = if disagreements == 0 { exit::OK } else { exit::VERIFICATION };
    Ok(Outcome { report, payload: None, code })
}

/// `family:index`, as accepted by `--inject-fault`.
pub fn parse_fault(s: &str) -> Result<(OrbitFamily, usize), String> {
    let (family, index) = s.split_once(':').ok_or("expected FAMILY:INDEX")?;
    let family = OrbitFamily::parse(family).ok_or_else(|| format!("unknown family {family:?}"))?;
    let index = index.parse().map_err(|_| format!("bad index {index:?}"))?;
    Ok((family, index))
}

pub fn verify_bounds_cmd(
    cfg: &RunConfig,
    function: &Path,
    level: Option<u32>,
    fault: Option<(OrbitFamily, usize)>,
) -> CliResult<Outcome> {
    let ctx = cfg.context()?;
    let mut f = js::series_from_json(&ctx, &read_document(&ctx, function)?)?;
    if let Some(m) = level {
        if m < f.level() {
            return Err(rigan_core::Error::Domain(format!(
                "series lives on p^{} Z_p and cannot be read at level {m}",
                f.level()
            ))
            .into());
        }
        f = f.restrict(m)?;
    }
    let source = f.clone();
    let result = verify_bounds_with(&f, |e| {
        if let Some((family, index)) = fault {
            if e.family == family {
                inject_fault(&source, e, index);
            }
        }
    })?;
    let mut report = Report::new()
        .field("level", f.level())
        .field("val_c", valuation_value(result.val_c))
        .field("min_margin", result.min_margin().map_or(json!("inf"), |m| json!(m)))
        .columns(&["family", "index", "val_c", "bound", "margin"]);
    for fam in &result.families {
        for row in &fam.rows {
            report.push_row(vec![
                json!(fam.family.name()),
                json!(row.index),
                valuation_value(row.val_c),
                valuation_value(row.bound),
                row.margin.map_or(json!("inf"), |m| json!(m)),
            ]);
        }
    }
    Ok(Outcome::ok(report))
}

pub fn cokernel_eq(cfg: &RunConfig, first: &Path, second: &Path) -> CliResult<Outcome> {
    let ctx = cfg.context()?;
    let c1 = js::cokernel_from_json(&ctx, &read_document(&ctx, first)?)?;
    let c2 = js::cokernel_from_json(&ctx, &read_document(&ctx, second)?)?;
    let v = cokernel_equal(&c1, &c2)?;
    Ok(Outcome::ok(Report::new().field("equal", verdict_value(v))))
}

pub struct WitnessArgs {
    pub k: u32,
    pub n: u32,
    pub m: Option<u32>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    /// Use `z` instead of the constant 1 (needs `k >= 3`).
    pub linear: bool,
}

pub fn witness(cfg: &RunConfig, args: &WitnessArgs) -> CliResult<Outcome> {
    let ctx = cfg.context()?;
    let param = match (&args.alpha, &args.beta) {
        (Some(a), Some(b)) => Some(validate_crystalline(Padic::parse(&ctx, a)?, Padic::parse(&ctx, b)?, args.k)?),
        (None, None) => None,
        _ => return Err(CliError::Usage("give both --alpha and --beta or neither".into())),
    };
    let params = CokernelParams::new(args.k, args.n, args.m, param)?;
    let poly = if args.linear {
        TateSeries::from_integers(&ctx, 0, &[0, 1])?
    } else {
        TateSeries::constant(&ctx, 0, Padic::one(&ctx))
    };
    let w = witness_nonzero_with(&ctx, params.clone(), poly)?;
    let nonzero = w.equal_to_zero.fails();
    let report = Report::new()
        .field("k", params.k)
        .field("n", params.n)
        .field("m", params.m)
        .field("equal_to_zero", verdict_value(w.equal_to_zero))
        .field("nonzero", nonzero);
    let payload = js::to_canonical_string(&js::document(&ctx, js::cokernel_to_json(&w.element)));
    let code = if nonzero { exit::OK } else { exit::VERIFICATION };
    Ok(Outcome { report, payload: Some(payload), code })
}
