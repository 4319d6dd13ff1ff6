//! Characters of `Q_p^x`, trianguline parameters and crystalline data.
//!
//! A continuous character `delta` is recorded by its value at `p`, the
//! exponent by which it acts on the roots of unity `mu_(p-1)` and its value at
//! the topological generator `1 + p` of `1 + pZ_p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{Padic, PadicContext};
use crate::valuation::Valuation;
use crate::verdict::Verdict;

/// Fewest known digits of `w(s)` with which integrality is decided.
pub const MIN_INTEGRALITY_DIGITS: i64 = 4;

/// Default search bound for the exponent `i` in the `Ext^1` rule.
pub const DEFAULT_EXT1_BOUND: u32 = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousCharacter {
    value_at_p: Padic,
    tame_exponent: u64,
    wild_value: Padic,
}

impl ContinuousCharacter {
    pub fn new(value_at_p: Padic, tame_exponent: i64, wild_value: Padic) -> Result<Self> {
        let ctx = value_at_p.context().clone();
        if !wild_value.context().same_field(&ctx) {
            return Err(Error::ContextMismatch);
        }
        if value_at_p.is_zero() {
            return Err(Error::Parameter("delta(p) must be nonzero".into()));
        }
        if (&wild_value - &Padic::one(&ctx)).valuation() < 1 {
            return Err(Error::Parameter(format!(
                "delta(1+p) = {wild_value} is not congruent to 1 mod p"
            )));
        }
        let order = ctx.p() as i64 - 1;
        Ok(ContinuousCharacter {
            value_at_p,
            tame_exponent: tame_exponent.rem_euclid(order) as u64,
            wild_value,
        })
    }

    pub fn trivial(ctx: &Arc<PadicContext>) -> Self {
        let one = Padic::one(ctx);
        ContinuousCharacter { value_at_p: one.clone(), tame_exponent: 0, wild_value: one }
    }

    /// The character `x` induced by `Q_p -> L`.
    pub fn x(ctx: &Arc<PadicContext>) -> Self {
        ContinuousCharacter {
            value_at_p: Padic::from_u64(ctx, ctx.p()),
            tame_exponent: 1 % (ctx.p() - 1),
            wild_value: Padic::from_u64(ctx, ctx.p() + 1),
        }
    }

    /// `|x|`, sending `x` to `p^(-val_p(x))`.
    pub fn abs_x(ctx: &Arc<PadicContext>) -> Self {
        let one = Padic::one(ctx);
        ContinuousCharacter {
            value_at_p: Padic::p_power(ctx, -1),
            tame_exponent: 0,
            wild_value: one,
        }
    }

    /// The unramified character with `delta(p) = value`.
    pub fn unramified(value: Padic) -> Result<Self> {
        let one = Padic::one(value.context());
        ContinuousCharacter::new(value, 0, one)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.value_at_p.context()
    }

    pub fn value_at_p(&self) -> &Padic {
        &self.value_at_p
    }

    pub fn tame_exponent(&self) -> u64 {
        self.tame_exponent
    }

    pub fn wild_value(&self) -> &Padic {
        &self.wild_value
    }

    fn tame_order(&self) -> u64 {
        self.context().p() - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        ContinuousCharacter {
            value_at_p: &self.value_at_p * &other.value_at_p,
            tame_exponent: (self.tame_exponent + other.tame_exponent) % self.tame_order(),
            wild_value: &self.wild_value * &other.wild_value,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let order = self.tame_order();
        Ok(ContinuousCharacter {
            value_at_p: self.value_at_p.inverse()?,
            tame_exponent: (order - self.tame_exponent) % order,
            wild_value: self.wild_value.inverse()?,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let order = self.tame_order() as i64;
        Ok(ContinuousCharacter {
            value_at_p: self.value_at_p.pow(e)?,
            tame_exponent: (self.tame_exponent as i64 * e).rem_euclid(order) as u64,
            wild_value: self.wild_value.pow(e)?,
        })
    }

    /// `w(delta) = log delta(1+p) / log(1+p)`.
    pub fn weight(&self) -> Result<Padic> {
        let ctx = self.context();
        let u = Padic::from_u64(ctx, ctx.p() + 1);
        self.wild_value.log()?.checked_div(&u.log()?)
    }

    /// Equality of the defining triples at working precision.
    pub fn agreement(&self, other: &Self) -> Verdict {
        if self.tame_exponent != other.tame_exponent {
            return Verdict::Fails;
        }
        let value = match (self.value_at_p.valuation(), other.value_at_p.valuation()) {
            (Valuation::Finite(a), Valuation::Finite(b)) if a == b => {
                let target = a + self.context().working_precision();
                self.value_at_p.agreement(&other.value_at_p, target)
            }
            _ => Verdict::Fails,
        };
        let wild = self
            .wild_value
            .agreement(&other.wild_value, self.context().working_precision());
        value.and(wild)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptL {
    Infinity,
    /// A finite coordinate, carried as opaque text.
    Finite(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangulineParam {
    pub delta1: ContinuousCharacter,
    pub delta2: ContinuousCharacter,
    pub script_l: ScriptL,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SStar {
    pub holds: bool,
    /// `u(s) = val_p(delta1(p))`.
    pub u: i64,
    /// `w(s) = w(delta1) - w(delta2)`.
    pub w: Padic,
}

/// The form matched by `delta1 / delta2` in the `Ext^1` rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialForm {
    /// `x^(-i)`, `i >= 0`.
    XInversePower(u32),
    /// `|x| x^i`, `i >= 1`.
    AbsXTimesXPower(u32),
}

impl fmt::Display for SpecialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialForm::XInversePower(i) => write!(f, "x^-{i}"),
            SpecialForm::AbsXTimesXPower(i) => write!(f, "|x|x^{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ext1 {
    /// `Some(1)` or `Some(2)`, `None` when undecided at this precision.
    pub dimension: Option<u8>,
    pub form: Option<SpecialForm>,
}

impl TriangulineParam {
    pub fn new(delta1: ContinuousCharacter, delta2: ContinuousCharacter, script_l: ScriptL) -> Self {
        TriangulineParam { delta1, delta2, script_l }
    }

    pub fn s_star(&self) -> Result<SStar> {
        let v1 = finite(self.delta1.value_at_p.valuation());
        let v2 = finite(self.delta2.value_at_p.valuation());
        let w = &self.delta1.weight()? - &self.delta2.weight()?;
        Ok(SStar { holds: v1 + v2 == 0 && v1 > 0, u: v1, w })
    }

    /// `w(s)` as an integer, or `None` when it is not one; `Indeterminate` if undecided.
    pub fn integral_weight(&self) -> Result<(Verdict, Option<i64>)> {
        let w = self.s_star()?.w;
        let digits = w.abs_precision().unwrap_or(i64::MAX);
        if digits < MIN_INTEGRALITY_DIGITS {
            return Ok((Verdict::Indeterminate, None));
        }
        match w.small_integer(MIN_INTEGRALITY_DIGITS) {
            Some(n) => Ok((Verdict::Holds, Some(n))),
            None => Ok((Verdict::Fails, None)),
        }
    }

    /// `s` lies in `S*` with `w(s)` an integer `>= 1`, `u(s) < w(s)` and `L = infinity`.
    pub fn in_s_cris(&self) -> Result<Verdict> {
        let star = self.s_star()?;
        if !star.holds || self.script_l != ScriptL::Infinity {
            return Ok(Verdict::Fails);
        }
        Ok(match self.integral_weight()? {
            (Verdict::Holds, Some(w)) => Verdict::from_bool(w >= 1 && star.u < w),
            (verdict, _) => verdict,
        })
    }

    pub fn ext1_dimension(&self, bound: u32) -> Result<Ext1> {
        ext1_dimension(&self.delta1, &self.delta2, bound)
    }
}

fn finite(v: Valuation) -> i64 {
    v.finite().expect("character values are nonzero")
}

/// Dimension of `Ext^1(delta2, delta1)`: 2 when `delta1 / delta2` is `x^(-i)`
/// with `i >= 0` or `|x| x^i` with `i >= 1`, and 1 otherwise.
///
/// The valuation of the quotient at `p` pins down the only possible `i` for
/// each form; a candidate beyond `bound` that otherwise matches is reported
/// as undecided.
pub fn ext1_dimension(
    delta1: &ContinuousCharacter,
    delta2: &ContinuousCharacter,
    bound: u32,
) -> Result<Ext1> {
    let ctx = delta1.context().clone();
    let q = delta1.mul(&delta2.inverse()?);
    let v = finite(q.value_at_p.valuation());
    let x = ContinuousCharacter::x(&ctx);
    let mut candidates = Vec::new();
    if v <= 0 {
        let i = v.unsigned_abs() as u32;
        candidates.push((SpecialForm::XInversePower(i), x.pow(-i64::from(i))?));
    }
    if v >= 0 {
        let i = (v + 1) as u32;
        let target = ContinuousCharacter::abs_x(&ctx).mul(&x.pow(i64::from(i))?);
        candidates.push((SpecialForm::AbsXTimesXPower(i), target));
    }
    let mut undecided = false;
    for (form, target) in candidates {
        let i = match form {
            SpecialForm::XInversePower(i) | SpecialForm::AbsXTimesXPower(i) => i,
        };
        match q.agreement(&target) {
            Verdict::Holds if i <= bound => {
                return Ok(Ext1 { dimension: Some(2), form: Some(form) });
            }
            Verdict::Fails => {}
            _ => undecided = true,
        }
    }
    Ok(Ext1 { dimension: if undecided { None } else { Some(1) }, form: None })
}

/// A single failed constraint on `(alpha, beta, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrystallineViolation {
    WeightBelowTwo { k: u32 },
    ZeroEigenvalue,
    AlphaEqualsBeta,
    BetaNotPositive { val_beta: i64 },
    BetaAboveAlpha { val_alpha: i64, val_beta: i64 },
    ValuationSum { sum: i64, expected: i64 },
}

impl fmt::Display for CrystallineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrystallineViolation::WeightBelowTwo { k } => write!(f, "k = {k} is below 2"),
            CrystallineViolation::ZeroEigenvalue => write!(f, "alpha and beta must be nonzero"),
            CrystallineViolation::AlphaEqualsBeta => write!(f, "alpha equals beta"),
            CrystallineViolation::BetaNotPositive { val_beta } => {
                write!(f, "val(beta) = {val_beta} is not positive")
            }
            CrystallineViolation::BetaAboveAlpha { val_alpha, val_beta } => {
                write!(f, "val(beta) = {val_beta} exceeds val(alpha) = {val_alpha}")
            }
            CrystallineViolation::ValuationSum { sum, expected } => {
                write!(f, "val(alpha) + val(beta) = {sum}, expected k - 1 = {expected}")
            }
        }
    }
}

/// Validated `(alpha, beta, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrystallineParam {
    alpha: Padic,
    beta: Padic,
    k: u32,
    berger_breuil: bool,
}

impl CrystallineParam {
    pub fn alpha(&self) -> &Padic {
        &self.alpha
    }

    pub fn beta(&self) -> &Padic {
        &self.beta
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `0 < val(alpha) < k - 1`.
    pub fn berger_breuil(&self) -> bool {
        self.berger_breuil
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.alpha.context()
    }

    /// Equality of the defining data at working precision.
    pub fn agreement(&self, other: &CrystallineParam) -> Verdict {
        if self.k != other.k {
            return Verdict::Fails;
        }
        let target = |x: &Padic| x.valuation().finite().unwrap_or(0) + self.context().working_precision();
        self.alpha
            .agreement(&other.alpha, target(&self.alpha))
            .and(self.beta.agreement(&other.beta, target(&self.beta)))
    }
}

/// Checks every constraint and reports all violations together.
pub fn validate_crystalline(alpha: Padic, beta: Padic, k: u32) -> Result<CrystallineParam> {
    let mut violations = Vec::new();
    if k < 2 {
        violations.push(CrystallineViolation::WeightBelowTwo { k });
    }
    let (va, vb) = match (alpha.valuation(), beta.valuation()) {
        (Valuation::Finite(a), Valuation::Finite(b)) => (a, b),
        _ => return Err(Error::Crystalline(vec![CrystallineViolation::ZeroEigenvalue])),
    };
    if alpha.agrees_with(&beta) {
        violations.push(CrystallineViolation::AlphaEqualsBeta);
    }
    if vb <= 0 {
        violations.push(CrystallineViolation::BetaNotPositive { val_beta: vb });
    }
    if vb > va {
        violations.push(CrystallineViolation::BetaAboveAlpha { val_alpha: va, val_beta: vb });
    }
    if va + vb != i64::from(k) - 1 {
        violations.push(CrystallineViolation::ValuationSum { sum: va + vb, expected: i64::from(k) - 1 });
    }
    if !violations.is_empty() {
        return Err(Error::Crystalline(violations));
    }
    let berger_breuil = 0 < va && va < i64::from(k) - 1;
    Ok(CrystallineParam { alpha, beta, k, berger_breuil })
}

/// A step of the filtration on `D(alpha, beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilStep {
    /// `Fil^i = D(alpha, beta)`.
    Whole,
    /// `Fil^i = L (e_alpha + e_beta)`.
    Line,
    Zero,
}

impl FilStep {
    pub fn dimension(self) -> u8 {
        match self {
            FilStep::Whole => 2,
            FilStep::Line => 1,
            FilStep::Zero => 0,
        }
    }

    pub fn basis(self) -> &'static [&'static str] {
        match self {
            FilStep::Whole => &["e_alpha", "e_beta"],
            FilStep::Line => &["e_alpha + e_beta"],
            FilStep::Zero => &[],
        }
    }
}

/// The filtration `Fil^i` of `D(alpha, beta)`, which depends on `k` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Filtration {
    k: u32,
}

impl Filtration {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("weight k = {k} must be at least 2")));
        }
        Ok(Filtration { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn step(&self, i: i64) -> FilStep {
        let k = i64::from(self.k);
        if i <= -(k - 1) {
            FilStep::Whole
        } else if i <= 0 {
            FilStep::Line
        } else {
            FilStep::Zero
        }
    }

    pub fn dimension(&self, i: i64) -> u8 {
        self.step(i).dimension()
    }

    /// Weights `-i` for every jump `Fil^i != Fil^(i+1)`, with multiplicity.
    pub fn hodge_tate_weights(&self) -> Vec<i64> {
        let k = i64::from(self.k);
        let mut weights = Vec::new();
        for i in (-k - 1)..=2 {
            let drop = self.dimension(i) - self.dimension(i + 1);
            for _ in 0..drop {
                weights.push(-i);
            }
        }
        weights.sort_unstable();
        weights
    }
}

/// `D(alpha, beta) = L e_alpha + L e_beta` with `phi(e_alpha) = alpha^(-1) e_alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredPhiModule {
    param: CrystallineParam,
}

impl FilteredPhiModule {
    pub fn new(param: CrystallineParam) -> Self {
        FilteredPhiModule { param }
    }

    pub fn param(&self) -> &CrystallineParam {
        &self.param
    }

    pub fn filtration(&self) -> Filtration {
        Filtration { k: self.param.k }
    }

    pub fn fil(&self, i: i64) -> FilStep {
        self.filtration().step(i)
    }

    pub fn fil_dimension(&self, i: i64) -> u8 {
        self.filtration().dimension(i)
    }

    pub fn hodge_tate_weights(&self) -> Vec<i64> {
        self.filtration().hodge_tate_weights()
    }

    /// `phi` on coordinates `(c_alpha, c_beta)`.
    pub fn phi_action(&self, c_alpha: &Padic, c_beta: &Padic) -> Result<(Padic, Padic)> {
        Ok((
            c_alpha * &self.param.alpha.inverse()?,
            c_beta * &self.param.beta.inverse()?,
        ))
    }
}
