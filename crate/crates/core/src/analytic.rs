//! Orbit expansions, their valuation estimates and the cokernel model.
//!
//! For `f = sum a_l z^l` at level `m` the four generator families expand as
//!
//! * translation: `f(z - y)            = sum_v y^v f_v`,  `f_v = sum_l a_l C(l, v) (-1)^v z^(l-v)`
//! * Mobius:      `f(z / (1 - x z))    = sum_q x^q f_q`,  `f_q = sum_l a_l C(l+q-1, q) z^(l+q)`
//! * dilation:    `f((1 + s') z)       = sum_q s'^q f_q`, `f_q = sum_l a_l C(l, q) z^l`
//! * inverse torus: `f(z / (1 + t'))   = sum_q t'^q f_q`, `f_q = sum_l a_l C(l+q-1, q) (-1)^q z^l`
//!
//! with the estimates
//! `val_C(f_v) + m v >= inf_{l >= v} val(a_l) + m l`, `val_C(f_q) >= val_C(f) + m q`,
//! `val_C(f_q) >= inf_{l >= q} val(a_l) + m l` and `val_C(f_q) >= val_C(f)`.

use std::cmp::min;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{value_agreement, Leaf, PiecewiseFunction};
use crate::galois::CrystallineParam;
use crate::group::{Side, WeylCell, WeylCellVector};
use crate::padic::{Padic, PadicContext};
use crate::tate::{term_floor, TateSeries};
use crate::valuation::Valuation;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitFamily {
    Translation,
    Mobius,
    Dilation,
    InvTorus,
}

impl OrbitFamily {
    pub const ALL: [OrbitFamily; 4] =
        [OrbitFamily::Translation, OrbitFamily::Mobius, OrbitFamily::Dilation, OrbitFamily::InvTorus];

    pub fn name(self) -> &'static str {
        match self {
            OrbitFamily::Translation => "translation",
            OrbitFamily::Mobius => "mobius",
            OrbitFamily::Dilation => "dilation",
            OrbitFamily::InvTorus => "inv_torus",
        }
    }

    pub fn parse(s: &str) -> Option<OrbitFamily> {
        OrbitFamily::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for OrbitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficients `f_0, f_1, ...` of an orbit map in one group coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitExpansion {
    pub family: OrbitFamily,
    pub level: u32,
    pub coefficients: Vec<TateSeries>,
    /// `val_C` of the expanded series.
    pub source: Valuation,
}

impl OrbitExpansion {
    pub fn new(f: &TateSeries, family: OrbitFamily) -> OrbitExpansion {
        let ctx = f.context().clone();
        let d = ctx.degree();
        let m = f.level();
        let a = f.coeffs();
        let zero = || Padic::zero(&ctx);
        let count = match family {
            OrbitFamily::Translation | OrbitFamily::Dilation => a.len(),
            OrbitFamily::Mobius | OrbitFamily::InvTorus => d + 1,
        };
        let mut coefficients = Vec::with_capacity(count);
        for q in 0..count {
            let (coeffs, tail) = match family {
                OrbitFamily::Translation => {
                    let sign = q % 2 == 1;
                    let c = (q..a.len())
                        .map(|l| signed(&a[l] * &ctx.binomial(l, q), sign))
                        .collect::<Vec<_>>();
                    (c, f.tail_bound())
                }
                OrbitFamily::Dilation => {
                    let c = (0..a.len())
                        .map(|l| if l < q { zero() } else { &a[l] * &ctx.binomial(l, q) })
                        .collect();
                    (c, f.tail_bound())
                }
                OrbitFamily::Mobius => {
                    let mut c = vec![zero(); d + 1];
                    let mut dropped = Valuation::Infinity;
                    for (l, al) in a.iter().enumerate() {
                        let b = rising_binomial(&ctx, l, q);
                        if b.is_exact_zero() || al.is_exact_zero() {
                            continue;
                        }
                        if l + q <= d {
                            c[l + q] = al * &b;
                        } else {
                            dropped = min(dropped, term_floor(al, m, l + q));
                        }
                    }
                    (c, min(dropped, f.tail_bound() + i64::from(m) * q as i64))
                }
                OrbitFamily::InvTorus => {
                    let sign = q % 2 == 1;
                    let c = a
                        .iter()
                        .enumerate()
                        .map(|(l, al)| signed(al * &rising_binomial(&ctx, l, q), sign))
                        .collect();
                    (c, f.tail_bound())
                }
            };
            coefficients.push(TateSeries::from_parts(&ctx, m, coeffs, tail));
        }
        OrbitExpansion { family, level: m, coefficients, source: f.val_c() }
    }

    /// `sum_v param^v f_v(z)`, capped by the omitted indices when the
    /// expansion is infinite.
    pub fn reconstruct(&self, param: &Padic, z: &Padic) -> Result<Padic> {
        let ctx = param.context();
        let mut acc = Padic::zero(ctx);
        let mut power = Padic::one(ctx);
        for f in &self.coefficients {
            acc = &acc + &(&power * &f.evaluate(z)?);
            power = &power * param;
        }
        let step = match self.family {
            OrbitFamily::Translation | OrbitFamily::Dilation => return Ok(acc),
            OrbitFamily::Mobius => param.valuation() + i64::from(self.level),
            OrbitFamily::InvTorus => param.valuation(),
        };
        let omitted = match (step, self.source) {
            (Valuation::Finite(s), Valuation::Finite(v)) => v + s * self.coefficients.len() as i64,
            _ => return Ok(acc),
        };
        Ok(acc.with_abs_cap(omitted))
    }

    /// First index from which `val_C(f_v) + m v >= bound` for every computed `v`.
    pub fn growth_index(&self, bound: i64) -> usize {
        let g = self.growth();
        (0..=g.len()).find(|&v0| g[v0..].iter().all(|x| *x >= bound)).unwrap_or(g.len())
    }

    /// `val_C(f_v) + m v` for each index.
    pub fn growth(&self) -> Vec<Valuation> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(v, f)| f.val_c() + i64::from(self.level) * v as i64)
            .collect()
    }
}

fn signed(x: Padic, negate: bool) -> Padic {
    if negate {
        -x
    } else {
        x
    }
}

/// `C(l + q - 1, q)`, the coefficient of `v^q` in `(1 - v)^(-l)`.
fn rising_binomial(ctx: &Arc<PadicContext>, l: usize, q: usize) -> Padic {
    if l == 0 {
        if q == 0 {
            Padic::one(ctx)
        } else {
            Padic::zero(ctx)
        }
    } else {
        ctx.binomial(l + q - 1, q)
    }
}

/// One line of a bound report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub index: usize,
    pub val_c: Valuation,
    pub bound: Valuation,
    /// `None` when the left side is `+inf`.
    pub margin: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: OrbitFamily,
    pub rows: Vec<BoundRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub level: u32,
    pub val_c: Valuation,
    pub families: Vec<FamilyReport>,
}

impl BoundReport {
    pub fn min_margin(&self) -> Option<i64> {
        self.families.iter().flat_map(|f| f.rows.iter().filter_map(|r| r.margin)).min()
    }
}

/// `inf_{l >= v} val(a_l) + m l` over the stored terms.
fn suffix_minima(f: &TateSeries) -> Vec<Valuation> {
    let m = i64::from(f.level());
    let a = f.coeffs();
    let mut out = vec![Valuation::Infinity; a.len() + 1];
    for l in (0..a.len()).rev() {
        out[l] = min(out[l + 1], a[l].valuation() + m * l as i64);
    }
    out
}

/// Checks one family's estimate on every stored coefficient of `expansion`.
pub fn check_expansion(f: &TateSeries, expansion: &OrbitExpansion) -> Result<FamilyReport> {
    let m = i64::from(f.level());
    let suffix = suffix_minima(f);
    let base = f.val_c_stored();
    let family = expansion.family;
    let mut rows = Vec::with_capacity(expansion.coefficients.len());
    for (v, fv) in expansion.coefficients.iter().enumerate() {
        let tail_at = |v: usize| suffix.get(v).copied().unwrap_or(Valuation::Infinity);
        let (lhs, rhs) = match family {
            OrbitFamily::Translation => (fv.val_c_stored() + m * v as i64, tail_at(v)),
            OrbitFamily::Mobius => (fv.val_c_stored(), base + m * v as i64),
            OrbitFamily::Dilation => (fv.val_c_stored(), tail_at(v)),
            OrbitFamily::InvTorus => (fv.val_c_stored(), base),
        };
        let margin = match (lhs, rhs) {
            (Valuation::Infinity, _) => None,
            (Valuation::Finite(a), Valuation::Finite(b)) => Some(a - b),
            (Valuation::Finite(_), Valuation::Infinity) => Some(i64::MIN),
        };
        if margin.is_some_and(|x| x < 0) {
            return Err(Error::BoundViolation {
                family: family.name().into(),
                index: v,
                margin: margin.unwrap_or_default(),
            });
        }
        rows.push(BoundRow { index: v, val_c: lhs, bound: rhs, margin });
    }
    Ok(FamilyReport { family, rows })
}

/// Computes all four orbit expansions and checks each estimate exactly.
pub fn verify_bounds(f: &TateSeries) -> Result<BoundReport> {
    verify_bounds_with(f, |_| {})
}

/// As [`verify_bounds`], letting `tamper` alter the expansions before checking.
pub fn verify_bounds_with(f: &TateSeries, mut tamper: impl FnMut(&mut OrbitExpansion)) -> Result<BoundReport> {
    let mut families = Vec::with_capacity(4);
    for family in OrbitFamily::ALL {
        let mut e = OrbitExpansion::new(f, family);
        tamper(&mut e);
        families.push(check_expansion(f, &e)?);
    }
    Ok(BoundReport { level: f.level(), val_c: f.val_c(), families })
}

/// Replaces `f_index` by a constant just below its bound.
pub fn inject_fault(f: &TateSeries, expansion: &mut OrbitExpansion, index: usize) {
    let ctx = f.context().clone();
    let m = i64::from(f.level());
    let suffix = suffix_minima(f);
    let rhs = match expansion.family {
        OrbitFamily::Translation => suffix.get(index).copied().unwrap_or(Valuation::Infinity) + (-m * index as i64),
        OrbitFamily::Mobius => f.val_c_stored() + m * index as i64,
        OrbitFamily::Dilation => suffix.get(index).copied().unwrap_or(Valuation::Infinity),
        OrbitFamily::InvTorus => f.val_c_stored(),
    };
    let e = rhs.finite().map_or(0, |b| b - 1);
    let bad = TateSeries::constant(&ctx, f.level(), Padic::p_power(&ctx, e));
    while expansion.coefficients.len() <= index {
        expansion.coefficients.push(TateSeries::zero(&ctx, f.level()));
    }
    expansion.coefficients[index] = bad;
}

/// Outcome of the two independent analyticity criteria.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticVerdict {
    /// Re-expansion of the leaves inside `p^m Z_p` around 0.
    pub reexpansion: Verdict,
    /// Continuation of a reference leaf through its translation orbit
    /// coefficients, compared pointwise with the other leaves.
    pub orbit: Verdict,
    pub witness: Option<TateSeries>,
}

impl AnalyticVerdict {
    pub fn agree(&self) -> bool {
        self.reexpansion == self.orbit
    }
}

/// Whether `f` restricted to `p^m Z_p` is `G(m)`-analytic, by both criteria.
pub fn is_analytic_vector(f: &PiecewiseFunction, m: u32) -> Result<AnalyticVerdict> {
    let glue = f.is_member_can(m)?;
    let orbit = orbit_criterion(f, m)?;
    Ok(AnalyticVerdict { reexpansion: glue.verdict, orbit, witness: glue.witness })
}

fn orbit_criterion(f: &PiecewiseFunction, m: u32) -> Result<Verdict> {
    let ctx = f.context().clone();
    let germ = f.leaf_at_zero();
    if germ.level <= m {
        let w = germ.series.restrict(m)?;
        let floor = w.val_c();
        let e = OrbitExpansion::new(&w, OrbitFamily::Translation);
        return Ok(Verdict::from_bool(e.growth().iter().all(|g| *g >= floor)));
    }
    let modulus = ctx.p().pow(m);
    let inside: Vec<&Leaf> = f.leaves().iter().filter(|l| l.center % modulus == 0).collect();
    let reference = match inside.iter().find(|l| l.series.is_polynomial()) {
        Some(r) => *r,
        None => return Ok(Verdict::Indeterminate),
    };
    // phi_R(z - y) = sum_v y^v f_v(z); at z = 0, y = a_R - w this is the
    // continuation w -> phi_R(w - a_R) of the reference leaf.
    let expansion = OrbitExpansion::new(&reference.series.clone().with_level(0), OrbitFamily::Translation);
    let at_zero: Vec<Padic> = expansion.coefficients.iter().map(|c| c.coeff(0)).collect();
    let a_ref = Padic::from_u64(&ctx, reference.center);
    let continuation = |w: &Padic| -> Padic {
        let y = &a_ref - w;
        let mut acc = Padic::zero(&ctx);
        for c in at_zero.iter().rev() {
            acc = &(&acc * &y) + c;
        }
        acc
    };
    let scale = inside
        .iter()
        .flat_map(|l| l.series.coeffs().iter().map(Padic::valuation_floor))
        .min()
        .unwrap_or(Valuation::Infinity);
    let target = scale.finite().unwrap_or(0) + ctx.working_precision();
    let mut verdict = Verdict::Holds;
    for leaf in inside {
        if std::ptr::eq(leaf, reference) {
            continue;
        }
        if !leaf.series.is_polynomial() {
            verdict = verdict.and(Verdict::Indeterminate);
            continue;
        }
        let degree = leaf.series.degree().unwrap_or(0).max(reference.series.degree().unwrap_or(0));
        let step = ctx.p_pow_u64(leaf.level).expect("leaf levels fit in 64 bits");
        for j in 0..=degree as u64 {
            let local = Padic::from_u64(&ctx, j * step);
            let w = &Padic::from_u64(&ctx, leaf.center) + &local;
            let v = value_agreement(&continuation(&w), &leaf.series.evaluate(&local)?, target);
            if v.fails() {
                return Ok(Verdict::Fails);
            }
            verdict = verdict.and(v);
        }
    }
    Ok(verdict)
}

/// `(k, n, m)` with the test level `m > n`, and the crystalline data if any.
#[derive(Clone, Debug, PartialEq)]
pub struct CokernelParams {
    pub k: u32,
    pub n: u32,
    pub m: u32,
    pub param: Option<CrystallineParam>,
}

impl CokernelParams {
    pub fn new(k: u32, n: u32, m: Option<u32>, param: Option<CrystallineParam>) -> Result<Self> {
        let m = m.unwrap_or(n + 1);
        if k < 2 {
            return Err(Error::Parameter(format!("weight k = {k} must be at least 2")));
        }
        if m <= n {
            return Err(Error::Parameter(format!("test level m = {m} must exceed n = {n}")));
        }
        if let Some(p) = &param {
            if p.k() != k {
                return Err(Error::Parameter(format!("parameter weight {} differs from k = {k}", p.k())));
            }
        }
        Ok(CokernelParams { k, n, m, param })
    }

    pub fn from_param(param: CrystallineParam, n: u32, m: Option<u32>) -> Result<Self> {
        CokernelParams::new(param.k(), n, m, Some(param))
    }

    pub fn agreement(&self, other: &CokernelParams) -> Verdict {
        if (self.k, self.n, self.m) != (other.k, other.n, other.m) {
            return Verdict::Fails;
        }
        match (&self.param, &other.param) {
            (None, None) => Verdict::Holds,
            (Some(a), Some(b)) => a.agreement(b),
            _ => Verdict::Fails,
        }
    }
}

/// A Weyl-cell vector whose cells are analytic on `p^m Z_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct GAElement {
    cells: WeylCellVector,
    side: Side,
    witnesses: [TateSeries; 2],
}

impl GAElement {
    pub fn new(cells: WeylCellVector, side: Side, m: u32) -> Result<Self> {
        let mut witnesses = Vec::with_capacity(2);
        for cell in [WeylCell::Identity, WeylCell::W0] {
            let r = cells.cell(cell).is_member_can(m)?;
            match (r.verdict, r.witness) {
                (Verdict::Holds, Some(w)) => witnesses.push(w),
                (v, _) => {
                    return Err(Error::Parameter(format!(
                        "{cell} cell is not certified analytic on p^{m} Z_p ({v})"
                    )))
                }
            }
        }
        let [a, b]: [TateSeries; 2] = witnesses.try_into().expect("two cells");
        Ok(GAElement { cells, side, witnesses: [a, b] })
    }

    pub fn cells(&self) -> &WeylCellVector {
        &self.cells
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn witness(&self, cell: WeylCell) -> &TateSeries {
        match cell {
            WeylCell::Identity => &self.witnesses[0],
            WeylCell::W0 => &self.witnesses[1],
        }
    }
}

/// A class in `(GA(alpha) + GA(beta)) / pi(beta)_an`, by representative.
#[derive(Clone, Debug, PartialEq)]
pub struct CokernelElement {
    pub alpha: GAElement,
    pub beta: GAElement,
    pub params: CokernelParams,
}

impl CokernelElement {
    pub fn new(alpha: WeylCellVector, beta: WeylCellVector, params: CokernelParams) -> Result<Self> {
        let alpha = GAElement::new(alpha, Side::Alpha, params.m)?;
        let beta = GAElement::new(beta, Side::Beta, params.m)?;
        Ok(CokernelElement { alpha, beta, params })
    }

    pub fn zero(ctx: &Arc<PadicContext>, params: CokernelParams) -> Result<Self> {
        CokernelElement::new(WeylCellVector::zero(ctx), WeylCellVector::zero(ctx), params)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.alpha.cells.context()
    }
}

/// How the locally algebraic subspace sits inside the pair.
pub trait EmbeddingStrategy {
    /// Whether `(alpha, beta)` lies in the image of `pi(beta)_an`.
    fn contains(&self, alpha: &WeylCellVector, beta: &WeylCellVector, params: &CokernelParams) -> Result<Verdict>;
}

/// `pi(beta) -> LA(beta) -> LA(alpha) + LA(beta)` through the second summand.
#[derive(Clone, Copy, Debug, Default)]
pub struct BetaComponent;

impl EmbeddingStrategy for BetaComponent {
    fn contains(&self, alpha: &WeylCellVector, beta: &WeylCellVector, params: &CokernelParams) -> Result<Verdict> {
        let mut verdict = alpha.identity.is_zero().and(alpha.w0.is_zero());
        if verdict.fails() {
            return Ok(verdict);
        }
        for cell in [WeylCell::Identity, WeylCell::W0] {
            verdict = verdict.and(beta.cell(cell).is_member_pi_an(params.m, params.k)?);
        }
        Ok(verdict)
    }
}

pub fn cokernel_equal(c1: &CokernelElement, c2: &CokernelElement) -> Result<Verdict> {
    cokernel_equal_with(&BetaComponent, c1, c2)
}

pub fn cokernel_equal_with(
    strategy: &dyn EmbeddingStrategy,
    c1: &CokernelElement,
    c2: &CokernelElement,
) -> Result<Verdict> {
    if !c1.params.agreement(&c2.params).holds() {
        return Err(Error::Mismatch(format!(
            "cokernel parameters differ: (k, n, m) = ({}, {}, {}) vs ({}, {}, {})",
            c1.params.k, c1.params.n, c1.params.m, c2.params.k, c2.params.n, c2.params.m
        )));
    }
    let da = c1.alpha.cells.sub(&c2.alpha.cells)?;
    let db = c1.beta.cells.sub(&c2.beta.cells)?;
    strategy.contains(&da, &db, &c1.params)
}

/// A class together with the check that it differs from zero.
#[derive(Clone, Debug, PartialEq)]
pub struct NonzeroWitness {
    pub element: CokernelElement,
    pub equal_to_zero: Verdict,
}

/// `F_alpha` = the constant 1 on the identity cell, `F_beta = 0`.
pub fn witness_nonzero(ctx: &Arc<PadicContext>, params: CokernelParams) -> Result<NonzeroWitness> {
    let one = TateSeries::constant(ctx, 0, Padic::one(ctx));
    witness_nonzero_with(ctx, params, one)
}

/// `F_alpha` = the global polynomial `poly` (degree `<= k - 2`) on the identity cell.
pub fn witness_nonzero_with(
    ctx: &Arc<PadicContext>,
    params: CokernelParams,
    poly: TateSeries,
) -> Result<NonzeroWitness> {
    if !poly.is_polynomial() || poly.degree().is_some_and(|d| d + 2 > params.k as usize) || poly.level() != 0 {
        return Err(Error::Parameter(format!(
            "witness must be a global polynomial of degree <= k - 2 = {}",
            params.k - 2
        )));
    }
    let zero_fn = PiecewiseFunction::constant(ctx, Padic::zero(ctx));
    let alpha = WeylCellVector::new(PiecewiseFunction::global(poly)?, zero_fn)?;
    let element = CokernelElement::new(alpha, WeylCellVector::zero(ctx), params.clone())?;
    let zero = CokernelElement::zero(ctx, params)?;
    let equal_to_zero = cokernel_equal(&element, &zero)?;
    Ok(NonzeroWitness { element, equal_to_zero })
}
