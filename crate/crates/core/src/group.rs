//! The pro-p Iwahori group `I(1)`, the congruence subgroups `G(m)` and their
//! twisted action on series and piecewise functions.
//!
//! An element factors as `g = lower(y) diag(s, t) upper(x)` with
//! `y = c/a`, `s = a`, `t = d - cb/a`, `x = b/a`, and acts through
//!
//! * `lower(y)`:   `f(z) -> f(z - y)`
//! * `diag(s, t)`: `f(z) -> f(s z / t) t^(k-2)`
//! * `upper(x)`:   `f(z) -> f(z / (1 - x z)) (1 - x z)^(k-2)`
//!
//! applied right to left. Altogether `(g f)(z) = f((a z - c) / (d - b z)) (d - b z)^(k-2)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functions::{Leaf, LocallyAlgebraicFunction, PiecewiseFunction, StepFunction};
use crate::galois::CrystallineParam;
use crate::padic::{Padic, PadicContext};
use crate::tate::TateSeries;
use crate::valuation::Valuation;

/// The subgroup an element is declared to lie in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupLevel {
    /// `a, d` in `1 + pZ_p`, `b` in `pZ_p`, `c` in `Z_p`.
    ProP,
    /// `a - 1, b, c, d - 1` in `p^m Z_p`, `m >= 1`.
    Congruence(u32),
}

impl fmt::Display for GroupLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLevel::ProP => write!(f, "I(1)"),
            GroupLevel::Congruence(m) => write!(f, "G({m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IwahoriElement {
    a: Padic,
    b: Padic,
    c: Padic,
    d: Padic,
    level: GroupLevel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub y: Padic,
    pub s: Padic,
    pub t: Padic,
    pub x: Padic,
}

fn near_one(x: &Padic, e: i64) -> bool {
    (x - &Padic::one(x.context())).valuation() >= e
}

impl IwahoriElement {
    pub fn new(a: Padic, b: Padic, c: Padic, d: Padic, level: GroupLevel) -> Result<Self> {
        let ctx = a.context().clone();
        if [&b, &c, &d].iter().any(|x| !x.context().same_field(&ctx)) {
            return Err(Error::ContextMismatch);
        }
        let g = IwahoriElement { a, b, c, d, level };
        if let GroupLevel::Congruence(0) = level {
            return Err(Error::Parameter("congruence level must be at least 1".into()));
        }
        if !g.det().is_unit() {
            return Err(Error::Domain(format!("determinant {} is not a unit", g.det())));
        }
        if !g.lies_in(level) {
            return Err(Error::Domain(format!("matrix {g} is not in {level}")));
        }
        Ok(g)
    }

    /// Entry conditions of `I(1)` or `G(m)`.
    pub fn lies_in(&self, level: GroupLevel) -> bool {
        match level {
            GroupLevel::ProP => {
                near_one(&self.a, 1)
                    && near_one(&self.d, 1)
                    && self.b.valuation() >= 1
                    && self.c.valuation() >= 0
            }
            GroupLevel::Congruence(m) => {
                let m = i64::from(m);
                m >= 1
                    && near_one(&self.a, m)
                    && near_one(&self.d, m)
                    && self.b.valuation() >= m
                    && self.c.valuation() >= m
            }
        }
    }

    /// The deepest congruence level the entries satisfy, capped at `cap`.
    pub fn congruence_depth(&self, cap: u32) -> Option<u32> {
        (1..=cap).rev().find(|&m| self.lies_in(GroupLevel::Congruence(m)))
    }

    pub fn identity(ctx: &Arc<PadicContext>, level: GroupLevel) -> Self {
        let (one, zero) = (Padic::one(ctx), Padic::zero(ctx));
        IwahoriElement { a: one.clone(), b: zero.clone(), c: zero, d: one, level }
    }

    /// `(1 0; y 1)`.
    pub fn lower(y: Padic, level: GroupLevel) -> Result<Self> {
        let ctx = y.context().clone();
        IwahoriElement::new(Padic::one(&ctx), Padic::zero(&ctx), y, Padic::one(&ctx), level)
    }

    /// `(1 x; 0 1)`.
    pub fn upper(x: Padic, level: GroupLevel) -> Result<Self> {
        let ctx = x.context().clone();
        IwahoriElement::new(Padic::one(&ctx), x, Padic::zero(&ctx), Padic::one(&ctx), level)
    }

    /// `(s 0; 0 t)`.
    pub fn torus(s: Padic, t: Padic, level: GroupLevel) -> Result<Self> {
        let ctx = s.context().clone();
        IwahoriElement::new(s, Padic::zero(&ctx), Padic::zero(&ctx), t, level)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.a.context()
    }

    pub fn entries(&self) -> [&Padic; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn level(&self) -> GroupLevel {
        self.level
    }

    pub fn det(&self) -> Padic {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// The product lies in the larger of the two declared groups.
    pub fn mul(&self, other: &IwahoriElement) -> Result<IwahoriElement> {
        let level = match (self.level, other.level) {
            (GroupLevel::Congruence(m), GroupLevel::Congruence(n)) => GroupLevel::Congruence(m.min(n)),
            _ => GroupLevel::ProP,
        };
        Ok(IwahoriElement {
            a: &(&self.a * &other.a) + &(&self.b * &other.c),
            b: &(&self.a * &other.b) + &(&self.b * &other.d),
            c: &(&self.c * &other.a) + &(&self.d * &other.c),
            d: &(&self.c * &other.b) + &(&self.d * &other.d),
            level,
        })
    }

    pub fn inverse(&self) -> Result<IwahoriElement> {
        let inv = self.det().inverse()?;
        Ok(IwahoriElement {
            a: &self.d * &inv,
            b: -(&self.b * &inv),
            c: -(&self.c * &inv),
            d: &self.a * &inv,
            level: self.level,
        })
    }

    /// `g = lower(y) diag(s, t) upper(x)`.
    pub fn factorize(&self) -> Result<Factorization> {
        if !self.a.is_unit() {
            return Err(Error::Factorization(format!("corner a = {} is not a unit", self.a)));
        }
        let a_inv = self.a.inverse()?;
        Ok(Factorization {
            y: &self.c * &a_inv,
            s: self.a.clone(),
            t: &self.d - &(&(&self.c * &self.b) * &a_inv),
            x: &self.b * &a_inv,
        })
    }

    /// `w0 g w0` with `w0 = (0 1; 1 0)`, declared in `I(1)`.
    pub fn conjugate_w0(&self) -> Result<IwahoriElement> {
        IwahoriElement::new(
            self.d.clone(),
            self.c.clone(),
            self.b.clone(),
            self.a.clone(),
            GroupLevel::ProP,
        )
    }

    /// Entrywise agreement at working precision.
    pub fn agrees_with(&self, other: &IwahoriElement) -> bool {
        let target = self.context().working_precision();
        self.entries()
            .iter()
            .zip(other.entries())
            .all(|(x, y)| x.agreement(y, target).holds())
    }

    /// `((a z - c) / (d - b z), d - b z)`: the point and the factor whose
    /// `(k-2)`-th power twist `(g f)(z)`.
    pub fn point_action(&self, z: &Padic) -> Result<(Padic, Padic)> {
        let den = &self.d - &(&self.b * z);
        let num = &(&self.a * z) - &self.c;
        Ok((num.checked_div(&den)?, den))
    }
}

impl fmt::Display for IwahoriElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// The character driving the twisted action: only `k` is visible on `I(1)`.
///
/// A weight-only character carries no `(alpha, beta)`; for `k = 2` no pair in
/// `Q_p` satisfies the crystalline constraints, yet the action is defined.
#[derive(Clone, Debug, PartialEq)]
pub struct InductionCharacter {
    k: u32,
    param: Option<CrystallineParam>,
    side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Alpha,
    Beta,
}

impl InductionCharacter {
    pub fn new(param: CrystallineParam, side: Side) -> Self {
        InductionCharacter { k: param.k(), param: Some(param), side }
    }

    pub fn weight_only(k: u32, side: Side) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("weight k = {k} must be at least 2")));
        }
        Ok(InductionCharacter { k, param: None, side })
    }

    pub fn param(&self) -> Option<&CrystallineParam> {
        self.param.as_ref()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The exponent `k - 2` of the twist factors.
    pub fn twist(&self) -> u32 {
        self.k - 2
    }
}

/// Something `I(1)` (or a congruence subgroup) acts on with a given twist.
pub trait IwahoriModule: Sized {
    fn act_twisted(&self, g: &IwahoriElement, twist: u32) -> Result<Self>;
}

impl IwahoriModule for TateSeries {
    /// Needs `g` in `I(1)` at level 0 and in `G(m)` at level `m >= 1`.
    fn act_twisted(&self, g: &IwahoriElement, twist: u32) -> Result<TateSeries> {
        let m = self.level();
        let required = if m == 0 { GroupLevel::ProP } else { GroupLevel::Congruence(m) };
        if !g.lies_in(required) {
            return Err(Error::Domain(format!(
                "{g} is not in {required}, which a series at level {m} requires"
            )));
        }
        let Factorization { y, s, t, x } = g.factorize()?;
        let f = self.mobius_substitute(&x, twist)?;
        let f = f.scale_arg(&s)?;
        let f = f.inv_torus_twisted(&t, twist)?;
        f.translate(&y)
    }
}

impl IwahoriModule for PiecewiseFunction {
    /// Acts leafwise: each generator permutes the cosets of every level.
    fn act_twisted(&self, g: &IwahoriElement, twist: u32) -> Result<PiecewiseFunction> {
        if !g.lies_in(GroupLevel::ProP) {
            return Err(Error::Domain(format!("{g} is not in I(1)")));
        }
        let Factorization { y, s, t, x } = g.factorize()?;
        let f = act_upper(self, &x, twist)?;
        let f = act_torus(&f, &s, &t, twist)?;
        act_lower(&f, &y)
    }
}

fn residue_of(z: &Padic, h: u32) -> Result<u64> {
    z.residue_u64(h)
}

fn act_lower(f: &PiecewiseFunction, y: &Padic) -> Result<PiecewiseFunction> {
    if y.is_exact_zero() {
        return Ok(f.clone());
    }
    let ctx = f.context().clone();
    let leaves = f
        .leaves()
        .iter()
        .map(|leaf| {
            let a = Padic::from_u64(&ctx, leaf.center);
            let moved = residue_of(&(&a + y), leaf.level)?;
            let delta = &(&Padic::from_u64(&ctx, moved) - y) - &a;
            let series = leaf.series.recenter(&delta, leaf.level)?;
            Ok(Leaf { center: moved, level: leaf.level, series })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseFunction::new(&ctx, leaves)
}

fn act_torus(f: &PiecewiseFunction, s: &Padic, t: &Padic, twist: u32) -> Result<PiecewiseFunction> {
    let ctx = f.context().clone();
    let u = s.checked_div(t)?;
    let factor = t.pow(i64::from(twist))?;
    let u_inv = u.inverse()?;
    let leaves = f
        .leaves()
        .iter()
        .map(|leaf| {
            let a = Padic::from_u64(&ctx, leaf.center);
            let moved = residue_of(&(&a * &u_inv), leaf.level)?;
            let delta = &(&u * &Padic::from_u64(&ctx, moved)) - &a;
            let series = leaf.series.recenter(&delta, leaf.level)?.scale_arg(&u)?.scale(&factor);
            Ok(Leaf { center: moved, level: leaf.level, series })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseFunction::new(&ctx, leaves)
}

/// On the leaf through `a' = a / (1 + x a)`, with `c = 1 - x a'`,
/// `f(z / (1 - x z)) (1 - x z)^w` reads
/// `c^w phi(a'/c - a + z' / (c^2 (1 - (x/c) z'))) (1 - (x/c) z')^w`.
fn act_upper(f: &PiecewiseFunction, x: &Padic, twist: u32) -> Result<PiecewiseFunction> {
    if x.is_exact_zero() {
        return Ok(f.clone());
    }
    let ctx = f.context().clone();
    let one = Padic::one(&ctx);
    let leaves = f
        .leaves()
        .iter()
        .map(|leaf| {
            let a = Padic::from_u64(&ctx, leaf.center);
            let image = a.checked_div(&(&one + &(x * &a)))?;
            let moved = residue_of(&image, leaf.level)?;
            let a_new = Padic::from_u64(&ctx, moved);
            let c = &one - &(x * &a_new);
            let c_inv = c.inverse()?;
            let delta = &(&a_new * &c_inv) - &a;
            let series = leaf
                .series
                .recenter(&delta, leaf.level)?
                .scale_arg(&(&c_inv * &c_inv))?
                .mobius_substitute(&(x * &c_inv), twist)?
                .scale(&c.pow(i64::from(twist))?);
            Ok(Leaf { center: moved, level: leaf.level, series })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseFunction::new(&ctx, leaves)
}

/// `g f` for the character's twist `k - 2`.
pub fn act<M: IwahoriModule>(g: &IwahoriElement, f: &M, chi: &InductionCharacter) -> Result<M> {
    f.act_twisted(g, chi.twist())
}

/// The untwisted action on locally constant functions.
pub fn act_smooth(g: &IwahoriElement, f: &StepFunction) -> Result<StepFunction> {
    let out = f.inner().act_twisted(g, 0)?;
    StepFunction::new(out).map_err(|e| Error::Invariant(format!("smooth action left the step functions: {e}")))
}

pub fn act_locally_algebraic(
    g: &IwahoriElement,
    f: &LocallyAlgebraicFunction,
    chi: &InductionCharacter,
) -> Result<LocallyAlgebraicFunction> {
    if f.k() != chi.k() {
        return Err(Error::Mismatch(format!(
            "function has weight {} but the character has weight {}",
            f.k(),
            chi.k()
        )));
    }
    let out = act(g, f.inner(), chi)?;
    LocallyAlgebraicFunction::new(out, f.k())
        .map_err(|e| Error::Invariant(format!("locally algebraic action raised a degree: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeylCell {
    Identity,
    W0,
}

impl fmt::Display for WeylCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeylCell::Identity => write!(f, "identity"),
            WeylCell::W0 => write!(f, "w0"),
        }
    }
}

/// One function per Weyl cell.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylCellVector {
    pub identity: PiecewiseFunction,
    pub w0: PiecewiseFunction,
}

impl WeylCellVector {
    pub fn new(identity: PiecewiseFunction, w0: PiecewiseFunction) -> Result<Self> {
        if !identity.context().same_field(w0.context()) {
            return Err(Error::ContextMismatch);
        }
        Ok(WeylCellVector { identity, w0 })
    }

    pub fn zero(ctx: &Arc<PadicContext>) -> Self {
        let z = PiecewiseFunction::constant(ctx, Padic::zero(ctx));
        WeylCellVector { identity: z.clone(), w0: z }
    }

    pub fn cell(&self, cell: WeylCell) -> &PiecewiseFunction {
        match cell {
            WeylCell::Identity => &self.identity,
            WeylCell::W0 => &self.w0,
        }
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.identity.context()
    }

    pub fn zip(
        &self,
        other: &WeylCellVector,
        op: impl Fn(&PiecewiseFunction, &PiecewiseFunction) -> Result<PiecewiseFunction>,
    ) -> Result<WeylCellVector> {
        WeylCellVector::new(op(&self.identity, &other.identity)?, op(&self.w0, &other.w0)?)
    }

    pub fn add(&self, other: &WeylCellVector) -> Result<WeylCellVector> {
        self.zip(other, PiecewiseFunction::add)
    }

    pub fn sub(&self, other: &WeylCellVector) -> Result<WeylCellVector> {
        self.zip(other, PiecewiseFunction::sub)
    }
}

/// The identity cell is acted on by `g`, the `w0` cell by `w0 g w0`.
pub fn act_cell(g: &IwahoriElement, f: &WeylCellVector, chi: &InductionCharacter) -> Result<WeylCellVector> {
    let wrap = |cell| move |e: Error| Error::Cell { cell, source: Box::new(e) };
    let identity = act(g, &f.identity, chi).map_err(wrap(WeylCell::Identity))?;
    let conj = g.conjugate_w0().map_err(wrap(WeylCell::W0))?;
    let w0 = act(&conj, &f.w0, chi).map_err(wrap(WeylCell::W0))?;
    WeylCellVector::new(identity, w0)
}

/// `val_C` of every leaf, for checks that an action is isometric.
pub fn leaf_valuations(f: &PiecewiseFunction) -> Vec<Valuation> {
    f.leaves().iter().map(|l| l.series.val_c()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::validate_crystalline;

    fn ctx() -> Arc<PadicContext> {
        PadicContext::new(5, 20, 12).unwrap()
    }

    fn int(c: &Arc<PadicContext>, n: i64) -> Padic {
        Padic::from_i64(c, n)
    }

    fn rat(c: &Arc<PadicContext>, n: i64, d: i64) -> Padic {
        int(c, n).checked_div(&int(c, d)).unwrap()
    }

    fn chi(c: &Arc<PadicContext>, k: u32) -> InductionCharacter {
        let alpha = &int(c, 2) * &Padic::p_power(c, i64::from(k) - 2);
        let param = validate_crystalline(alpha, int(c, 5), k).unwrap();
        InductionCharacter::new(param, Side::Alpha)
    }

    fn matrix(c: &Arc<PadicContext>, e: [i64; 4]) -> IwahoriElement {
        IwahoriElement::new(int(c, e[0]), int(c, e[1]), int(c, e[2]), int(c, e[3]), GroupLevel::ProP).unwrap()
    }

    #[test]
    fn factorization_examples() {
        let c = ctx();
        let id = IwahoriElement::identity(&c, GroupLevel::ProP).factorize().unwrap();
        assert!(id.y.is_zero() && id.x.is_zero());
        assert_eq!((id.s, id.t), (int(&c, 1), int(&c, 1)));
        let l = IwahoriElement::lower(int(&c, 3), GroupLevel::ProP).unwrap().factorize().unwrap();
        assert_eq!(l.y, int(&c, 3));

        let g = matrix(&c, [6, 5, 1, 6]);
        let f = g.factorize().unwrap();
        assert_eq!(f.y, rat(&c, 1, 6));
        assert_eq!(f.s, int(&c, 6));
        assert_eq!(f.t, rat(&c, 31, 6));
        assert_eq!(f.x, rat(&c, 5, 6));
        let rebuilt = IwahoriElement::lower(f.y, GroupLevel::ProP)
            .unwrap()
            .mul(&IwahoriElement::torus(f.s, f.t, GroupLevel::ProP).unwrap())
            .unwrap()
            .mul(&IwahoriElement::upper(f.x, GroupLevel::ProP).unwrap())
            .unwrap();
        assert!(rebuilt.agrees_with(&g));
    }

    #[test]
    fn membership_of_entries() {
        let c = ctx();
        assert!(IwahoriElement::new(int(&c, 2), int(&c, 0), int(&c, 0), int(&c, 1), GroupLevel::ProP).is_err());
        assert!(IwahoriElement::new(int(&c, 1), int(&c, 1), int(&c, 0), int(&c, 1), GroupLevel::ProP).is_err());
        assert!(IwahoriElement::lower(int(&c, 5), GroupLevel::Congruence(2)).is_err());
        assert!(IwahoriElement::lower(int(&c, 25), GroupLevel::Congruence(2)).is_ok());
        assert!(IwahoriElement::lower(int(&c, 25), GroupLevel::Congruence(0)).is_err());
        let g = matrix(&c, [6, 5, 1, 6]);
        assert!(g.mul(&g.inverse().unwrap()).unwrap().agrees_with(&IwahoriElement::identity(&c, GroupLevel::ProP)));
    }

    #[test]
    fn action_examples_on_series() {
        let c = ctx();
        let f = TateSeries::from_integers(&c, 0, &[0, 0, 1]).unwrap();
        let id = IwahoriElement::identity(&c, GroupLevel::ProP);
        assert_eq!(act(&id, &f, &chi(&c, 3)).unwrap(), f);
        let lower = IwahoriElement::lower(int(&c, 5), GroupLevel::ProP).unwrap();
        assert_eq!(
            act(&lower, &f, &chi(&c, 3)).unwrap(),
            TateSeries::from_integers(&c, 0, &[25, -10, 1]).unwrap()
        );
        let one = TateSeries::from_integers(&c, 0, &[1]).unwrap();
        let upper = IwahoriElement::upper(int(&c, 5), GroupLevel::ProP).unwrap();
        assert_eq!(act(&upper, &one, &chi(&c, 3)).unwrap(), TateSeries::from_integers(&c, 0, &[1, -5]).unwrap());
        let deep = TateSeries::from_integers(&c, 2, &[1]).unwrap();
        assert!(act(&lower, &deep, &chi(&c, 3)).is_err());
    }

    #[test]
    fn piecewise_action_matches_point_formula() {
        let c = ctx();
        let k = 4;
        let f = PiecewiseFunction::complete(
            &c,
            vec![
                Leaf { center: 3, level: 1, series: TateSeries::from_integers(&c, 1, &[2, 1, 1]).unwrap() },
                Leaf { center: 5, level: 2, series: TateSeries::from_integers(&c, 2, &[0, 3]).unwrap() },
            ],
            |_, h| TateSeries::from_integers(&c, h, &[1, 0, 7]).unwrap(),
        )
        .unwrap();
        let g = matrix(&c, [6, 10, 3, 11]);
        let gf = act(&g, &f, &chi(&c, k)).unwrap();
        for z in 0..60 {
            let z = int(&c, z);
            let (w, den) = g.point_action(&z).unwrap();
            let expected = &f.evaluate(&w).unwrap() * &den.pow(i64::from(k) - 2).unwrap();
            assert!(gf.evaluate(&z).unwrap().agrees_with(&expected), "z = {z}");
        }
    }

    #[test]
    fn cell_action_examples() {
        let c = ctx();
        let ch = chi(&c, 4);
        let one = PiecewiseFunction::constant(&c, int(&c, 1));
        let v = WeylCellVector::new(one.clone(), one.clone()).unwrap();
        let id = IwahoriElement::identity(&c, GroupLevel::ProP);
        assert_eq!(act_cell(&id, &v, &ch).unwrap(), v);

        let diag = IwahoriElement::torus(int(&c, 6), int(&c, 11), GroupLevel::ProP).unwrap();
        let out = act_cell(&diag, &v, &ch).unwrap();
        assert_eq!(out.identity, PiecewiseFunction::constant(&c, int(&c, 121)));
        assert_eq!(out.w0, PiecewiseFunction::constant(&c, int(&c, 36)));

        let z = PiecewiseFunction::global(TateSeries::from_integers(&c, 0, &[0, 1]).unwrap()).unwrap();
        let v = WeylCellVector::new(z.clone(), z.clone()).unwrap();
        let lower = IwahoriElement::lower(int(&c, 5), GroupLevel::ProP).unwrap();
        let out = act_cell(&lower, &v, &ch).unwrap();
        let upper = IwahoriElement::upper(int(&c, 5), GroupLevel::ProP).unwrap();
        assert_eq!(out.identity, act(&lower, &z, &ch).unwrap());
        assert_eq!(out.w0, act(&upper, &z, &ch).unwrap());

        let unit_lower = IwahoriElement::lower(int(&c, 1), GroupLevel::ProP).unwrap();
        match act_cell(&unit_lower, &v, &ch) {
            Err(Error::Cell { cell: WeylCell::W0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn smooth_action_examples() {
        let c = ctx();
        let ind = StepFunction::new(PiecewiseFunction::indicator(&c, 0, 1).unwrap()).unwrap();
        let lower = IwahoriElement::lower(int(&c, 5), GroupLevel::ProP).unwrap();
        assert_eq!(act_smooth(&lower, &ind).unwrap(), ind);
        let k = StepFunction::new(PiecewiseFunction::constant(&c, int(&c, 2))).unwrap();
        let torus = IwahoriElement::torus(int(&c, 6), int(&c, 11), GroupLevel::ProP).unwrap();
        assert_eq!(act_smooth(&torus, &k).unwrap(), k);
    }

    #[test]
    fn locally_algebraic_examples() {
        let c = ctx();
        let z = PiecewiseFunction::global(TateSeries::from_integers(&c, 0, &[0, 1]).unwrap()).unwrap();
        let f = LocallyAlgebraicFunction::new(z.clone(), 3).unwrap();
        let id = IwahoriElement::identity(&c, GroupLevel::ProP);
        assert_eq!(act_locally_algebraic(&id, &f, &chi(&c, 3)).unwrap(), f);
        let upper = IwahoriElement::upper(int(&c, 10), GroupLevel::ProP).unwrap();
        let out = act_locally_algebraic(&upper, &f, &chi(&c, 3)).unwrap();
        assert_eq!(out.inner(), &z);
        assert!(act_locally_algebraic(&upper, &f, &chi(&c, 4)).is_err());
    }
}
