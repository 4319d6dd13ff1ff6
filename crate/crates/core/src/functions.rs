//! Functions on `Z_p` given by local series on a finite partition into balls.
//!
//! Each leaf is a coset `a + p^h Z_p` with `0 <= a < p^h` carrying a
//! [`TateSeries`] at level `h` in the local coordinate `z' = z - a`.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::padic::{Padic, PadicContext};
use crate::tate::TateSeries;
use crate::valuation::Valuation;
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq)]
pub struct Leaf {
    pub center: u64,
    pub level: u32,
    pub series: TateSeries,
}

impl Leaf {
    pub fn contains_residue(&self, p: u64, z: u64) -> bool {
        z % p.pow(self.level) == self.center
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseFunction {
    ctx: Arc<PadicContext>,
    leaves: Vec<Leaf>,
}

/// Verdict of a membership test, with the glued series when it holds.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub verdict: Verdict,
    pub witness: Option<TateSeries>,
}

impl Membership {
    fn without_witness(verdict: Verdict) -> Self {
        Membership { verdict, witness: None }
    }
}

fn coset_modulus(ctx: &PadicContext, level: u32) -> Result<u64> {
    ctx.p_pow_u64(level)
        .filter(|m| *m < u64::MAX / ctx.p())
        .ok_or_else(|| Error::Parameter(format!("coset level {level} is too deep for 64-bit centers")))
}

impl PiecewiseFunction {
    /// Validates levels, centers and that the cosets partition `Z_p`.
    pub fn new(ctx: &Arc<PadicContext>, mut leaves: Vec<Leaf>) -> Result<Self> {
        if leaves.is_empty() {
            return Err(Error::Parameter("a piecewise function needs at least one leaf".into()));
        }
        let p = ctx.p();
        let mut seen = HashSet::new();
        for leaf in &leaves {
            if !leaf.series.context().same_field(ctx) {
                return Err(Error::ContextMismatch);
            }
            if leaf.series.level() != leaf.level {
                return Err(Error::Parameter(format!(
                    "leaf {} + p^{} Z_p carries a series at level {}",
                    leaf.center,
                    leaf.level,
                    leaf.series.level()
                )));
            }
            if leaf.center >= coset_modulus(ctx, leaf.level)? {
                return Err(Error::Parameter(format!(
                    "center {} is not reduced mod p^{}",
                    leaf.center, leaf.level
                )));
            }
            if !seen.insert((leaf.level, leaf.center)) {
                return Err(Error::Parameter(format!(
                    "coset {} + p^{} Z_p appears twice",
                    leaf.center, leaf.level
                )));
            }
        }
        for leaf in &leaves {
            for h in 0..leaf.level {
                if seen.contains(&(h, leaf.center % p.pow(h))) {
                    return Err(Error::Parameter(format!(
                        "coset {} + p^{} Z_p overlaps a larger leaf",
                        leaf.center, leaf.level
                    )));
                }
            }
        }
        let top = leaves.iter().map(|l| l.level).max().unwrap_or(0);
        let covered: BigUint = leaves.iter().map(|l| ctx.p_pow(top - l.level)).sum();
        if covered != ctx.p_pow(top) {
            return Err(Error::Parameter("leaf cosets do not cover Z_p".into()));
        }
        leaves.sort_by_key(|l| (l.level, l.center));
        Ok(PiecewiseFunction { ctx: ctx.clone(), leaves })
    }

    /// One series on all of `Z_p`.
    pub fn global(series: TateSeries) -> Result<Self> {
        if series.level() != 0 {
            return Err(Error::Parameter("a global series must live at level 0".into()));
        }
        let ctx = series.context().clone();
        PiecewiseFunction::new(&ctx, vec![Leaf { center: 0, level: 0, series }])
    }

    pub fn constant(ctx: &Arc<PadicContext>, c: Padic) -> Self {
        PiecewiseFunction {
            ctx: ctx.clone(),
            leaves: vec![Leaf { center: 0, level: 0, series: TateSeries::constant(ctx, 0, c) }],
        }
    }

    /// Prescribed series on disjoint cosets, completed by `fill` on the
    /// coarsest cosets covering the rest of `Z_p`.
    pub fn complete(
        ctx: &Arc<PadicContext>,
        pieces: Vec<Leaf>,
        fill: impl Fn(u64, u32) -> TateSeries,
    ) -> Result<Self> {
        let p = ctx.p();
        let mut out = Vec::new();
        let mut stack = vec![(0u64, 0u32)];
        while let Some((a, h)) = stack.pop() {
            if let Some(piece) = pieces.iter().find(|l| l.level == h && l.center == a) {
                out.push(piece.clone());
                continue;
            }
            let modulus = p.pow(h);
            let inside = pieces.iter().any(|l| l.level > h && l.center % modulus == a);
            if inside {
                for j in 0..p {
                    stack.push((a + j * modulus, h + 1));
                }
            } else {
                out.push(Leaf { center: a, level: h, series: fill(a, h) });
            }
        }
        if out.iter().filter(|l| pieces.contains(l)).count() != pieces.len() {
            return Err(Error::Parameter("prescribed cosets overlap".into()));
        }
        PiecewiseFunction::new(ctx, out)
    }

    /// `1` on `a + p^h Z_p`, `0` elsewhere.
    pub fn indicator(ctx: &Arc<PadicContext>, center: u64, level: u32) -> Result<Self> {
        let one = TateSeries::constant(ctx, level, Padic::one(ctx));
        let piece = Leaf { center, level, series: one };
        PiecewiseFunction::complete(ctx, vec![piece], |_, h| TateSeries::zero(ctx, h))
    }

    /// Every coset of level `h`, with `make(a)` on `a + p^h Z_p`.
    pub fn uniform(
        ctx: &Arc<PadicContext>,
        level: u32,
        mut make: impl FnMut(u64) -> TateSeries,
    ) -> Result<Self> {
        let modulus = coset_modulus(ctx, level)?;
        let leaves = (0..modulus).map(|a| Leaf { center: a, level, series: make(a) }).collect();
        PiecewiseFunction::new(ctx, leaves)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn max_level(&self) -> u32 {
        self.leaves.iter().map(|l| l.level).max().unwrap_or(0)
    }

    /// Largest stored degree over the leaves.
    pub fn max_degree(&self) -> Option<usize> {
        self.leaves.iter().filter_map(|l| l.series.degree()).max()
    }

    pub fn is_locally_polynomial(&self) -> bool {
        self.leaves.iter().all(|l| l.series.is_polynomial())
    }

    /// The leaf whose coset contains `z`, with `z - a`.
    pub fn locate(&self, z: &Padic) -> Result<(&Leaf, Padic)> {
        if !z.is_integral() {
            return Err(Error::Domain(format!("{z} is not in Z_p")));
        }
        let top = self.max_level();
        let r = z.residue_u64(top)?;
        let leaf = self
            .leaves
            .iter()
            .find(|l| l.contains_residue(self.ctx.p(), r))
            .expect("leaves partition Z_p");
        let local = z - &Padic::from_u64(&self.ctx, leaf.center);
        Ok((leaf, local))
    }

    pub fn evaluate(&self, z: &Padic) -> Result<Padic> {
        let (leaf, local) = self.locate(z)?;
        leaf.series.evaluate(&local)
    }

    /// Splits every leaf down to cosets of the given level.
    pub fn refine(&self, level: u32) -> Result<Self> {
        if level < self.max_level() {
            return Err(Error::Parameter(format!(
                "cannot refine to level {level} below the deepest leaf at {}",
                self.max_level()
            )));
        }
        coset_modulus(&self.ctx, level)?;
        let p = self.ctx.p();
        let mut leaves = Vec::new();
        for leaf in &self.leaves {
            let step = p.pow(leaf.level);
            for j in 0..p.pow(level - leaf.level) {
                let offset = j * step;
                let series = leaf.series.recenter(&Padic::from_u64(&self.ctx, offset), level)?;
                leaves.push(Leaf { center: leaf.center + offset, level, series });
            }
        }
        PiecewiseFunction::new(&self.ctx, leaves)
    }

    /// Common refinement, combining the two local series on each piece.
    pub fn zip_with(
        &self,
        other: &PiecewiseFunction,
        op: impl Fn(&TateSeries, &TateSeries) -> Result<TateSeries>,
    ) -> Result<Self> {
        if !self.ctx.same_field(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let p = self.ctx.p();
        let mut leaves = Vec::new();
        for a in &self.leaves {
            for b in &other.leaves {
                let (deep, shallow_a) = if a.level >= b.level { (a, true) } else { (b, false) };
                let shallow = if shallow_a { b } else { a };
                if deep.center % p.pow(shallow.level) != shallow.center {
                    continue;
                }
                let shift = Padic::from_u64(&self.ctx, deep.center - shallow.center);
                let moved = shallow.series.recenter(&shift, deep.level)?;
                let series = if shallow_a { op(&deep.series, &moved)? } else { op(&moved, &deep.series)? };
                leaves.push(Leaf { center: deep.center, level: deep.level, series });
            }
        }
        PiecewiseFunction::new(&self.ctx, leaves)
    }

    pub fn map_series(&self, op: impl Fn(&Leaf) -> Result<TateSeries>) -> Result<Self> {
        let leaves = self
            .leaves
            .iter()
            .map(|l| Ok(Leaf { center: l.center, level: l.level, series: op(l)? }))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseFunction::new(&self.ctx, leaves)
    }

    pub fn add(&self, other: &PiecewiseFunction) -> Result<Self> {
        self.zip_with(other, |f, g| f.add(g))
    }

    pub fn sub(&self, other: &PiecewiseFunction) -> Result<Self> {
        self.zip_with(other, |f, g| f.sub(g))
    }

    pub fn scale(&self, c: &Padic) -> Self {
        self.map_series(|l| Ok(l.series.scale(c))).expect("scaling keeps the partition")
    }

    /// Whether every local series is zero.
    pub fn is_zero(&self) -> Verdict {
        let zero = TateSeries::zero(&self.ctx, 0);
        let target = self.ctx.working_precision();
        Verdict::all(self.leaves.iter().map(|l| {
            let z = zero.restrict(l.level).expect("restriction of zero");
            l.series.agreement(&z, target).unwrap_or(Verdict::Indeterminate)
        }))
    }

    /// Whether the restriction to `p^m Z_p` is one convergent series on that ball.
    ///
    /// If the leaf through 0 already contains the ball the answer is yes. Otherwise
    /// the leaves inside the ball are re-expanded around 0 and must coincide;
    /// leaves that are not polynomials cannot be extended to the ball from
    /// their stored data and leave the question open.
    pub fn is_member_can(&self, m: u32) -> Result<Membership> {
        let germ = self.leaf_at_zero();
        if germ.level <= m {
            return Ok(Membership { verdict: Verdict::Holds, witness: Some(germ.series.restrict(m)?) });
        }
        let modulus = self.ctx.p().pow(m);
        let inside: Vec<&Leaf> = self.leaves.iter().filter(|l| l.center % modulus == 0).collect();
        let mut expanded = Vec::new();
        let mut open = false;
        for leaf in &inside {
            if !leaf.series.is_polynomial() {
                open = true;
                continue;
            }
            let a = Padic::from_u64(&self.ctx, leaf.center);
            expanded.push(leaf.series.clone().with_level(m).shift(&-a));
        }
        let scale = inside
            .iter()
            .map(|l| coeff_floor(&l.series))
            .min()
            .unwrap_or(Valuation::Infinity);
        let target = match scale {
            Valuation::Finite(v) => v + self.ctx.working_precision(),
            Valuation::Infinity => self.ctx.working_precision(),
        };
        let mut verdict = Verdict::Holds;
        if let Some((first, rest)) = expanded.split_first() {
            for g in rest {
                verdict = verdict.and(polynomial_agreement(first, g, target));
                if verdict.fails() {
                    return Ok(Membership::without_witness(Verdict::Fails));
                }
            }
        }
        if open {
            verdict = verdict.and(Verdict::Indeterminate);
        }
        let witness = if verdict.holds() { expanded.into_iter().next() } else { None };
        Ok(Membership { verdict, witness })
    }

    /// `f` lies in the locally polynomial space of degree `<= k - 2` and its
    /// restriction to `p^m Z_p` is a single polynomial.
    pub fn is_member_pi_an(&self, m: u32, k: u32) -> Result<Verdict> {
        if k < 2 {
            return Err(Error::Parameter(format!("weight k = {k} must be at least 2")));
        }
        let bound = (k - 2) as usize;
        let degrees = Verdict::all(self.leaves.iter().map(|l| {
            if l.series.degree().is_some_and(|d| d > bound) {
                Verdict::Fails
            } else if l.series.is_polynomial() {
                Verdict::Holds
            } else {
                Verdict::Indeterminate
            }
        }));
        if degrees.fails() {
            return Ok(Verdict::Fails);
        }
        let glue = self.is_member_can(m)?;
        let witness_degree = match &glue.witness {
            Some(w) => Verdict::from_bool(w.degree().is_none_or(|d| d <= bound)),
            None => Verdict::Holds,
        };
        Ok(degrees.and(glue.verdict).and(witness_degree))
    }

    /// Finite differences `c_n = sum_j (-1)^(n-j) C(n, j) f(j)` for `n < count`.
    pub fn mahler_coefficients(&self, count: usize) -> Result<Vec<Padic>> {
        if count > self.ctx.degree() {
            return Err(Error::Parameter(format!(
                "{count} Mahler coefficients requested, at most D = {} allowed",
                self.ctx.degree()
            )));
        }
        let values = (0..count)
            .map(|j| self.evaluate(&Padic::from_u64(&self.ctx, j as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..count)
            .map(|n| {
                let mut acc = Padic::zero(&self.ctx);
                for (j, v) in values.iter().enumerate().take(n + 1) {
                    let term = &self.ctx.binomial(n, j) * v;
                    acc = if (n - j) % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            })
            .collect())
    }

    pub fn leaf_at_zero(&self) -> &Leaf {
        self.leaves.iter().find(|l| l.center == 0).expect("leaves partition Z_p")
    }
}

/// Smallest coefficient valuation of a series, ignoring the level.
fn coeff_floor(f: &TateSeries) -> Valuation {
    f.coeffs().iter().map(Padic::valuation_floor).min().unwrap_or(Valuation::Infinity)
}

/// Coefficientwise equality: a nonzero difference is decisive; zero
/// differences must be known to `target`.
pub(crate) fn polynomial_agreement(f: &TateSeries, g: &TateSeries, target: i64) -> Verdict {
    let len = f.coeffs().len().max(g.coeffs().len());
    Verdict::all((0..len).map(|l| value_agreement(&f.coeff(l), &g.coeff(l), target)))
}

pub(crate) fn value_agreement(x: &Padic, y: &Padic, target: i64) -> Verdict {
    let d = x - y;
    if !d.is_zero() {
        return Verdict::Fails;
    }
    match d.abs_precision() {
        Some(a) if a < target => Verdict::Indeterminate,
        _ => Verdict::Holds,
    }
}

/// Piecewise function whose leaves are all constants.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction(PiecewiseFunction);

impl StepFunction {
    pub fn new(f: PiecewiseFunction) -> Result<Self> {
        if f.leaves.iter().any(|l| !l.series.is_polynomial() || l.series.degree().unwrap_or(0) > 0) {
            return Err(Error::Parameter("a step function has constant leaves only".into()));
        }
        Ok(StepFunction(f))
    }

    pub fn inner(&self) -> &PiecewiseFunction {
        &self.0
    }

    pub fn into_inner(self) -> PiecewiseFunction {
        self.0
    }

    /// The restriction to `p^m Z_p` is constant.
    pub fn is_member_c_m(&self, m: u32) -> Result<Verdict> {
        self.0.is_member_pi_an(m, 2)
    }
}

/// Locally polynomial function of degree `<= k - 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocallyAlgebraicFunction {
    f: PiecewiseFunction,
    k: u32,
}

impl LocallyAlgebraicFunction {
    pub fn new(f: PiecewiseFunction, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("weight k = {k} must be at least 2")));
        }
        let bound = (k - 2) as usize;
        for l in &f.leaves {
            if !l.series.is_polynomial() || l.series.degree().is_some_and(|d| d > bound) {
                return Err(Error::Parameter(format!(
                    "leaf {} + p^{} Z_p is not a polynomial of degree <= {bound}",
                    l.center, l.level
                )));
            }
        }
        Ok(LocallyAlgebraicFunction { f, k })
    }

    pub fn inner(&self) -> &PiecewiseFunction {
        &self.f
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn into_inner(self) -> PiecewiseFunction {
        self.f
    }
}
