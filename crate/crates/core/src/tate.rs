//! Truncated power series on closed balls `p^m Z_p`.
//!
//! A [`TateSeries`] stores `a_0 .. a_d` (`d <= D`) and a tail bound `T`: the
//! series it stands for differs from the stored polynomial by a series whose
//! Gauss valuation at level `m` is at least `T`. Every operation below
//! returns a new certificate computed from the old one.

use std::cmp::min;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{Padic, PadicContext};
use crate::valuation::Valuation;
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq)]
pub struct TateSeries {
    ctx: Arc<PadicContext>,
    level: u32,
    coeffs: Vec<Padic>,
    tail: Valuation,
}

impl TateSeries {
    /// Coefficients beyond `D` are folded into the tail bound.
    pub fn new(
        ctx: &Arc<PadicContext>,
        level: u32,
        mut coeffs: Vec<Padic>,
        tail: Valuation,
    ) -> Result<TateSeries> {
        if coeffs.iter().any(|c| !c.context().same_field(ctx)) {
            return Err(Error::ContextMismatch);
        }
        let mut tail = tail;
        let cap = ctx.degree() + 1;
        if coeffs.len() > cap {
            for (l, c) in coeffs.iter().enumerate().skip(cap) {
                tail = min(tail, term_floor(c, level, l));
            }
            coeffs.truncate(cap);
        }
        Ok(TateSeries::from_parts(ctx, level, coeffs, tail))
    }

    pub(crate) fn from_parts(
        ctx: &Arc<PadicContext>,
        level: u32,
        mut coeffs: Vec<Padic>,
        tail: Valuation,
    ) -> TateSeries {
        while coeffs.last().is_some_and(Padic::is_exact_zero) {
            coeffs.pop();
        }
        TateSeries { ctx: ctx.clone(), level, coeffs, tail }
    }

    /// A polynomial, exact beyond its stored terms.
    pub fn polynomial(ctx: &Arc<PadicContext>, level: u32, coeffs: Vec<Padic>) -> Result<TateSeries> {
        if coeffs.len() > ctx.degree() + 1 {
            return Err(Error::Parameter(format!(
                "polynomial of degree {} exceeds the truncation degree {}",
                coeffs.len() - 1,
                ctx.degree()
            )));
        }
        TateSeries::new(ctx, level, coeffs, Valuation::Infinity)
    }

    pub fn from_integers(ctx: &Arc<PadicContext>, level: u32, coeffs: &[i64]) -> Result<TateSeries> {
        let coeffs = coeffs.iter().map(|&c| Padic::from_i64(ctx, c)).collect();
        TateSeries::polynomial(ctx, level, coeffs)
    }

    pub fn zero(ctx: &Arc<PadicContext>, level: u32) -> TateSeries {
        TateSeries::from_parts(ctx, level, Vec::new(), Valuation::Infinity)
    }

    pub fn constant(ctx: &Arc<PadicContext>, level: u32, c: Padic) -> TateSeries {
        TateSeries::from_parts(ctx, level, vec![c], Valuation::Infinity)
    }

    /// `c z^j`; `j` must not exceed `D`.
    pub fn monomial(ctx: &Arc<PadicContext>, level: u32, c: Padic, j: usize) -> Result<TateSeries> {
        let mut coeffs = vec![Padic::zero(ctx); j];
        coeffs.push(c);
        TateSeries::polynomial(ctx, level, coeffs)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> Padic {
        self.coeffs.get(l).cloned().unwrap_or_else(|| Padic::zero(&self.ctx))
    }

    pub fn tail_bound(&self) -> Valuation {
        self.tail
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail == Valuation::Infinity
    }

    /// Highest index whose coefficient is nonzero at precision.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// `min_l val(a_l) + m l` over the stored terms.
    pub fn val_c_stored(&self) -> Valuation {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| c.valuation() + (self.level as i64) * (l as i64))
            .min()
            .unwrap_or(Valuation::Infinity)
    }

    /// The Banach valuation, capped by the tail bound.
    pub fn val_c(&self) -> Valuation {
        min(self.val_c_stored(), self.tail)
    }

    /// A certified lower bound for the Gauss valuation of the true series.
    pub fn val_c_floor(&self) -> Valuation {
        let stored = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| term_floor(c, self.level, l))
            .min()
            .unwrap_or(Valuation::Infinity);
        min(stored, self.tail)
    }

    pub(crate) fn with_level(mut self, level: u32) -> TateSeries {
        self.level = level;
        self
    }

    pub fn with_tail(&self, tail: Valuation) -> TateSeries {
        TateSeries { tail: min(self.tail, tail), ..self.clone() }
    }

    fn check_compatible(&self, other: &TateSeries) -> Result<()> {
        if !self.ctx.same_field(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.level != other.level {
            return Err(Error::Mismatch(format!(
                "series levels differ: {} and {}",
                self.level, other.level
            )));
        }
        Ok(())
    }

    fn check_in_ball(&self, z: &Padic, what: &str) -> Result<()> {
        if z.valuation() < i64::from(self.level) {
            return Err(Error::Domain(format!(
                "{what} = {z} has valuation {} below the ball level {}",
                z.valuation(),
                self.level
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TateSeries) -> Result<TateSeries> {
        self.check_compatible(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|l| &self.coeff(l) + &other.coeff(l)).collect();
        Ok(TateSeries::from_parts(&self.ctx, self.level, coeffs, min(self.tail, other.tail)))
    }

    pub fn sub(&self, other: &TateSeries) -> Result<TateSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TateSeries {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        TateSeries::from_parts(&self.ctx, self.level, coeffs, self.tail)
    }

    pub fn scale(&self, c: &Padic) -> TateSeries {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        TateSeries::from_parts(&self.ctx, self.level, coeffs, self.tail + c.valuation_floor())
    }

    /// Truncated Cauchy product; products landing beyond `D` join the tail.
    pub fn mul(&self, other: &TateSeries) -> Result<TateSeries> {
        self.check_compatible(other)?;
        let d = self.ctx.degree();
        let m = self.level;
        let (a, b) = (&self.coeffs, &other.coeffs);
        if a.is_empty() || b.is_empty() {
            let tail = min(self.val_c_floor() + other.tail, other.val_c_floor() + self.tail);
            return Ok(TateSeries::from_parts(&self.ctx, m, Vec::new(), tail));
        }
        let len = min(a.len() + b.len() - 1, d + 1);
        let mut coeffs = vec![Padic::zero(&self.ctx); len];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_exact_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(len.saturating_sub(i)) {
                coeffs[i + j] = &coeffs[i + j] + &(ai * bj);
            }
        }
        // Suffix minima of the term floors of `b` bound every dropped product.
        let b_floor: Vec<Valuation> = b.iter().enumerate().map(|(j, c)| term_floor(c, m, j)).collect();
        let mut suffix = vec![Valuation::Infinity; b.len() + 1];
        for j in (0..b.len()).rev() {
            suffix[j] = min(suffix[j + 1], b_floor[j]);
        }
        let mut dropped = Valuation::Infinity;
        for (i, ai) in a.iter().enumerate() {
            let start = (d + 1).saturating_sub(i);
            if start < b.len() {
                dropped = min(dropped, term_floor(ai, m, i) + suffix[start]);
            }
        }
        let tail = min(
            dropped,
            min(
                min(self.val_c_floor() + other.tail, other.val_c_floor() + self.tail),
                self.tail + other.tail,
            ),
        );
        Ok(TateSeries::from_parts(&self.ctx, m, coeffs, tail))
    }

    /// Horner evaluation at `z` with `val(z) >= m`; the result is capped at the tail bound.
    pub fn evaluate(&self, z: &Padic) -> Result<Padic> {
        self.check_in_ball(z, "z")?;
        let mut acc = Padic::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        Ok(match self.tail {
            Valuation::Finite(t) => acc.with_abs_cap(t),
            Valuation::Infinity => acc,
        })
    }

    /// `f(z + a)` as a polynomial identity on the stored terms.
    pub(crate) fn shift(&self, a: &Padic) -> TateSeries {
        if a.is_exact_zero() || self.coeffs.len() < 2 {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut powers = Vec::with_capacity(n);
        powers.push(Padic::one(&self.ctx));
        for i in 1..n {
            powers.push(&powers[i - 1] * a);
        }
        let coeffs = (0..n)
            .map(|v| {
                let mut acc = Padic::zero(&self.ctx);
                for l in v..n {
                    if self.coeffs[l].is_exact_zero() {
                        continue;
                    }
                    let term = &(&self.coeffs[l] * &self.ctx.binomial(l, v)) * &powers[l - v];
                    acc = &acc + &term;
                }
                acc
            })
            .collect();
        TateSeries::from_parts(&self.ctx, self.level, coeffs, self.tail)
    }

    /// `f(u z)` for a unit `u`.
    pub(crate) fn scale_arg(&self, u: &Padic) -> Result<TateSeries> {
        if !u.is_unit() {
            return Err(Error::Domain(format!("argument scaling by a non-unit {u}")));
        }
        let mut power = Padic::one(&self.ctx);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &power);
            power = &power * u;
        }
        Ok(TateSeries::from_parts(&self.ctx, self.level, coeffs, self.tail))
    }

    /// `f(z - y)` for `val(y) >= m`.
    pub fn translate(&self, y: &Padic) -> Result<TateSeries> {
        self.check_in_ball(y, "y")?;
        Ok(self.shift(&-y))
    }

    /// `f(s z)` for `val(s - 1) >= m`.
    pub fn dilate(&self, s: &Padic) -> Result<TateSeries> {
        check_near_one(s, self.level, "s")?;
        self.scale_arg(s)
    }

    /// `f(z / t) t^(k-2)` for `val(t - 1) >= m`.
    pub fn inv_torus(&self, t: &Padic, k: u32) -> Result<TateSeries> {
        check_weight(k)?;
        check_near_one(t, self.level, "t")?;
        self.inv_torus_twisted(t, k - 2)
    }

    pub(crate) fn inv_torus_twisted(&self, t: &Padic, twist: u32) -> Result<TateSeries> {
        let factor = t.pow(i64::from(twist))?;
        Ok(self.scale_arg(&t.inverse()?)?.scale(&factor))
    }

    /// `f(z / (1 - x z)) (1 - x z)^(k-2)` for `x` in `pZ_p`.
    pub fn mobius_twist(&self, x: &Padic, k: u32) -> Result<TateSeries> {
        check_weight(k)?;
        self.mobius_substitute(x, k - 2)
    }

    /// `f(z / (1 - x z)) (1 - x z)^twist`; `twist = 0` is the bare substitution.
    ///
    /// The coefficient of `z^j` is `sum_l a_l g(twist - l, j - l) x^(j - l)`
    /// where `g(e, q)` is the `q`-th coefficient of `(1 - v)^e`.
    pub fn mobius_substitute(&self, x: &Padic, twist: u32) -> Result<TateSeries> {
        if x.valuation() < 1 {
            return Err(Error::Domain(format!("x = {x} must lie in pZ_p")));
        }
        if x.is_exact_zero() || self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let d = self.ctx.degree();
        let m = i64::from(self.level);
        let twist = twist as usize;
        let mut powers = Vec::with_capacity(d + 1);
        powers.push(Padic::one(&self.ctx));
        for i in 1..=d {
            powers.push(&powers[i - 1] * x);
        }
        let mut coeffs = vec![Padic::zero(&self.ctx); d + 1];
        let mut dropped = Valuation::Infinity;
        let step = x.valuation_floor() + m;
        for (l, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            let top = if l <= twist { twist } else { usize::MAX };
            for (j, slot) in coeffs.iter_mut().enumerate().skip(l) {
                if j > top {
                    break;
                }
                let g = self.expansion_coeff(twist as i64 - l as i64, j - l);
                if g.is_exact_zero() {
                    continue;
                }
                *slot = &*slot + &(&(a * &g) * &powers[j - l]);
            }
            if top > d {
                let gap = (d + 1 - l) as i64;
                dropped = min(dropped, term_floor(a, self.level, l) + step_times(step, gap));
            }
        }
        Ok(TateSeries::from_parts(&self.ctx, self.level, coeffs, min(self.tail, dropped)))
    }

    /// Coefficient of `v^q` in `(1 - v)^e`.
    fn expansion_coeff(&self, e: i64, q: usize) -> Padic {
        if e >= 0 {
            let c = self.ctx.binomial(e as usize, q);
            if q % 2 == 1 {
                -c
            } else {
                c
            }
        } else {
            self.ctx.binomial(q + e.unsigned_abs() as usize - 1, q)
        }
    }

    /// `g(z') = f(a + z')` viewed on `p^(m') Z_p`.
    pub fn recenter(&self, a: &Padic, new_level: u32) -> Result<TateSeries> {
        self.check_in_ball(a, "a")?;
        if new_level < self.level {
            return Err(Error::Domain(format!(
                "cannot recenter from level {} to the larger ball at level {new_level}",
                self.level
            )));
        }
        let mut g = self.shift(a);
        g.level = new_level;
        Ok(g)
    }

    /// Restriction to the smaller ball `p^(m') Z_p`.
    pub fn restrict(&self, new_level: u32) -> Result<TateSeries> {
        self.recenter(&Padic::zero(&self.ctx), new_level)
    }

    /// Whether `val_C(self - other) >= target` holds for the true series.
    pub fn agreement(&self, other: &TateSeries, target: i64) -> Result<Verdict> {
        let diff = self.sub(other)?;
        let m = i64::from(self.level);
        let mut verdict = Verdict::Holds;
        for (l, c) in diff.coeffs.iter().enumerate() {
            let shift = m * l as i64;
            match c.valuation() {
                Valuation::Finite(v) if v + shift < target => {
                    if diff.tail > v + shift {
                        return Ok(Verdict::Fails);
                    }
                    verdict = Verdict::Indeterminate;
                }
                Valuation::Finite(_) => {}
                Valuation::Infinity => {
                    if let Some(a) = c.abs_precision() {
                        if a + shift < target {
                            verdict = Verdict::Indeterminate;
                        }
                    }
                }
            }
        }
        if diff.tail < target {
            verdict = verdict.and(Verdict::Indeterminate);
        }
        Ok(verdict)
    }

    /// Coefficientwise agreement at `val_C(self) + N - kappa`.
    pub fn agrees_at_working_precision(&self, other: &TateSeries) -> Result<Verdict> {
        let base = match min(self.val_c(), other.val_c()) {
            Valuation::Finite(v) => v,
            Valuation::Infinity => 0,
        };
        self.agreement(other, base + self.ctx.working_precision())
    }
}

fn step_times(step: Valuation, gap: i64) -> Valuation {
    match step {
        Valuation::Finite(s) => Valuation::Finite(s * gap),
        Valuation::Infinity => Valuation::Infinity,
    }
}

/// Lower bound for `val(a_l) + m l`, reading `O(p^A)` as valuation `A`.
pub(crate) fn term_floor(c: &Padic, level: u32, l: usize) -> Valuation {
    c.valuation_floor() + i64::from(level) * l as i64
}

fn check_weight(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::Parameter(format!("weight k = {k} must be at least 2")));
    }
    Ok(())
}

fn check_near_one(s: &Padic, level: u32, what: &str) -> Result<()> {
    let one = Padic::one(s.context());
    if !s.is_unit() || (s - &one).valuation() < i64::from(level) {
        return Err(Error::Domain(format!(
            "{what} = {s} must be a unit congruent to 1 mod p^{level}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<PadicContext> {
        PadicContext::new(5, 20, 12).unwrap()
    }

    fn int(c: &Arc<PadicContext>, n: i64) -> Padic {
        Padic::from_i64(c, n)
    }

    #[test]
    fn val_c_examples() {
        let c = ctx();
        assert_eq!(TateSeries::zero(&c, 3).val_c(), Valuation::Infinity);
        assert_eq!(TateSeries::constant(&c, 4, int(&c, 1)).val_c(), Valuation::Finite(0));
        let f = TateSeries::from_integers(&c, 2, &[5, 1, 0, 25]).unwrap();
        assert_eq!(f.val_c(), Valuation::Finite(1));
        assert_eq!(f.with_tail(Valuation::Finite(0)).val_c(), Valuation::Finite(0));
    }

    #[test]
    fn coefficients_beyond_degree_join_the_tail() {
        let c = PadicContext::new(5, 20, 2).unwrap();
        let coeffs = [1, 0, 0, 5].iter().map(|&n| int(&c, n)).collect();
        let f = TateSeries::new(&c, 1, coeffs, Valuation::Infinity).unwrap();
        assert_eq!(f.coeffs().len(), 1);
        assert_eq!(f.tail_bound(), Valuation::Finite(4));
        assert!(TateSeries::from_integers(&c, 1, &[1, 2, 3, 4]).is_err());
    }

    #[test]
    fn translate_examples() {
        let c = ctx();
        let z = TateSeries::from_integers(&c, 1, &[0, 1]).unwrap();
        let y = int(&c, 10);
        assert_eq!(z.translate(&y).unwrap(), TateSeries::from_integers(&c, 1, &[-10, 1]).unwrap());
        let f = TateSeries::from_integers(&c, 1, &[0, 0, 1]).unwrap();
        assert_eq!(f.translate(&Padic::zero(&c)).unwrap(), f);
        assert_eq!(
            f.translate(&int(&c, 5)).unwrap(),
            TateSeries::from_integers(&c, 1, &[25, -10, 1]).unwrap()
        );
        assert!(f.translate(&int(&c, 1)).is_err());
    }

    #[test]
    fn dilate_examples() {
        let c = ctx();
        let f = TateSeries::from_integers(&c, 1, &[0, 0, 1]).unwrap();
        assert_eq!(f.dilate(&int(&c, 1)).unwrap(), f);
        assert_eq!(f.dilate(&int(&c, 6)).unwrap(), TateSeries::from_integers(&c, 1, &[0, 0, 36]).unwrap());
        let k = TateSeries::from_integers(&c, 1, &[7]).unwrap();
        assert_eq!(k.dilate(&int(&c, 26)).unwrap(), k);
        assert!(f.dilate(&int(&c, 2)).is_err());
    }

    #[test]
    fn mobius_examples() {
        let c = ctx();
        let one = TateSeries::from_integers(&c, 1, &[1]).unwrap();
        assert_eq!(one.mobius_twist(&Padic::zero(&c), 3).unwrap(), one);
        assert_eq!(
            one.mobius_twist(&int(&c, 5), 3).unwrap(),
            TateSeries::from_integers(&c, 1, &[1, -5]).unwrap()
        );
        assert!(one.mobius_twist(&int(&c, 5), 1).is_err());
        assert!(one.mobius_twist(&int(&c, 1), 2).is_err());

        // z / (1 - 5z) = sum 5^q z^(q+1)
        let z = TateSeries::from_integers(&c, 1, &[0, 1]).unwrap();
        let g = z.mobius_twist(&int(&c, 5), 2).unwrap();
        let d = c.degree();
        for j in 1..=d {
            assert_eq!(g.coeff(j), int(&c, 5i64.pow(j as u32 - 1)), "z^{j}");
        }
        // The first dropped term is 5^D z^(D+1), at Gauss valuation D + (D + 1).
        assert_eq!(g.tail_bound(), Valuation::Finite(2 * d as i64 + 1));
    }

    #[test]
    fn mobius_twist_keeps_low_degree_polynomials() {
        let c = ctx();
        for k in 2..=6u32 {
            for j in 0..=(k as usize - 2) {
                let f = TateSeries::monomial(&c, 1, int(&c, 1), j).unwrap();
                let g = f.mobius_twist(&int(&c, 15), k).unwrap();
                assert!(g.is_polynomial(), "k={k} j={j}");
                // z^j (1 - xz)^(k-2-j), expanded independently.
                let e = k as usize - 2 - j;
                for q in 0..=e {
                    let expected = &c.binomial(e, q) * &int(&c, (-15i64).pow(q as u32));
                    assert_eq!(g.coeff(j + q), expected);
                }
                assert_eq!(g.degree(), Some(k as usize - 2));
            }
        }
    }

    #[test]
    fn inv_torus_examples() {
        let c = ctx();
        let z = TateSeries::from_integers(&c, 1, &[0, 1]).unwrap();
        assert_eq!(z.inv_torus(&int(&c, 1), 2).unwrap(), z);
        let g = z.inv_torus(&int(&c, 6), 2).unwrap();
        let mut oracle = Padic::zero(&c);
        let mut term = Padic::one(&c);
        for _ in 0..c.precision() {
            oracle = &oracle + &term;
            term = &term * &int(&c, -5);
        }
        assert_eq!(g.coeff(1), oracle);
        let one = TateSeries::from_integers(&c, 1, &[1]).unwrap();
        assert_eq!(one.inv_torus(&int(&c, 6), 4).unwrap(), TateSeries::from_integers(&c, 1, &[36]).unwrap());
    }

    #[test]
    fn recenter_examples() {
        let c = ctx();
        let z = TateSeries::from_integers(&c, 1, &[0, 1]).unwrap();
        assert_eq!(z.recenter(&Padic::zero(&c), 1).unwrap(), z);
        assert_eq!(z.recenter(&int(&c, 5), 2).unwrap(), TateSeries::from_integers(&c, 2, &[5, 1]).unwrap());
        let sq = TateSeries::from_integers(&c, 1, &[0, 0, 1]).unwrap();
        assert_eq!(
            sq.recenter(&int(&c, 5), 2).unwrap(),
            TateSeries::from_integers(&c, 2, &[25, 10, 1]).unwrap()
        );
        assert!(sq.recenter(&int(&c, 1), 2).is_err());
        assert!(sq.recenter(&int(&c, 5), 0).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let c = ctx();
        let one = TateSeries::from_integers(&c, 0, &[1]).unwrap();
        assert_eq!(one.evaluate(&int(&c, 3)).unwrap(), int(&c, 1));
        let sq = TateSeries::from_integers(&c, 0, &[0, 0, 1]).unwrap();
        assert_eq!(sq.evaluate(&int(&c, 5)).unwrap(), int(&c, 25));
        let f = TateSeries::from_integers(&c, 1, &[5, 1, 0, 25]).unwrap();
        assert_eq!(f.evaluate(&int(&c, 5)).unwrap(), int(&c, 3135));
        assert!(f.evaluate(&int(&c, 2)).is_err());
        let capped = f.with_tail(Valuation::Finite(3)).evaluate(&int(&c, 5)).unwrap();
        assert_eq!(capped.abs_precision(), Some(3));
    }

    #[test]
    fn product_tail_counts_dropped_terms() {
        let c = PadicContext::new(5, 20, 3).unwrap();
        let f = TateSeries::from_integers(&c, 1, &[1, 1, 0, 1]).unwrap();
        let g = f.mul(&f).unwrap();
        assert_eq!(g.coeffs().len(), 4);
        assert_eq!(g.coeff(3), int(&c, 2));
        // Dropped z^4 (coefficient 1) has valuation 0 + 4.
        assert_eq!(g.tail_bound(), Valuation::Finite(4));
    }

    #[test]
    fn agreement_respects_tails() {
        let c = ctx();
        let f = TateSeries::from_integers(&c, 1, &[1, 1]).unwrap();
        let g = TateSeries::from_integers(&c, 1, &[1, 1 + 625]).unwrap();
        assert_eq!(f.agreement(&g, 5).unwrap(), Verdict::Holds);
        assert_eq!(f.agreement(&g, 6).unwrap(), Verdict::Fails);
        let fuzzy = g.with_tail(Valuation::Finite(3));
        assert_eq!(f.agreement(&fuzzy, 6).unwrap(), Verdict::Indeterminate);
    }
}
