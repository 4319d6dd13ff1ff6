use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{strip_p, PadicContext};
use crate::error::{Error, Result};
use crate::valuation::Valuation;
use crate::verdict::Verdict;

/// An element of `Q_p` at finite precision.
#[derive(Clone)]
pub struct Padic {
    ctx: Arc<PadicContext>,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// `None` is an exact zero, `Some(a)` is `O(p^a)`.
    Zero { abs: Option<i64> },
    /// `p^val * unit`, the unit known modulo `p^rel`.
    Nonzero { val: i64, unit: BigUint, rel: u32 },
}

impl Padic {
    pub fn zero(ctx: &Arc<PadicContext>) -> Padic {
        Padic { ctx: ctx.clone(), repr: Repr::Zero { abs: None } }
    }

    /// The zero `O(p^abs)`.
    pub fn zero_at(ctx: &Arc<PadicContext>, abs: i64) -> Padic {
        Padic { ctx: ctx.clone(), repr: Repr::Zero { abs: Some(abs) } }
    }

    pub fn one(ctx: &Arc<PadicContext>) -> Padic {
        Padic::from_i64(ctx, 1)
    }

    pub fn from_i64(ctx: &Arc<PadicContext>, n: i64) -> Padic {
        Padic::from_bigint(ctx, &BigInt::from(n))
    }

    pub fn from_u64(ctx: &Arc<PadicContext>, n: u64) -> Padic {
        Padic::from_bigint(ctx, &BigInt::from(n))
    }

    /// An integer, kept to full relative precision `N`.
    pub fn from_bigint(ctx: &Arc<PadicContext>, n: &BigInt) -> Padic {
        if n.is_zero() {
            return Padic::zero(ctx);
        }
        let mut mag = n.magnitude().clone();
        let v = i64::from(strip_p(ctx.p_big(), &mut mag));
        let x = Padic::from_unit_parts(ctx, v, mag, ctx.precision());
        if n.is_negative() {
            -x
        } else {
            x
        }
    }

    pub fn from_rational(ctx: &Arc<PadicContext>, num: &BigInt, den: &BigInt) -> Result<Padic> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Padic::from_bigint(ctx, num).checked_div(&Padic::from_bigint(ctx, den))
    }

    /// `p^e`.
    pub fn p_power(ctx: &Arc<PadicContext>, e: i64) -> Padic {
        Padic::from_unit_parts(ctx, e, BigUint::one(), ctx.precision())
    }

    /// `p^val * unit` with `unit` known mod `p^rel`; `unit` may carry factors of `p`.
    pub(crate) fn from_unit_parts(
        ctx: &Arc<PadicContext>,
        val: i64,
        unit: BigUint,
        rel: u32,
    ) -> Padic {
        Padic::normalize(ctx, val, unit, Some(val + i64::from(rel)))
    }

    /// `p^v0 * residue` known mod `p^abs` (`None` when exact).
    fn normalize(ctx: &Arc<PadicContext>, v0: i64, mut residue: BigUint, abs: Option<i64>) -> Padic {
        let n = i64::from(ctx.precision());
        if residue.is_zero() {
            return Padic { ctx: ctx.clone(), repr: Repr::Zero { abs } };
        }
        let v = v0 + i64::from(strip_p(ctx.p_big(), &mut residue));
        let rel = match abs {
            Some(a) if a <= v => {
                return Padic { ctx: ctx.clone(), repr: Repr::Zero { abs: Some(a) } };
            }
            Some(a) => min(a - v, n),
            None => n,
        } as u32;
        let unit = residue.mod_floor(ctx.p_pow_ref(rel));
        Padic { ctx: ctx.clone(), repr: Repr::Nonzero { val: v, unit, rel } }
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    /// `+inf` for zeros, exact or at precision.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero { .. } => Valuation::Infinity,
            Repr::Nonzero { val, .. } => Valuation::Finite(*val),
        }
    }

    /// Exponent `A` with the value known mod `p^A`; `None` for an exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Nonzero { val, rel, .. } => Some(val + i64::from(*rel)),
        }
    }

    pub fn rel_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { rel, .. } => Some(*rel),
        }
    }

    /// Zero at the stored precision.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None })
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    pub fn is_integral(&self) -> bool {
        self.valuation() >= 0
    }

    /// The unit part as a residue mod `p^rel`.
    pub fn unit_part(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Forget every digit at or beyond `p^cap`.
    pub fn with_abs_cap(&self, cap: i64) -> Padic {
        match &self.repr {
            Repr::Zero { abs } => match abs {
                Some(a) if *a <= cap => self.clone(),
                _ => Padic::zero_at(&self.ctx, cap),
            },
            Repr::Nonzero { val, unit, rel } => {
                if val + i64::from(*rel) <= cap {
                    self.clone()
                } else {
                    Padic::normalize(&self.ctx, *val, unit.clone(), Some(cap))
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Nonzero { val, unit, rel } => {
                let modulus = self.ctx.p_pow_ref(*rel);
                let inv = unit.modinv(modulus).expect("unit part is invertible");
                Ok(Padic {
                    ctx: self.ctx.clone(),
                    repr: Repr::Nonzero { val: -val, unit: inv, rel: *rel },
                })
            }
        }
    }

    pub fn checked_div(&self, other: &Padic) -> Result<Padic> {
        Ok(self * &other.inverse()?)
    }

    /// Division by a positive integer, shifting the valuation by `val_p(n)`.
    pub fn div_exact_integer(&self, n: u64) -> Result<Padic> {
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        self.checked_div(&Padic::from_u64(&self.ctx, n))
    }

    pub fn pow(&self, e: i64) -> Result<Padic> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Padic::one(&self.ctx);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// True when the difference is zero at the available precision.
    pub fn agrees_with(&self, other: &Padic) -> bool {
        (self - other).is_zero()
    }

    /// Whether `self - other` is known to lie in `p^target Z_p`.
    pub fn agreement(&self, other: &Padic, target: i64) -> Verdict {
        let diff = self - other;
        match (&diff.repr, diff.valuation()) {
            (_, Valuation::Finite(v)) => Verdict::from_bool(v >= target),
            (Repr::Zero { abs: Some(a) }, _) if *a < target => Verdict::Indeterminate,
            _ => Verdict::Holds,
        }
    }

    /// The residue mod `p^h` of an integral value.
    pub fn residue_mod_pow(&self, h: u32) -> Result<BigUint> {
        if h == 0 {
            return Ok(BigUint::zero());
        }
        let modulus = self.ctx.p_pow(h);
        match &self.repr {
            Repr::Zero { abs } => match abs {
                Some(a) if *a < i64::from(h) => Err(Error::Precision(format!(
                    "value known only mod p^{a}, residue mod p^{h} requested"
                ))),
                _ => Ok(BigUint::zero()),
            },
            Repr::Nonzero { val, unit, rel } => {
                if *val < 0 {
                    return Err(Error::Domain(format!("value has valuation {val} < 0")));
                }
                if val + i64::from(*rel) < i64::from(h) {
                    return Err(Error::Precision(format!(
                        "value known only mod p^{}, residue mod p^{h} requested",
                        val + i64::from(*rel)
                    )));
                }
                if *val >= i64::from(h) {
                    return Ok(BigUint::zero());
                }
                Ok((self.ctx.p_pow(*val as u32) * unit).mod_floor(&modulus))
            }
        }
    }

    pub fn residue_u64(&self, h: u32) -> Result<u64> {
        self.residue_mod_pow(h)?
            .to_u64()
            .ok_or_else(|| Error::Precision(format!("p^{h} does not fit in 64 bits")))
    }

    /// The rational representative `n / p^e` whose unit part is balanced
    /// around zero. Zeros give `(0, 0)`.
    pub fn balanced(&self) -> (BigInt, u32) {
        match &self.repr {
            Repr::Zero { .. } => (BigInt::zero(), 0),
            Repr::Nonzero { val, unit, rel } => {
                let modulus = self.ctx.p_pow(*rel);
                let half = &modulus >> 1u32;
                let mut n = BigInt::from_biguint(Sign::Plus, unit.clone());
                if *unit > half {
                    n -= BigInt::from_biguint(Sign::Plus, modulus);
                }
                if *val >= 0 {
                    (n * BigInt::from_biguint(Sign::Plus, self.ctx.p_pow(*val as u32)), 0)
                } else {
                    (n, val.unsigned_abs() as u32)
                }
            }
        }
    }

    /// The balanced integer representative when it is small enough to trust.
    ///
    /// A value is read as the integer `n` when `val >= 0`, at least
    /// `min_digits` digits are known and `|n|^2 <= p^A`.
    pub fn small_integer(&self, min_digits: i64) -> Option<i64> {
        let a = self.abs_precision()?;
        if a < min_digits {
            return None;
        }
        match &self.repr {
            Repr::Zero { .. } => Some(0),
            Repr::Nonzero { val, .. } if *val < 0 => None,
            Repr::Nonzero { .. } => {
                let (n, _) = self.balanced();
                let bound = self.ctx.p_pow(a.max(0) as u32);
                let sq = n.magnitude() * n.magnitude();
                if sq <= bound {
                    n.to_i64()
                } else {
                    None
                }
            }
        }
    }

    pub fn parse(ctx: &Arc<PadicContext>, s: &str) -> Result<Padic> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a p-adic number: {s:?}"));
        let (body, cap) = match s.rfind("O(") {
            Some(i) => {
                let tail = s[i..].trim();
                let inner = tail
                    .strip_prefix("O(")
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let (base, exp) = inner.split_once('^').ok_or_else(bad)?;
                let base: u64 = base.trim().parse().map_err(|_| bad())?;
                if base != ctx.p() {
                    return Err(Error::Parse(format!(
                        "precision term O({base}^..) does not match p = {}",
                        ctx.p()
                    )));
                }
                let exp: i64 = exp.trim().parse().map_err(|_| bad())?;
                let head = s[..i].trim_end();
                let head = match head.strip_suffix('+') {
                    Some(h) => h.trim_end(),
                    None if head.is_empty() => head,
                    None => return Err(bad()),
                };
                (head, Some(exp))
            }
            None => (s, None),
        };
        let value = if body.is_empty() {
            match cap {
                Some(a) => return Ok(Padic::zero_at(ctx, a)),
                None => return Err(bad()),
            }
        } else if let Some((num, den)) = body.split_once('/') {
            let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            Padic::from_rational(ctx, &num, &den)?
        } else {
            Padic::from_bigint(ctx, &BigInt::from_str(body).map_err(|_| bad())?)
        };
        Ok(match cap {
            Some(a) => value.with_abs_cap(a),
            None => value,
        })
    }

    fn binary_add(&self, other: &Padic) -> Padic {
        assert!(self.ctx.same_field(&other.ctx), "p-adic context mismatch");
        let abs = match (self.abs_precision(), other.abs_precision()) {
            (Some(a), Some(b)) => Some(min(a, b)),
            (a, b) => a.or(b),
        };
        match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => {
                Padic { ctx: self.ctx.clone(), repr: Repr::Zero { abs } }
            }
            (Repr::Zero { .. }, Repr::Nonzero { val, unit, .. })
            | (Repr::Nonzero { val, unit, .. }, Repr::Zero { .. }) => {
                Padic::normalize(&self.ctx, *val, unit.clone(), abs)
            }
            (
                Repr::Nonzero { val: v1, unit: u1, .. },
                Repr::Nonzero { val: v2, unit: u2, .. },
            ) => {
                let v = min(*v1, *v2);
                let a = abs.expect("nonzero values carry a precision");
                let width = (a - v) as u32;
                let shifted = |vi: i64, ui: &BigUint| -> BigUint {
                    let s = vi - v;
                    if s >= a - v {
                        BigUint::zero()
                    } else if s == 0 {
                        ui.clone()
                    } else {
                        ui * self.ctx.p_pow(s as u32)
                    }
                };
                let modulus = self.ctx.p_pow(width);
                let sum = (shifted(*v1, u1) + shifted(*v2, u2)).mod_floor(&modulus);
                Padic::normalize(&self.ctx, v, sum, Some(a))
            }
        }
    }

    fn binary_mul(&self, other: &Padic) -> Padic {
        assert!(self.ctx.same_field(&other.ctx), "p-adic context mismatch");
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero { abs: None }, _) | (_, Repr::Zero { abs: None }) => {
                Repr::Zero { abs: None }
            }
            (Repr::Zero { abs: Some(a) }, Repr::Zero { abs: Some(b) }) => {
                Repr::Zero { abs: Some(a + b) }
            }
            (Repr::Zero { abs: Some(a) }, Repr::Nonzero { val, .. })
            | (Repr::Nonzero { val, .. }, Repr::Zero { abs: Some(a) }) => {
                Repr::Zero { abs: Some(a + val) }
            }
            (
                Repr::Nonzero { val: v1, unit: u1, rel: r1 },
                Repr::Nonzero { val: v2, unit: u2, rel: r2 },
            ) => {
                let rel = min(*r1, *r2);
                let unit = (u1 * u2).mod_floor(self.ctx.p_pow_ref(rel));
                Repr::Nonzero { val: v1 + v2, unit, rel }
            }
        };
        Padic { ctx: self.ctx.clone(), repr }
    }

    fn negate(&self) -> Padic {
        let repr = match &self.repr {
            Repr::Zero { abs } => Repr::Zero { abs: *abs },
            Repr::Nonzero { val, unit, rel } => {
                let modulus = self.ctx.p_pow_ref(*rel);
                Repr::Nonzero { val: *val, unit: (modulus - unit).mod_floor(modulus), rel: *rel }
            }
        };
        Padic { ctx: self.ctx.clone(), repr }
    }

    /// Largest valuation guaranteed for `self - other`.
    pub fn distance_valuation(&self, other: &Padic) -> Valuation {
        let d = self - other;
        match d.valuation() {
            Valuation::Infinity => match d.abs_precision() {
                Some(a) => Valuation::Finite(a),
                None => Valuation::Infinity,
            },
            v => v,
        }
    }

    /// A lower bound for the true valuation: `A` for `O(p^A)`.
    pub fn valuation_floor(&self) -> Valuation {
        match &self.repr {
            Repr::Zero { abs: None } => Valuation::Infinity,
            Repr::Zero { abs: Some(a) } => Valuation::Finite(*a),
            Repr::Nonzero { val, .. } => Valuation::Finite(*val),
        }
    }
}

impl PartialEq for Padic {
    fn eq(&self, other: &Padic) -> bool {
        self.ctx.same_field(&other.ctx) && self.repr == other.repr
    }
}

impl Eq for Padic {}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&Padic> for &Padic {
            type Output = Padic;
            fn $method(self, rhs: &Padic) -> Padic {
                self.$imp(rhs)
            }
        }
        impl $tr<Padic> for Padic {
            type Output = Padic;
            fn $method(self, rhs: Padic) -> Padic {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Padic> for Padic {
            type Output = Padic;
            fn $method(self, rhs: &Padic) -> Padic {
                (&self).$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, binary_add);
forward_binop!(Mul, mul, binary_mul);

impl Sub<&Padic> for &Padic {
    type Output = Padic;
    fn sub(self, rhs: &Padic) -> Padic {
        self.binary_add(&rhs.negate())
    }
}

impl Sub<Padic> for Padic {
    type Output = Padic;
    fn sub(self, rhs: Padic) -> Padic {
        &self - &rhs
    }
}

impl Sub<&Padic> for Padic {
    type Output = Padic;
    fn sub(self, rhs: &Padic) -> Padic {
        &self - rhs
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.negate()
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.negate()
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ctx.p();
        match &self.repr {
            Repr::Zero { abs: None } => write!(f, "0"),
            Repr::Zero { abs: Some(a) } => write!(f, "O({p}^{a})"),
            Repr::Nonzero { rel, .. } => {
                let (n, e) = self.balanced();
                if e == 0 {
                    write!(f, "{n}")?;
                } else {
                    write!(f, "{n}/{}", self.ctx.p_pow(e))?;
                }
                if *rel < self.ctx.precision() {
                    write!(f, " + O({p}^{})", self.abs_precision().unwrap_or_default())?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [p={}]", self.ctx.p())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<PadicContext> {
        PadicContext::new(5, 10, 8).unwrap()
    }

    #[test]
    fn add_and_mul_track_precision() {
        let c = ctx();
        let a = Padic::from_i64(&c, 5).with_abs_cap(3);
        let b = Padic::from_i64(&c, 20);
        let s = &a + &b;
        assert_eq!(s.valuation(), Valuation::Finite(2));
        assert_eq!(s.abs_precision(), Some(3));
        let prod = &a * &b;
        assert_eq!(prod.valuation(), Valuation::Finite(2));
        assert_eq!(prod.rel_precision(), Some(2));
    }

    #[test]
    fn cancellation_leaves_zero_at_precision() {
        let c = ctx();
        let a = Padic::from_i64(&c, 7).with_abs_cap(4);
        let b = Padic::from_i64(&c, 7 + 625);
        let d = &a - &b;
        assert!(d.is_zero());
        assert_eq!(d.abs_precision(), Some(4));
        assert!(Padic::from_i64(&c, 3).agrees_with(&Padic::from_i64(&c, 3)));
    }

    #[test]
    fn exact_zero_is_neutral() {
        let c = ctx();
        let x = Padic::from_i64(&c, -12);
        assert_eq!(&x + &Padic::zero(&c), x);
        assert!((&x * &Padic::zero(&c)).is_exact_zero());
    }

    #[test]
    fn inexact_zero_absorbs_precision() {
        let c = ctx();
        let z = Padic::zero_at(&c, 3);
        let x = Padic::from_i64(&c, 25);
        assert_eq!((&z * &x).abs_precision(), Some(5));
        assert_eq!((&z + &x).abs_precision(), Some(3));
        assert_eq!((&z + &x).valuation(), Valuation::Finite(2));
    }

    #[test]
    fn negative_valuations() {
        let c = ctx();
        let x = Padic::from_rational(&c, &BigInt::from(3), &BigInt::from(25)).unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(-2));
        assert_eq!(x.to_string(), "3/25");
        let y = &x * &Padic::from_i64(&c, 25);
        assert_eq!(y, Padic::from_i64(&c, 3));
    }

    #[test]
    fn pow_and_inverse() {
        let c = ctx();
        let x = Padic::from_i64(&c, 6);
        assert_eq!(x.pow(3).unwrap(), Padic::from_i64(&c, 216));
        let xi = x.pow(-2).unwrap();
        assert_eq!(&xi * &Padic::from_i64(&c, 36), Padic::one(&c));
        assert!(Padic::zero(&c).pow(-1).is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let c = ctx();
        for s in ["0", "-1", "17", "3/25", "O(5^4)", "7 + O(5^3)", "-2/5 + O(5^2)"] {
            let x = Padic::parse(&c, s).unwrap();
            assert_eq!(x.to_string(), s, "{s}");
            assert_eq!(Padic::parse(&c, &x.to_string()).unwrap(), x);
        }
        assert!(Padic::parse(&c, "1 + O(7^3)").is_err());
        assert!(Padic::parse(&c, "x").is_err());
        assert!(Padic::parse(&c, "").is_err());
    }

    #[test]
    fn residues_and_small_integers() {
        let c = ctx();
        let x = Padic::from_i64(&c, -1);
        assert_eq!(x.residue_u64(2).unwrap(), 24);
        assert_eq!(Padic::from_i64(&c, 50).residue_u64(1).unwrap(), 0);
        assert_eq!(x.small_integer(4), Some(-1));
        let third = Padic::from_rational(&c, &BigInt::from(1), &BigInt::from(3)).unwrap();
        assert_eq!(third.small_integer(4), None);
        assert!(Padic::from_i64(&c, 7).with_abs_cap(1).residue_u64(2).is_err());
    }

    #[test]
    fn agreement_is_three_valued() {
        let c = ctx();
        let a = Padic::from_i64(&c, 1);
        let b = Padic::from_i64(&c, 1 + 125);
        assert_eq!(a.agreement(&b, 3), Verdict::Holds);
        assert_eq!(a.agreement(&b, 4), Verdict::Fails);
        let fuzzy = a.with_abs_cap(2);
        assert_eq!(fuzzy.agreement(&a, 2), Verdict::Holds);
        assert_eq!(fuzzy.agreement(&a, 3), Verdict::Indeterminate);
    }
}
