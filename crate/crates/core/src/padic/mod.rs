//! Capped-relative arithmetic in `Q_p`.
//!
//! A nonzero [`Padic`] is `p^v * u` with `u` a unit known modulo `p^r`,
//! `1 <= r <= N`. Every operation propagates the absolute precision `v + r`
//! honestly, so a result never claims digits its inputs did not determine.
//! A value whose known digits all vanish is a zero "at precision" `O(p^A)`;
//! its valuation is reported as `+inf`.

mod context;
mod number;

pub use context::{PadicContext, DEFAULT_DEGREE, DEFAULT_P, DEFAULT_PRECISION, DEFAULT_SLACK};
pub use number::Padic;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::valuation::Valuation;

/// `val_p(n)` of a positive integer.
pub fn val_u64(p: u64, mut n: u64) -> u32 {
    debug_assert!(n > 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub(crate) fn strip_p(p: &BigUint, n: &mut BigUint) -> u32 {
    let mut v = 0;
    while !n.is_zero() {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            break;
        }
        *n = q;
        v += 1;
    }
    v
}

impl Padic {
    /// The p-adic logarithm on `1 + pZ_p`.
    ///
    /// Terms are summed until `n * v - floor(log_p n)` reaches the absolute
    /// precision of `u - 1`; the division by `n` shifts the valuation and
    /// inverts the unit part of `n` exactly.
    pub fn log(&self) -> Result<Padic> {
        let ctx = self.context().clone();
        let w = self - &Padic::one(&ctx);
        let v1 = match w.valuation() {
            Valuation::Infinity => return Ok(w),
            Valuation::Finite(v) => v,
        };
        if v1 < 1 {
            return Err(Error::Domain(format!(
                "log needs an argument congruent to 1 mod p, got valuation {v1} for u - 1"
            )));
        }
        let target = match w.abs_precision() {
            Some(a) => a,
            None => i64::from(ctx.precision()) + v1,
        };
        let p = ctx.p();
        let mut sum = Padic::zero(&ctx);
        let mut power = w.clone();
        let mut n: u64 = 1;
        loop {
            if (n as i64) * v1 - floor_log(p, n) >= target {
                break;
            }
            let term = power.div_exact_integer(n)?;
            if n % 2 == 1 {
                sum = &sum + &term;
            } else {
                sum = &sum - &term;
            }
            power = &power * &w;
            n += 1;
        }
        Ok(sum.with_abs_cap(target))
    }
}

fn floor_log(p: u64, n: u64) -> i64 {
    let mut k = 0;
    let mut q = n;
    while q >= p {
        q /= p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn ctx(p: u64, n: u32) -> Arc<PadicContext> {
        PadicContext::new(p, n, 16).unwrap()
    }

    /// Kummer: val_p(C(n, k)) is the number of carries adding k and n - k in base p.
    fn kummer(p: u64, n: u64, k: u64) -> u32 {
        let (mut a, mut b, mut carry, mut count) = (k, n - k, 0, 0);
        while a > 0 || b > 0 || carry > 0 {
            let s = a % p + b % p + carry;
            carry = u64::from(s >= p);
            count += carry as u32;
            a /= p;
            b /= p;
        }
        count
    }

    #[test]
    fn valuation_examples() {
        let c = ctx(5, 10);
        assert_eq!(Padic::from_i64(&c, 5).valuation(), Valuation::Finite(1));
        assert_eq!(Padic::one(&c).valuation(), Valuation::Finite(0));
        assert_eq!(Padic::from_i64(&c, 50).valuation(), Valuation::Finite(2));
        assert_eq!(Padic::zero(&c).valuation(), Valuation::Infinity);
    }

    #[test]
    fn binomial_examples_and_kummer() {
        let c = ctx(5, 10);
        assert_eq!(c.binomial(4, 2), Padic::from_i64(&c, 6));
        assert!(c.binomial(3, 5).is_zero());
        // Kummer's oracle gives one carry for 5 + 20 in base 5.
        assert_eq!(kummer(5, 25, 5), 1);
        assert_eq!(c.binomial(25, 5).valuation(), Valuation::Finite(1));
        for n in 0..60u64 {
            for k in 0..=n {
                assert_eq!(
                    c.binomial(n as usize, k as usize).valuation(),
                    Valuation::Finite(i64::from(kummer(5, n, k))),
                    "C({n},{k})"
                );
            }
        }
    }

    #[test]
    fn log_of_one_is_zero() {
        let c = ctx(5, 6);
        assert!(Padic::one(&c).log().unwrap().is_zero());
    }

    #[test]
    fn log_rejects_non_principal_units() {
        let c = ctx(5, 6);
        assert!(matches!(Padic::from_i64(&c, 2).log(), Err(Error::Domain(_))));
        assert!(matches!(Padic::from_i64(&c, 5).log(), Err(Error::Domain(_))));
    }

    #[test]
    fn log_one_plus_p_matches_partial_sums() {
        // Oracle: exact rational partial sums of sum (-1)^(n+1) p^n / n, reduced
        // at the end; terms with n - val_p(n) >= N + 1 do not affect the
        // residue mod p^6.
        let c = ctx(5, 6);
        let got = Padic::from_i64(&c, 6).log().unwrap();
        let mut num = num_bigint::BigInt::from(0);
        let mut den = num_bigint::BigInt::from(1);
        for n in 1..=12i64 {
            let t_num = num_bigint::BigInt::from(5).pow(n as u32) * if n % 2 == 1 { 1 } else { -1 };
            let t_den = num_bigint::BigInt::from(n);
            num = &num * &t_den + &t_num * &den;
            den = &den * &t_den;
        }
        let oracle = Padic::from_bigint(&c, &num)
            .checked_div(&Padic::from_bigint(&c, &den))
            .unwrap();
        assert_eq!(got.valuation(), Valuation::Finite(1));
        assert!(got.agrees_with(&oracle));
        assert_eq!(got.abs_precision(), Some(6));
    }

    #[test]
    fn log_is_a_homomorphism() {
        let c = ctx(7, 30);
        let u = Padic::from_i64(&c, 1 + 7 * 3);
        let v = Padic::from_i64(&c, 1 - 49 * 5);
        let lhs = (&u * &v).log().unwrap();
        let rhs = &u.log().unwrap() + &v.log().unwrap();
        assert!(lhs.agrees_with(&rhs));
        let sq = (&u * &u).log().unwrap();
        assert!(sq.agrees_with(&(&u.log().unwrap() * &Padic::from_i64(&c, 2))));
    }

    #[test]
    fn inversion_examples() {
        let c = ctx(5, 2);
        assert_eq!(Padic::one(&c).inverse().unwrap(), Padic::one(&c));
        let inv6 = Padic::from_i64(&c, 6).inverse().unwrap();
        assert_eq!(inv6, Padic::from_i64(&c, 21));
        let inv_p = Padic::from_i64(&c, 5).inverse().unwrap();
        assert_eq!(inv_p.valuation(), Valuation::Finite(-1));
        assert!(matches!(Padic::zero(&c).inverse(), Err(Error::DivisionByZero)));
    }
}
