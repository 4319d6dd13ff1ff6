use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::{strip_p, Padic};
use crate::error::{Error, Result};

pub const DEFAULT_P: u64 = 5;
pub const DEFAULT_PRECISION: u32 = 40;
pub const DEFAULT_DEGREE: usize = 64;
pub const DEFAULT_SLACK: u32 = 4;

/// Prime, precision `N`, truncation degree `D` and comparison slack `kappa`.
pub struct PadicContext {
    p: u64,
    precision: u32,
    degree: usize,
    slack: u32,
    p_big: BigUint,
    powers: Vec<BigUint>,
    binomials: OnceLock<Vec<Vec<(i64, BigUint)>>>,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32, degree: usize) -> Result<Arc<Self>> {
        Self::with_slack(p, precision, degree, DEFAULT_SLACK.min(precision.saturating_sub(1)))
    }

    pub fn with_slack(p: u64, precision: u32, degree: usize, slack: u32) -> Result<Arc<Self>> {
        if p <= 2 || !is_prime(p) {
            return Err(Error::Context(format!("p = {p} must be an odd prime")));
        }
        if precision == 0 {
            return Err(Error::Context("precision N must be at least 1".into()));
        }
        if slack >= precision {
            return Err(Error::Context(format!(
                "slack {slack} must be smaller than the precision {precision}"
            )));
        }
        let p_big = BigUint::from(p);
        let mut powers = Vec::with_capacity(precision as usize + 1);
        let mut acc = BigUint::one();
        for _ in 0..=precision {
            powers.push(acc.clone());
            acc *= &p_big;
        }
        Ok(Arc::new(PadicContext {
            p,
            precision,
            degree,
            slack,
            p_big,
            powers,
            binomials: OnceLock::new(),
        }))
    }

    pub fn default_context() -> Arc<Self> {
        Self::new(DEFAULT_P, DEFAULT_PRECISION, DEFAULT_DEGREE).expect("default context is valid")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Relative precision cap `N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Series truncation degree `D`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Comparison slack `kappa`.
    pub fn slack(&self) -> u32 {
        self.slack
    }

    /// `N - kappa`, the relative precision at which results are compared.
    pub fn working_precision(&self) -> i64 {
        i64::from(self.precision) - i64::from(self.slack)
    }

    pub(crate) fn p_big(&self) -> &BigUint {
        &self.p_big
    }

    /// `p^e`, from the table when `e <= N`.
    pub fn p_pow(&self, e: u32) -> BigUint {
        match self.powers.get(e as usize) {
            Some(x) => x.clone(),
            None => self.p_big.pow(e),
        }
    }

    pub(crate) fn p_pow_ref(&self, e: u32) -> &BigUint {
        &self.powers[e as usize]
    }

    /// `p^e` as a `u64`, if it fits.
    pub fn p_pow_u64(&self, e: u32) -> Option<u64> {
        self.p.checked_pow(e)
    }

    pub fn same_field(&self, other: &PadicContext) -> bool {
        self.p == other.p && self.precision == other.precision
    }

    pub fn same_as(&self, other: &PadicContext) -> bool {
        self.same_field(other) && self.degree == other.degree
    }

    /// Exact `C(n, k)` reduced into this context; zero when `k > n`.
    pub fn binomial(self: &Arc<Self>, n: usize, k: usize) -> Padic {
        if k > n {
            return Padic::zero(self);
        }
        let table = self.binomial_table();
        if let Some((v, u)) = table.get(n).and_then(|row| row.get(k)) {
            return Padic::from_unit_parts(self, *v, u.clone(), self.precision);
        }
        let mut acc = BigUint::one();
        for i in 0..k {
            acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        }
        let v = strip_p(&self.p_big, &mut acc);
        let u = acc.mod_floor(&self.powers[self.precision as usize]);
        Padic::from_unit_parts(self, i64::from(v), u, self.precision)
    }

    fn binomial_table(&self) -> &Vec<Vec<(i64, BigUint)>> {
        self.binomials.get_or_init(|| {
            let rows = 2 * self.degree + 3;
            let modulus = &self.powers[self.precision as usize];
            let mut exact: Vec<BigUint> = vec![BigUint::one()];
            let mut table = Vec::with_capacity(rows);
            for _ in 0..rows {
                let row = exact
                    .iter()
                    .map(|c| {
                        let mut c = c.clone();
                        let v = strip_p(&self.p_big, &mut c);
                        (i64::from(v), c.mod_floor(modulus))
                    })
                    .collect();
                table.push(row);
                let mut next = Vec::with_capacity(exact.len() + 1);
                next.push(BigUint::one());
                for w in exact.windows(2) {
                    next.push(&w[0] + &w[1]);
                }
                next.push(BigUint::one());
                exact = next;
            }
            table
        })
    }
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &PadicContext) -> bool {
        self.same_as(other) && self.slack == other.slack
    }
}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PadicContext")
            .field("p", &self.p)
            .field("N", &self.precision)
            .field("D", &self.degree)
            .field("kappa", &self.slack)
            .finish()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_primes_and_precision() {
        assert!(PadicContext::new(2, 10, 4).is_err());
        assert!(PadicContext::new(9, 10, 4).is_err());
        assert!(PadicContext::new(5, 0, 4).is_err());
        assert!(PadicContext::with_slack(5, 4, 4, 4).is_err());
        assert!(PadicContext::new(3, 1, 0).is_ok());
    }

    #[test]
    fn defaults() {
        let c = PadicContext::default_context();
        assert_eq!((c.p(), c.precision(), c.degree(), c.slack()), (5, 40, 64, 4));
        assert_eq!(c.working_precision(), 36);
    }

    #[test]
    fn binomial_table_and_fallback_agree() {
        let c = PadicContext::new(3, 20, 4).unwrap();
        // Row 11 is the last tabulated row for D = 4; row 30 uses the fallback.
        assert_eq!(c.binomial(11, 4), Padic::from_i64(&c, 330));
        assert_eq!(c.binomial(30, 3), Padic::from_i64(&c, 4060));
        assert!(c.binomial(2, 3).is_zero());
    }
}
