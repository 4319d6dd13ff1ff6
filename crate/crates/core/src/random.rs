//! Seeded samplers for test instances.
//!
//! Every sampler draws only from the generator it is given, so a fixed seed
//! reproduces the same instances.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use crate::functions::{Leaf, PiecewiseFunction};
use crate::galois::ContinuousCharacter;
use crate::group::{GroupLevel, IwahoriElement};
use crate::padic::{Padic, PadicContext};
use crate::tate::TateSeries;
use crate::valuation::Valuation;
use crate::verdict::Verdict;

/// Uniform residue modulo `p^digits`.
fn residue<R: Rng + ?Sized>(rng: &mut R, ctx: &PadicContext, digits: u32) -> BigUint {
    let p = ctx.p();
    let mut n = BigUint::default();
    for _ in 0..digits {
        n = n * p + rng.gen_range(0..p);
    }
    n
}

/// A unit known to full relative precision.
pub fn unit<R: Rng + ?Sized>(rng: &mut R, ctx: &Arc<PadicContext>) -> Padic {
    let p = ctx.p();
    let low = rng.gen_range(1..p);
    let high = residue(rng, ctx, ctx.precision() - 1);
    Padic::from_bigint(ctx, &(high * p + low).into())
}

/// `p^v u` with `v` uniform in `[min_val, max_val]` and `u` a unit.
pub fn with_valuation<R: Rng + ?Sized>(rng: &mut R, ctx: &Arc<PadicContext>, min_val: i64, max_val: i64) -> Padic {
    let v = rng.gen_range(min_val..=max_val);
    &Padic::p_power(ctx, v) * &unit(rng, ctx)
}

/// An element of `p^min_val Z_p`, zero one time in `zero_odds`.
pub fn integer<R: Rng + ?Sized>(rng: &mut R, ctx: &Arc<PadicContext>, min_val: i64, zero_odds: u32) -> Padic {
    if zero_odds > 0 && rng.gen_ratio(1, zero_odds) {
        return Padic::zero(ctx);
    }
    with_valuation(rng, ctx, min_val, min_val + 3)
}

/// A series at level `m` with integral coefficients up to `degree` and,
/// half of the time, a finite tail bound above its stored valuation.
pub fn certified_series<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: &Arc<PadicContext>,
    m: u32,
    degree: usize,
) -> TateSeries {
    let coeffs = (0..=degree).map(|_| integer(rng, ctx, 0, 4)).collect();
    let f = TateSeries::new(ctx, m, coeffs, Valuation::Infinity).expect("sampled coefficients share the context");
    if rng.gen_bool(0.5) {
        let floor = f.val_c().finite().unwrap_or(0);
        f.with_tail(Valuation::Finite(floor + rng.gen_range(1..8)))
    } else {
        f
    }
}

/// A level-0 polynomial with `val(a_l) >= l`, so substitutions of every
/// generator keep it exact to full precision.
pub fn steep_polynomial<R: Rng + ?Sized>(rng: &mut R, ctx: &Arc<PadicContext>, degree: usize) -> TateSeries {
    let coeffs = (0..=degree).map(|l| integer(rng, ctx, l as i64, 5)).collect();
    TateSeries::new(ctx, 0, coeffs, Valuation::Infinity).expect("sampled coefficients share the context")
}

/// A polynomial with small integer coefficients.
pub fn small_polynomial<R: Rng + ?Sized>(rng: &mut R, ctx: &Arc<PadicContext>, level: u32, degree: usize) -> TateSeries {
    let coeffs: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-30..=30)).collect();
    TateSeries::from_integers(ctx, level, &coeffs).expect("integers fit the context")
}

/// A random element of the requested subgroup.
pub fn group_element<R: Rng + ?Sized>(rng: &mut R, ctx: &Arc<PadicContext>, level: GroupLevel) -> IwahoriElement {
    let one = Padic::one(ctx);
    let (lo_ad, lo_b, lo_c) = match level {
        GroupLevel::ProP => (1, 1, 0),
        GroupLevel::Congruence(m) => (i64::from(m), i64::from(m), i64::from(m)),
    };
    let a = &one + &integer(rng, ctx, lo_ad, 4);
    let d = &one + &integer(rng, ctx, lo_ad, 4);
    let b = integer(rng, ctx, lo_b, 4);
    let c = integer(rng, ctx, lo_c, 4);
    IwahoriElement::new(a, b, c, d, level).expect("sampled entries satisfy the congruences")
}

/// A character with `delta(p)` of valuation in `[-3, 3]`.
pub fn character<R: Rng + ?Sized>(rng: &mut R, ctx: &Arc<PadicContext>) -> ContinuousCharacter {
    let value = with_valuation(rng, ctx, -3, 3);
    let tame = rng.gen_range(0..ctx.p() as i64 - 1);
    let wild = &Padic::one(ctx) + &with_valuation(rng, ctx, 1, 3);
    ContinuousCharacter::new(value, tame, wild).expect("sampled values are valid")
}

/// How a membership instance is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipKind {
    /// The leaf through 0 already contains `p^m Z_p`.
    CoarseGerm,
    /// A global polynomial cut into pieces finer than `p^m Z_p`.
    Glued,
    /// A glued polynomial with one piece inside the ball perturbed.
    Broken,
    /// A glued polynomial with one piece inside the ball carrying a finite tail.
    Open,
}

impl MembershipKind {
    pub const ALL: [MembershipKind; 4] =
        [MembershipKind::CoarseGerm, MembershipKind::Glued, MembershipKind::Broken, MembershipKind::Open];

    pub fn expected(self) -> Verdict {
        match self {
            MembershipKind::CoarseGerm | MembershipKind::Glued => Verdict::Holds,
            MembershipKind::Broken => Verdict::Fails,
            MembershipKind::Open => Verdict::Indeterminate,
        }
    }
}

/// A locally polynomial function together with its expected membership in
/// the `G(m)`-analytic vectors.
pub fn membership_instance<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: &Arc<PadicContext>,
    m: u32,
    kind: MembershipKind,
) -> PiecewiseFunction {
    let p = ctx.p();
    let degree = rng.gen_range(0..4);
    if kind == MembershipKind::CoarseGerm {
        let h = rng.gen_range(0..=m);
        let pieces = vec![Leaf { center: 0, level: h, series: small_polynomial(rng, ctx, h, degree) }];
        return PiecewiseFunction::complete(ctx, pieces, |_, h| TateSeries::zero(ctx, h))
            .expect("one coset and its complement");
    }
    let global = small_polynomial(rng, ctx, 0, degree);
    let h = m + 1;
    let glued = PiecewiseFunction::global(global)
        .and_then(|f| f.refine(h))
        .expect("refinement of a global polynomial");
    if kind == MembershipKind::Glued {
        return glued;
    }
    let target = rng.gen_range(0..p) * p.pow(m);
    let e = rng.gen_range(0..3);
    let leaves = glued
        .leaves()
        .iter()
        .map(|l| {
            if l.center != target {
                return l.clone();
            }
            let series = match kind {
                MembershipKind::Broken => {
                    let bump = TateSeries::constant(ctx, l.level, Padic::p_power(ctx, e));
                    l.series.add(&bump).expect("same level")
                }
                _ => l.series.with_tail(Valuation::Finite(ctx.precision() as i64 / 2)),
            };
            Leaf { series, ..l.clone() }
        })
        .collect();
    PiecewiseFunction::new(ctx, leaves).expect("same partition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_are_reproducible() {
        let ctx = PadicContext::new(5, 20, 10).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (certified_series(&mut rng, &ctx, 2, 6), group_element(&mut rng, &ctx, GroupLevel::ProP))
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn samples_satisfy_their_constraints() {
        let ctx = PadicContext::new(5, 20, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(group_element(&mut rng, &ctx, GroupLevel::Congruence(2)).lies_in(GroupLevel::Congruence(2)));
            let u = unit(&mut rng, &ctx);
            assert!(u.is_unit() && u.rel_precision() == Some(20));
            let f = steep_polynomial(&mut rng, &ctx, 5);
            assert!(f.coeffs().iter().enumerate().all(|(l, a)| a.valuation() >= l as i64));
        }
    }

    #[test]
    fn membership_kinds_have_expected_verdicts() {
        let ctx = PadicContext::new(5, 20, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in MembershipKind::ALL {
            for m in 1..=2 {
                let f = membership_instance(&mut rng, &ctx, m, kind);
                assert_eq!(f.is_member_can(m).unwrap().verdict, kind.expected(), "{kind:?} m={m}");
            }
        }
    }
}
