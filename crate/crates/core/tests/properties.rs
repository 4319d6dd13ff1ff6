use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigan_core::analytic::{
    cokernel_equal, is_analytic_vector, verify_bounds, CokernelElement, CokernelParams, OrbitExpansion, OrbitFamily,
};
use rigan_core::functions::{LocallyAlgebraicFunction, PiecewiseFunction, StepFunction};
use rigan_core::galois::{validate_crystalline, ContinuousCharacter, Filtration};
use rigan_core::group::{
    act, act_cell, act_locally_algebraic, act_smooth, GroupLevel, InductionCharacter, IwahoriElement, Side,
    WeylCellVector,
};
use rigan_core::random::{self, MembershipKind};
use rigan_core::{Padic, PadicContext, TateSeries, Valuation, Verdict};

fn ctx() -> Arc<PadicContext> {
    static CTX: OnceLock<Arc<PadicContext>> = OnceLock::new();
    CTX.get_or_init(|| PadicContext::new(5, 30, 24).unwrap()).clone()
}

/// Degree bound above the precision, so truncated substitutions stay exact.
fn wide_ctx() -> Arc<PadicContext> {
    static CTX: OnceLock<Arc<PadicContext>> = OnceLock::new();
    CTX.get_or_init(|| PadicContext::new(5, 16, 24).unwrap()).clone()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weight_only(k: u32) -> InductionCharacter {
    InductionCharacter::weight_only(k, Side::Alpha).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_additive(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let c = ctx();
        let (x, y) = (Padic::from_i64(&c, a), Padic::from_i64(&c, b));
        if a != 0 && b != 0 {
            prop_assert_eq!((&x * &y).valuation(), x.valuation() + y.valuation());
        }
        let (vx, vy) = (x.valuation(), y.valuation());
        let s = (&x + &y).valuation();
        prop_assert!(s >= vx.min(vy));
        if vx != vy {
            prop_assert_eq!(s, vx.min(vy));
        }
    }

    #[test]
    fn inverse_is_an_involution(seed: u64) {
        let c = ctx();
        let x = random::with_valuation(&mut rng(seed), &c, -3, 3);
        prop_assert!(x.inverse().unwrap().inverse().unwrap().agrees_with(&x));
    }

    #[test]
    fn log_is_a_homomorphism(seed: u64) {
        let c = ctx();
        let mut r = rng(seed);
        let one = Padic::one(&c);
        let u = &one + &random::with_valuation(&mut r, &c, 1, 4);
        let v = &one + &random::with_valuation(&mut r, &c, 1, 4);
        let defect = &(&(&u * &v).log().unwrap() - &u.log().unwrap()) - &v.log().unwrap();
        prop_assert!(defect.valuation() >= c.working_precision());
    }

    #[test]
    fn series_ops_are_isometries(seed: u64, m in 1u32..=3) {
        let c = ctx();
        let mut r = rng(seed);
        let f = random::certified_series(&mut r, &c, m, 8);
        let one = Padic::one(&c);
        let y = random::integer(&mut r, &c, i64::from(m), 4);
        let s = &one + &random::integer(&mut r, &c, i64::from(m), 4);
        let x = random::integer(&mut r, &c, i64::from(m), 4);
        let k = r.gen_range(2..6);
        prop_assert_eq!(f.translate(&y).unwrap().val_c(), f.val_c());
        prop_assert_eq!(f.dilate(&s).unwrap().val_c(), f.val_c());
        prop_assert_eq!(f.inv_torus(&s, k).unwrap().val_c(), f.val_c());
        prop_assert_eq!(f.mobius_twist(&x, k).unwrap().val_c(), f.val_c());
    }

    #[test]
    fn substitution_matches_evaluation(seed: u64, m in 1u32..=3) {
        let c = ctx();
        let mut r = rng(seed);
        let f = random::small_polynomial(&mut r, &c, m, 5);
        let z = random::integer(&mut r, &c, i64::from(m), 6);
        let y = random::integer(&mut r, &c, i64::from(m), 6);
        prop_assert!(f.translate(&y).unwrap().evaluate(&z).unwrap().agrees_with(&f.evaluate(&(&z - &y)).unwrap()));
        let a = random::integer(&mut r, &c, i64::from(m), 6);
        let g = f.recenter(&a, m + 1).unwrap();
        let z2 = random::integer(&mut r, &c, i64::from(m) + 1, 6);
        prop_assert!(g.evaluate(&z2).unwrap().agrees_with(&f.evaluate(&(&a + &z2)).unwrap()));
    }

    #[test]
    fn gauss_valuation_is_subadditive(seed: u64, m in 0u32..=3) {
        let c = ctx();
        let mut r = rng(seed);
        let f = random::certified_series(&mut r, &c, m, 6);
        let g = random::certified_series(&mut r, &c, m, 6);
        prop_assert!(f.mul(&g).unwrap().val_c() >= f.val_c() + g.val_c());
        prop_assert!(f.add(&g).unwrap().val_c() >= f.val_c().min(g.val_c()));
    }

    #[test]
    fn refinement_keeps_values(seed: u64, h in 1u32..=2) {
        let c = ctx();
        let mut r = rng(seed);
        let f = PiecewiseFunction::global(random::small_polynomial(&mut r, &c, 0, 4)).unwrap();
        let g = f.refine(h).unwrap();
        prop_assert_eq!(g.leaves().len() as u64, c.p().pow(h));
        for _ in 0..10 {
            let z = random::integer(&mut r, &c, 0, 0);
            prop_assert!(g.evaluate(&z).unwrap().agrees_with(&f.evaluate(&z).unwrap()));
        }
    }

    #[test]
    fn membership_is_monotone(seed: u64, m in 1u32..=2) {
        let c = ctx();
        let mut r = rng(seed);
        let kind = MembershipKind::ALL[r.gen_range(0..4)];
        let f = random::membership_instance(&mut r, &c, m, kind);
        let here = is_analytic_vector(&f, m).unwrap();
        prop_assert!(here.agree());
        prop_assert_eq!(here.reexpansion, kind.expected());
        if here.reexpansion.holds() {
            prop_assert!(is_analytic_vector(&f, m + 1).unwrap().reexpansion.holds());
        }
        if f.is_member_pi_an(m, 6).unwrap().holds() {
            prop_assert!(f.is_member_can(m).unwrap().verdict.holds());
        }
    }

    #[test]
    fn mahler_coefficients_reconstruct(seed: u64) {
        let c = ctx();
        let mut r = rng(seed);
        let f = PiecewiseFunction::uniform(&c, 1, |_| random::small_polynomial(&mut r, &c, 1, 2)).unwrap();
        let count = 12;
        let coeffs = f.mahler_coefficients(count).unwrap();
        for j in 0..count {
            let sum = coeffs.iter().enumerate().fold(Padic::zero(&c), |acc, (n, cn)| &acc + &(cn * &c.binomial(j, n)));
            prop_assert!(sum.agrees_with(&f.evaluate(&Padic::from_u64(&c, j as u64)).unwrap()));
        }
    }

    #[test]
    fn action_is_associative(seed: u64) {
        let c = wide_ctx();
        let mut r = rng(seed);
        let g = random::group_element(&mut r, &c, GroupLevel::ProP);
        let h = random::group_element(&mut r, &c, GroupLevel::ProP);
        let k = r.gen_range(2..5);
        let chi = weight_only(k);
        let f = random::steep_polynomial(&mut r, &c, 6);
        let lhs = act(&g.mul(&h).unwrap(), &f, &chi).unwrap();
        let rhs = act(&g, &act(&h, &f, &chi).unwrap(), &chi).unwrap();
        prop_assert_eq!(lhs.agrees_at_working_precision(&rhs).unwrap(), Verdict::Holds);

        let pw = PiecewiseFunction::uniform(&c, 1, |_| random::small_polynomial(&mut r, &c, 1, (k - 2) as usize)).unwrap();
        let la = LocallyAlgebraicFunction::new(pw.clone(), k).unwrap();
        let lhs = act_locally_algebraic(&g.mul(&h).unwrap(), &la, &chi).unwrap();
        let rhs = act_locally_algebraic(&g, &act_locally_algebraic(&h, &la, &chi).unwrap(), &chi).unwrap();
        prop_assert!(lhs.inner().sub(rhs.inner()).unwrap().is_zero().holds());
        prop_assert!(lhs.inner().max_degree().unwrap_or(0) <= (k - 2) as usize);

        let step = StepFunction::new(PiecewiseFunction::uniform(&c, 2, |a| TateSeries::constant(&c, 2, Padic::from_u64(&c, a % 7))).unwrap()).unwrap();
        let lhs = act_smooth(&g.mul(&h).unwrap(), &step).unwrap();
        let rhs = act_smooth(&g, &act_smooth(&h, &step).unwrap()).unwrap();
        prop_assert!(lhs.inner().sub(rhs.inner()).unwrap().is_zero().holds());
    }

    #[test]
    fn cell_action_is_associative(seed: u64) {
        let c = ctx();
        let mut r = rng(seed);
        let mut elt = || {
            let one = Padic::one(&c);
            let a = &one + &random::integer(&mut r, &c, 1, 4);
            let d = &one + &random::integer(&mut r, &c, 1, 4);
            let b = random::integer(&mut r, &c, 1, 4);
            let cc = random::integer(&mut r, &c, 1, 4);
            IwahoriElement::new(a, b, cc, d, GroupLevel::ProP).unwrap()
        };
        let (g, h) = (elt(), elt());
        let chi = weight_only(3);
        let make = |r: &mut ChaCha8Rng| PiecewiseFunction::uniform(&c, 1, |_| random::small_polynomial(r, &c, 1, 1)).unwrap();
        let f = WeylCellVector::new(make(&mut rng(seed ^ 1)), make(&mut rng(seed ^ 2))).unwrap();
        let lhs = act_cell(&g.mul(&h).unwrap(), &f, &chi).unwrap();
        let rhs = act_cell(&g, &act_cell(&h, &f, &chi).unwrap(), &chi).unwrap();
        let d = lhs.sub(&rhs).unwrap();
        prop_assert!(d.identity.is_zero().and(d.w0.is_zero()).holds());
    }

    #[test]
    fn level_and_isometry_under_congruence_subgroups(seed: u64, m in 1u32..=3) {
        let c = ctx();
        let mut r = rng(seed);
        let g = random::group_element(&mut r, &c, GroupLevel::Congruence(m));
        let f = random::certified_series(&mut r, &c, m, 8);
        let out = act(&g, &f, &weight_only(r.gen_range(2..6))).unwrap();
        prop_assert_eq!(out.level(), m);
        prop_assert_eq!(out.val_c(), f.val_c());
    }

    #[test]
    fn factorization_reassembles(seed: u64) {
        let c = ctx();
        let g = random::group_element(&mut rng(seed), &c, GroupLevel::ProP);
        let fz = g.factorize().unwrap();
        let lower = IwahoriElement::lower(fz.y, GroupLevel::ProP).unwrap();
        let torus = IwahoriElement::torus(fz.s, fz.t, GroupLevel::ProP).unwrap();
        let upper = IwahoriElement::upper(fz.x, GroupLevel::ProP).unwrap();
        prop_assert!(lower.mul(&torus).unwrap().mul(&upper).unwrap().agrees_with(&g));
    }

    #[test]
    fn orbit_bounds_and_growth(seed: u64, m in 1u32..=3) {
        let c = ctx();
        let mut r = rng(seed);
        let f = random::certified_series(&mut r, &c, m, 10);
        let report = verify_bounds(&f).unwrap();
        prop_assert!(report.min_margin().is_none_or(|x| x >= 0));
        let floor = f.val_c_stored().min(f.tail_bound());
        for family in OrbitFamily::ALL {
            let e = OrbitExpansion::new(&f, family);
            prop_assert!(e.growth().iter().all(|g| *g >= floor));
            let target = floor.finite().unwrap_or(0) + 5;
            let v0 = e.growth_index(target);
            prop_assert!(e.growth()[v0..].iter().all(|g| *g >= target));
        }
    }

    #[test]
    fn orbit_reconstruction(seed: u64, m in 1u32..=2) {
        let c = ctx();
        let mut r = rng(seed);
        let f = random::small_polynomial(&mut r, &c, m, 4);
        let z = random::integer(&mut r, &c, i64::from(m), 6);
        let y = random::integer(&mut r, &c, i64::from(m), 6);
        let e = OrbitExpansion::new(&f, OrbitFamily::Translation);
        prop_assert!(e.reconstruct(&y, &z).unwrap().agrees_with(&f.evaluate(&(&z - &y)).unwrap()));
        let e = OrbitExpansion::new(&f, OrbitFamily::Dilation);
        let s = &Padic::one(&c) + &y;
        prop_assert!(e.reconstruct(&y, &z).unwrap().agrees_with(&f.evaluate(&(&s * &z)).unwrap()));
        let e = OrbitExpansion::new(&f, OrbitFamily::InvTorus);
        prop_assert!(e.reconstruct(&y, &z).unwrap().agrees_with(&f.evaluate(&z.checked_div(&s).unwrap()).unwrap()));
        let e = OrbitExpansion::new(&f, OrbitFamily::Mobius);
        let w = z.checked_div(&(&Padic::one(&c) - &(&y * &z))).unwrap();
        prop_assert!(e.reconstruct(&y, &z).unwrap().agrees_with(&f.evaluate(&w).unwrap()));
    }

    #[test]
    fn cokernel_classes(seed: u64) {
        let c = ctx();
        let mut r = rng(seed);
        let params = CokernelParams::new(3, 1, Some(2), None).unwrap();
        let pw = |r: &mut ChaCha8Rng, deg| PiecewiseFunction::uniform(&c, 1, |_| random::small_polynomial(r, &c, 1, deg)).unwrap();
        let base_a = WeylCellVector::new(pw(&mut r, 0), pw(&mut r, 0)).unwrap();
        let base_b = WeylCellVector::new(pw(&mut r, 1), pw(&mut r, 1)).unwrap();
        let c1 = CokernelElement::new(base_a.clone(), base_b.clone(), params.clone()).unwrap();
        prop_assert_eq!(cokernel_equal(&c1, &c1).unwrap(), Verdict::Holds);

        let glued = WeylCellVector::new(
            PiecewiseFunction::global(random::small_polynomial(&mut r, &c, 0, 1)).unwrap(),
            PiecewiseFunction::global(random::small_polynomial(&mut r, &c, 0, 1)).unwrap(),
        ).unwrap();
        let c2 = CokernelElement::new(base_a.clone(), base_b.add(&glued).unwrap(), params.clone()).unwrap();
        prop_assert_eq!(cokernel_equal(&c1, &c2).unwrap(), Verdict::Holds);
        prop_assert_eq!(cokernel_equal(&c2, &c1).unwrap(), Verdict::Holds);

        let quadratic = WeylCellVector::new(
            PiecewiseFunction::global(TateSeries::from_integers(&c, 0, &[0, 0, 1]).unwrap()).unwrap(),
            WeylCellVector::zero(&c).w0,
        ).unwrap();
        let c3 = CokernelElement::new(base_a, base_b.add(&quadratic).unwrap(), params).unwrap();
        prop_assert_eq!(cokernel_equal(&c1, &c3).unwrap(), Verdict::Fails);
        prop_assert_eq!(cokernel_equal(&c2, &c3).unwrap(), Verdict::Fails);
    }

    #[test]
    fn weight_is_additive(seed: u64) {
        let c = ctx();
        let mut r = rng(seed);
        let (d1, d2) = (random::character(&mut r, &c), random::character(&mut r, &c));
        let lhs = d1.mul(&d2).weight().unwrap();
        let rhs = &d1.weight().unwrap() + &d2.weight().unwrap();
        prop_assert!((&lhs - &rhs).valuation() >= c.working_precision() - 2);
    }

    #[test]
    fn crystalline_valuations_sum(k in 3u32..8, split in 1i64..6) {
        let c = ctx();
        let vb = split.min(i64::from(k - 1) / 2).max(1);
        let va = i64::from(k) - 1 - vb;
        let alpha = &Padic::p_power(&c, va) * &Padic::from_i64(&c, 2);
        let beta = &Padic::p_power(&c, vb) * &Padic::from_i64(&c, 3);
        let param = validate_crystalline(alpha, beta, k).unwrap();
        prop_assert_eq!(param.alpha().valuation() + param.beta().valuation().finite().unwrap(), Valuation::Finite(i64::from(k) - 1));
        let fil = Filtration::new(k).unwrap();
        let dims: Vec<u8> = (-(k as i64)..=1).map(|i| fil.dimension(i)).collect();
        prop_assert!(dims.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn special_characters_have_expected_weights() {
    let c = ctx();
    assert!(ContinuousCharacter::x(&c).weight().unwrap().agrees_with(&Padic::one(&c)));
    assert!(ContinuousCharacter::abs_x(&c).weight().unwrap().is_zero());
    let prod = ContinuousCharacter::x(&c).mul(&ContinuousCharacter::abs_x(&c));
    assert!(prod.value_at_p().agrees_with(&Padic::one(&c)));
}
