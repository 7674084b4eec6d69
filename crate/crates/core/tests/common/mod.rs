//! Property suites shared by the `properties` and `acceptance` targets.
//!
//! Each suite runs a deterministic proptest runner and returns the failure
//! message, if any.

#![allow(dead_code)]

use std::collections::BTreeMap;

use fillcurve::binform::random_sl2;
use fillcurve::curve::is_smooth;
use fillcurve::field::enumerate_field;
use fillcurve::{canonical_field, random_gq, BinForm, Fel, FieldCtx, UPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn outcome<T: std::fmt::Debug>(
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn order(ctx: &FieldCtx) -> u64 {
    ctx.order_u64().unwrap()
}

/// `F_(q^2)` over the canonical `F_q`, via the first irreducible monic quadratic.
pub fn quadratic_extension(q: u64) -> FieldCtx {
    let base = canonical_field(q).unwrap();
    let elems = enumerate_field(&base);
    for b in &elems {
        for a in &elems {
            let m = UPoly::from_coeffs(&base, &[b.clone(), a.clone(), Fel::one(&base)]).unwrap();
            if m.is_irreducible().unwrap() {
                return FieldCtx::extension(&base, &m).unwrap();
            }
        }
    }
    unreachable!()
}

fn elem(ctx: &FieldCtx) -> impl Strategy<Value = Fel> {
    let ctx = ctx.clone();
    (0..order(&ctx)).prop_map(move |i| Fel::from_index(&ctx, i))
}

fn poly(ctx: &FieldCtx, max_deg: usize) -> impl Strategy<Value = UPoly> {
    let ctx = ctx.clone();
    let n = order(&ctx);
    proptest::collection::vec(0..n, 1..=max_deg + 1).prop_map(move |ix| {
        let c: Vec<Fel> = ix.iter().map(|&i| Fel::from_index(&ctx, i)).collect();
        UPoly::from_coeffs(&ctx, &c).unwrap()
    })
}

pub fn field_axioms(ctx: &FieldCtx, cases: u32) -> Result<(), String> {
    let s = (elem(ctx), elem(ctx), elem(ctx));
    outcome(runner(cases).run(&s, |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        Ok(())
    }))
}

/// `x -> x^s` is additive and multiplicative for `s` the characteristic and
/// for `s = q` when `ctx` is a tower over `F_q`.
pub fn frobenius_homomorphism(ctx: &FieldCtx, q: u64, cases: u32) -> Result<(), String> {
    let p = ctx.characteristic();
    let s = (elem(ctx), elem(ctx));
    outcome(runner(cases).run(&s, |(a, b)| {
        for base in [p, q] {
            let fr = |x: &Fel| x.frobenius(base, 1);
            prop_assert_eq!(fr(&(&a + &b)), &fr(&a) + &fr(&b));
            prop_assert_eq!(fr(&(&a * &b)), &fr(&a) * &fr(&b));
        }
        prop_assert_eq!(a.frobenius(q, 0), a.clone());
        Ok(())
    }))
}

pub fn minimal_polynomials(ctx: &FieldCtx, q: u64, cases: u32) -> Result<(), String> {
    let n = ctx.degree_over(q).unwrap();
    outcome(runner(cases).run(&elem(ctx), |a| {
        let m = a.minimal_polynomial(q).unwrap();
        prop_assert!(m.eval(&a).unwrap().is_zero());
        prop_assert!(m.is_monic());
        prop_assert!(m.is_irreducible().unwrap());
        prop_assert_eq!(n % m.degree().unwrap(), 0);
        Ok(())
    }))
}

fn merge(fs: &[(UPoly, usize)], into: &mut BTreeMap<String, usize>) {
    for (h, m) in fs {
        *into.entry(h.to_string()).or_default() += m;
    }
}

pub fn factor_round_trip(ctx: &FieldCtx, cases: u32) -> Result<(), String> {
    let s = (poly(ctx, 12), any::<u64>());
    outcome(runner(cases).run(&s, |(f, seed)| {
        let Some(deg) = f.degree() else { return Ok(()) };
        if deg == 0 {
            return Ok(());
        }
        let fact = f.factor(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(fact.expand(), f.clone());
        let mut total = 0;
        for (h, m) in &fact.factors {
            prop_assert!(h.is_monic());
            prop_assert!(h.is_irreducible().unwrap());
            total += h.degree().unwrap() * m;
        }
        prop_assert_eq!(total, deg);
        Ok(())
    }))
}

pub fn factor_is_multiplicative(ctx: &FieldCtx, cases: u32) -> Result<(), String> {
    let s = (poly(ctx, 6), poly(ctx, 6));
    outcome(runner(cases).run(&s, |(f, g)| {
        if f.degree().unwrap_or(0) == 0 || g.degree().unwrap_or(0) == 0 {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut lhs = BTreeMap::new();
        merge(&(&f * &g).factor(&mut rng).unwrap().factors, &mut lhs);
        let mut rhs = BTreeMap::new();
        merge(&f.factor(&mut rng).unwrap().factors, &mut rhs);
        merge(&g.factor(&mut rng).unwrap().factors, &mut rhs);
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

pub fn gcd_divides(ctx: &FieldCtx, cases: u32) -> Result<(), String> {
    let s = (poly(ctx, 8), poly(ctx, 8), poly(ctx, 4));
    outcome(runner(cases).run(&s, |(a, b, c)| {
        let (a, b) = (&a * &c, &b * &c);
        if a.is_zero() && b.is_zero() {
            return Ok(());
        }
        let g = a.monic_gcd(&b).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(a.divmod(&g).unwrap().1.is_zero());
        prop_assert!(b.divmod(&g).unwrap().1.is_zero());
        if !c.is_zero() {
            prop_assert!(g.divmod(&c.monic()).unwrap().1.is_zero());
        }
        Ok(())
    }))
}

pub fn derivative_rules(ctx: &FieldCtx, cases: u32) -> Result<(), String> {
    let s = (poly(ctx, 8), poly(ctx, 8));
    outcome(runner(cases).run(&s, |(a, b)| {
        prop_assert_eq!((&a + &b).derivative(), &a.derivative() + &b.derivative());
        prop_assert_eq!(
            (&a * &b).derivative(),
            &(&a.derivative() * &b) + &(&a * &b.derivative())
        );
        Ok(())
    }))
}

fn seeded_form(ctx: &FieldCtx, seed: u64) -> BinForm {
    random_gq(ctx, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `X0 f_X0 + X1 f_X1 = d f` on random forms of degree `d = q + 1` and on
/// arbitrary coefficient vectors of other degrees.
pub fn euler_identity(ctx: &FieldCtx, cases: u32) -> Result<(), String> {
    let n = order(ctx);
    let s = (any::<u64>(), proptest::collection::vec(0..n, 2..9));
    outcome(runner(cases).run(&s, |(seed, ix)| {
        let general = BinForm::new(
            ctx,
            &ix.iter()
                .map(|&i| Fel::from_index(ctx, i))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        for f in [seeded_form(ctx, seed), general] {
            let d = f.degree();
            let lhs = f
                .partial(0)
                .mul_monomial(1, 0)
                .try_add(&f.partial(1).mul_monomial(0, 1))
                .unwrap();
            prop_assert_eq!(lhs, f.scale(&Fel::from_int(ctx, d as i64)));
        }
        Ok(())
    }))
}

pub fn homogeneity(q: u64, cases: u32) -> Result<(), String> {
    let ctx = canonical_field(q).unwrap();
    let ext = quadratic_extension(q);
    let s = (any::<u64>(), elem(&ext), elem(&ext), elem(&ext));
    outcome(runner(cases).run(&s, |(seed, x0, x1, l)| {
        if l.is_zero() {
            return Ok(());
        }
        let f = seeded_form(&ctx, seed);
        let lhs = f.eval(&(&l * &x0), &(&l * &x1)).unwrap();
        let rhs = &l.pow(f.degree() as u64) * &f.eval(&x0, &x1).unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

pub fn sl2_preserves_gq(q: u64, cases: u32) -> Result<(), String> {
    let ctx = canonical_field(q).unwrap();
    outcome(runner(cases).run(&any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_gq(&ctx, &mut rng);
        let a = random_sl2(&ctx, &mut rng);
        prop_assert!(!f.act(&a).unwrap().has_rational_point().unwrap());
        Ok(())
    }))
}

/// `C_{f,g}` and `C_{Af,Bg}` are smooth together.
pub fn verdict_invariance(q: u64, cases: u32) -> Result<(), String> {
    let ctx = canonical_field(q).unwrap();
    outcome(runner(cases).run(&any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_gq(&ctx, &mut rng);
        let g = random_gq(&ctx, &mut rng);
        let a = random_sl2(&ctx, &mut rng);
        let b = random_sl2(&ctx, &mut rng);
        let before = is_smooth(&f, &g).unwrap();
        let after = is_smooth(&f.act(&a).unwrap(), &g.act(&b).unwrap()).unwrap();
        prop_assert_eq!(before, after);
        Ok(())
    }))
}

/// Fields used by the polynomial suites.
pub fn test_fields() -> Vec<FieldCtx> {
    [2, 3, 4, 5, 9]
        .iter()
        .map(|&q| canonical_field(q).unwrap())
        .collect()
}
