//! Random generators for elements of `ZR`, of its augmentation ideal and of
//! its powers. Used by the self-test, the benches and the test suites.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use crate::monoid::MonoidElement;
use crate::perfect::AlgebraContext;

/// Up to `max_terms` brackets of random elements with coefficients in
/// `-bound..=bound`.
pub fn monoid_element<R: Rng + ?Sized>(
    ctx: &Arc<AlgebraContext>,
    rng: &mut R,
    max_terms: usize,
    bound: i64,
) -> MonoidElement {
    let n = rng.gen_range(0..=max_terms);
    MonoidElement::from_terms(
        ctx,
        (0..n).map(|_| {
            (
                ctx.random_element(rng),
                BigInt::from(rng.gen_range(-bound..=bound)),
            )
        }),
    )
}

/// A random additive generator of `I`: `[r] + [s] - [r+s]` or `p[r]`.
pub fn ideal_generator<R: Rng + ?Sized>(ctx: &Arc<AlgebraContext>, rng: &mut R) -> MonoidElement {
    let r = ctx.random_element(rng);
    if rng.gen_bool(0.25) {
        return MonoidElement::bracket(ctx, r).scale(&BigInt::from(ctx.characteristic()));
    }
    let s = ctx.random_element(rng);
    let sum = ctx.add(&r, &s);
    &(&MonoidElement::bracket(ctx, r) + &MonoidElement::bracket(ctx, s))
        - &MonoidElement::bracket(ctx, sum)
}

/// A random element of `I^n`: a short sum of `n`-fold products of
/// generators, each multiplied by a random element of `ZR`.
pub fn ideal_power_element<R: Rng + ?Sized>(
    ctx: &Arc<AlgebraContext>,
    rng: &mut R,
    n: u32,
) -> MonoidElement {
    let mut acc = MonoidElement::zero(ctx);
    for _ in 0..rng.gen_range(1..=2) {
        let mut prod = monoid_element(ctx, rng, 2, 3);
        if prod.is_zero() {
            prod = MonoidElement::one(ctx);
        }
        for _ in 0..n {
            prod = &prod * &ideal_generator(ctx, rng);
        }
        acc = &acc + &prod;
    }
    acc
}

/// `sum n_m [m]` over random basis monomials of a perfect closure.
pub fn monomial_combination<R: Rng + ?Sized>(
    ctx: &Arc<AlgebraContext>,
    rng: &mut R,
    max_terms: usize,
    bound: i64,
) -> MonoidElement {
    let n = rng.gen_range(0..=max_terms);
    MonoidElement::from_terms(
        ctx,
        (0..n).map(|_| {
            let m = ctx.random_monomial(rng).expect("perfect closure");
            (ctx.monomial(m), BigInt::from(rng.gen_range(-bound..=bound)))
        }),
    )
}
