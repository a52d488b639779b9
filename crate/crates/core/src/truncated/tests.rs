use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::sample;

fn ctx(spec: &str) -> Arc<AlgebraContext> {
    Arc::new(AlgebraContext::parse_spec(spec).unwrap())
}

fn zr(ctx: &Arc<AlgebraContext>, src: &str) -> MonoidElement {
    MonoidElement::parse(ctx, src).unwrap()
}

fn el(ctx: &Arc<AlgebraContext>, lit: &str) -> PerfectElement {
    ctx.parse_element(lit).unwrap()
}

fn int(k: i64) -> BigInt {
    BigInt::from(k)
}

#[test]
fn reduce_examples() {
    for spec in ["gf(2)", "gf(4)", "perfect(2;t)"] {
        let c = ctx(spec);
        for n in 0..4 {
            assert!(Truncated::reduce(&zr(&c, "[0]"), n).is_zero());
        }
    }
    let f4 = ctx("gf(4)");
    let x = Truncated::reduce(&zr(&f4, "[g+1]"), 2);
    assert_eq!(x.to_string(), "3*[1] + 3*[g] (mod I^2)");
    assert_eq!(x.coefficient(&BasisIndex::Power(0)), int(3));

    let cl = ctx("perfect(2;t)");
    let y = Truncated::reduce(&zr(&cl, "[1+t]"), 2);
    let expected =
        Truncated::from_monomial_combination(&zr(&cl, "[1] + [t] + 2*[t^(1/2)]"), 2).unwrap();
    assert_eq!(y, expected);
    assert_eq!(y.to_string(), "[1] + 2*[t^(1/2)] + [t] (mod I^2)");

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for c in [ctx("gf(4)"), ctx("gf(9)"), cl] {
        for n in 0..4 {
            let x = sample::monoid_element(&c, &mut rng, 4, 5);
            let px = x.scale(&p_power(c.characteristic(), n));
            assert!(Truncated::reduce(&px, n).is_zero());
            // reduce is idempotent on canonical lifts
            let r = Truncated::reduce(&x, n);
            assert_eq!(Truncated::reduce(&r.lift(), n), r);
        }
    }
}

#[test]
fn divide_by_p_examples() {
    let f4 = ctx("gf(4)");
    for r in f4.elements().unwrap() {
        for n in 1..4 {
            let z = MonoidElement::bracket(&f4, r.clone()).scale(&int(2));
            let a = Truncated::divide_by_p(&z, n).unwrap();
            assert_eq!(a, Truncated::teichmuller(&f4, r.clone(), n - 1));
        }
    }
    let z = zr(&f4, "[g+1] - [1] - [g]");
    assert_eq!(z.delta(), zr(&f4, "-[g]"));
    let a = Truncated::divide_by_p(&z, 2).unwrap();
    assert_eq!(a, Truncated::reduce(&zr(&f4, "[1] + [g]"), 1));
    assert!(Truncated::divide_by_p(&z, 1).unwrap().is_zero());
    assert_eq!(
        Truncated::divide_by_p(&zr(&f4, "[g]"), 2),
        Err(Error::NotDivisible)
    );
    assert!(matches!(
        Truncated::divide_by_p(&z, 0),
        Err(Error::InvalidPrecision(_))
    ));
}

#[test]
fn arithmetic_examples() {
    let f2 = ctx("gf(2)");
    let three = Truncated::from_int(&f2, 3, 2);
    assert_eq!(&three * &three, Truncated::one(&f2, 2));

    let f4 = ctx("gf(4)");
    let x = Truncated::reduce(&zr(&f4, "[1] + [g]"), 2);
    assert_eq!(&x + &Truncated::zero(&f4, 2), x);
    assert_eq!(&x + &x, x.scale(&int(2)));
    assert_eq!(
        x.try_add(&Truncated::zero(&f4, 3)),
        Err(Error::PrecisionMismatch { left: 2, right: 3 })
    );
    assert_eq!(
        x.try_mul(&Truncated::zero(&f2, 2)),
        Err(Error::ContextMismatch)
    );
}

#[test]
fn truncation_to_zero_precision_is_total() {
    let f4 = ctx("gf(4)");
    let x = Truncated::reduce(&zr(&f4, "3*[g] + [1]"), 0);
    assert!(x.is_zero());
    assert_eq!(x.to_string(), "0 (mod I^0)");
    assert!(x.teichmuller_expand().is_empty());
    assert_eq!(x.invert().unwrap(), x);
    assert_eq!(x.valuation().unwrap(), Valuation::AtLeast(0));
    assert_eq!(&x * &x, x);
    assert!(x.verschiebung().is_zero());
}

#[test]
fn lowering_precision_commutes_with_reduce() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for c in [ctx("gf(4)"), ctx("gf(3)"), ctx("perfect(2;t)")] {
        for _ in 0..20 {
            let x = sample::monoid_element(&c, &mut rng, 4, 9);
            let r3 = Truncated::reduce(&x, 3);
            for m in 0..=3 {
                assert_eq!(r3.lower_precision(m).unwrap(), Truncated::reduce(&x, m));
            }
            assert!(r3.lower_precision(4).is_err());
        }
    }
}

#[test]
fn teichmuller_examples() {
    let f4 = ctx("gf(4)");
    let p3 = Truncated::from_int(&f4, 2, 3);
    assert_eq!(
        p3.teichmuller_expand(),
        vec![f4.zero(), f4.one(), f4.zero()]
    );
    assert_eq!(
        Truncated::from_digits(&f4, &[f4.zero(), f4.one(), f4.zero()]),
        p3
    );

    let x = Truncated::reduce(&zr(&f4, "[1] + [g]"), 2);
    assert_eq!(x.teichmuller_expand(), vec![el(&f4, "g+1"), el(&f4, "g+1")]);

    for r in f4.elements().unwrap() {
        for n in 1..4 {
            let mut digits = vec![f4.zero(); n as usize];
            digits[0] = r.clone();
            let t = Truncated::teichmuller(&f4, r.clone(), n);
            assert_eq!(t.teichmuller_expand(), digits);
            assert_eq!(Truncated::from_digits(&f4, &digits), t);
        }
    }
}

#[test]
fn teichmuller_round_trip_exhaustive_f2() {
    let f2 = ctx("gf(2)");
    for n in 0..=4u32 {
        let mut seen = std::collections::BTreeSet::new();
        for k in 0..(1i64 << n) {
            let x = Truncated::from_int(&f2, k, n);
            let digits = x.teichmuller_expand();
            assert_eq!(Truncated::from_digits(&f2, &digits), x);
            // binary digits of k
            let bits: Vec<u64> = (0..n).map(|i| ((k >> i) & 1) as u64).collect();
            let got: Vec<u64> = digits
                .iter()
                .map(|d| f2.element_index(d).unwrap())
                .collect();
            assert_eq!(got, bits);
            seen.insert(got);
        }
        assert_eq!(seen.len(), 1 << n);
    }
}

#[test]
fn valuation_matches_first_nonzero_digit() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f4 = ctx("gf(4)");
    for _ in 0..60 {
        let shift = rng.gen_range(0..4);
        let x = sample::monoid_element(&f4, &mut rng, 4, 9).scale(&p_power(2, shift));
        let t = Truncated::reduce(&x, 4);
        let first = t.teichmuller_expand().iter().position(|d| !f4.is_zero(d));
        let expected = match first {
            Some(i) => Valuation::Finite(i as u32),
            None => Valuation::AtLeast(4),
        };
        assert_eq!(t.valuation().unwrap(), expected);
    }
}

#[test]
fn frobenius_and_verschiebung() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for c in [ctx("gf(4)"), ctx("gf(9)"), ctx("perfect(3;t)")] {
        let p = BigInt::from(c.characteristic());
        for n in 1..4 {
            let r = c.random_element(&mut rng);
            let t = Truncated::teichmuller(&c, r.clone(), n);
            assert_eq!(
                t.frobenius(),
                Truncated::teichmuller(&c, c.frobenius(&r), n)
            );
            assert_eq!(
                Truncated::one(&c, n).verschiebung(),
                Truncated::from_int(&c, p.clone(), n)
            );

            let x = Truncated::reduce(&sample::monoid_element(&c, &mut rng, 3, 5), n);
            let y = Truncated::reduce(&sample::monoid_element(&c, &mut rng, 3, 5), n);
            assert_eq!(x.verschiebung().frobenius(), x.scale(&p));
            assert_eq!(x.frobenius().verschiebung(), x.scale(&p));
            assert_eq!(x.frobenius().frobenius_inv(), x);
            assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
            assert_eq!(
                (&x + &y).verschiebung(),
                &x.verschiebung() + &y.verschiebung()
            );
        }
    }
}

#[test]
fn invert_examples() {
    let f4 = ctx("gf(4)");
    let g = Truncated::reduce(&zr(&f4, "[g]"), 2);
    assert_eq!(g.invert().unwrap(), Truncated::reduce(&zr(&f4, "[g^2]"), 2));
    let u = Truncated::reduce(&zr(&f4, "1 + 2*[g]"), 2);
    assert_eq!(
        u.invert().unwrap(),
        Truncated::reduce(&zr(&f4, "1 - 2*[g]"), 2)
    );
    for n in 1..4 {
        assert_eq!(
            Truncated::from_int(&f4, 2, n).invert(),
            Err(Error::NotInvertible)
        );
    }
    let cl = ctx("perfect(2;t)");
    assert_eq!(
        Truncated::reduce(&zr(&cl, "[t]"), 2).invert(),
        Err(Error::NotInvertible)
    );
    let v = Truncated::reduce(&zr(&cl, "1 + 2*[t]"), 3);
    assert_eq!(&v * &v.invert().unwrap(), Truncated::one(&cl, 3));
}

#[test]
fn valuation_examples() {
    let f4 = ctx("gf(4)");
    for n in 1..4 {
        assert_eq!(
            Truncated::reduce(&zr(&f4, "[g]"), n).valuation().unwrap(),
            Valuation::Finite(0)
        );
        assert_eq!(
            Truncated::zero(&f4, n).valuation().unwrap(),
            Valuation::AtLeast(n)
        );
    }
    let x = Truncated::reduce(&zr(&f4, "4*[1] + 2*[g]"), 3);
    assert_eq!(x.valuation().unwrap(), Valuation::Finite(1));
    let f2 = ctx("gf(2)");
    assert_eq!(
        Truncated::from_int(&f2, 4, 3)
            .valuation()
            .unwrap()
            .to_string(),
        "2"
    );
    let cl = ctx("perfect(2;t)");
    assert_eq!(Truncated::one(&cl, 2).valuation(), Err(Error::NotAField));
}

#[test]
fn induced_maps() {
    let f2 = ctx("gf(2)");
    let f4 = ctx("gf(4)");
    let inc = RingHom::find_embedding(f2.clone(), f4.clone()).unwrap();
    let three = Truncated::from_int(&f2, 3, 2);
    assert_eq!(
        three.induced_map(&inc).unwrap(),
        Truncated::from_int(&f4, 3, 2)
    );

    let id = RingHom::identity(f4.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let x = Truncated::reduce(&sample::monoid_element(&f4, &mut rng, 4, 7), 3);
        assert_eq!(x.induced_map(&id).unwrap(), x);
    }

    let images: std::collections::BTreeSet<String> = (0..16)
        .map(|k| {
            Truncated::from_int(&f2, k, 4)
                .induced_map(&inc)
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(images.len(), 16);

    // F_4 -> F_16 is a ring homomorphism on truncations
    let f16 = ctx("gf(16)");
    let emb = RingHom::find_embedding(f4.clone(), f16).unwrap();
    for _ in 0..10 {
        let x = Truncated::reduce(&sample::monoid_element(&f4, &mut rng, 3, 7), 3);
        let y = Truncated::reduce(&sample::monoid_element(&f4, &mut rng, 3, 7), 3);
        let hx = x.induced_map(&emb).unwrap();
        let hy = y.induced_map(&emb).unwrap();
        assert_eq!((&x * &y).induced_map(&emb).unwrap(), &hx * &hy);
        assert_eq!((&x + &y).induced_map(&emb).unwrap(), &hx + &hy);
    }
    assert_eq!(three.induced_map(&id), Err(Error::ContextMismatch));
}

#[test]
fn strictness() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for c in [ctx("gf(4)"), ctx("gf(3)")] {
        let p = BigInt::from(c.characteristic());
        for _ in 0..40 {
            let x = if rng.gen_bool(0.5) {
                sample::monoid_element(&c, &mut rng, 4, 9)
            } else {
                sample::ideal_power_element(&c, &mut rng, 2)
            };
            let px = x.scale(&p);
            if Truncated::reduce(&px, 3).is_zero() {
                assert!(Truncated::reduce(&x, 2).is_zero());
            }
            assert_eq!(
                Truncated::divide_by_p(&px, 3).unwrap(),
                Truncated::reduce(&x, 2)
            );
            let z = sample::ideal_power_element(&c, &mut rng, 1);
            assert!(Truncated::divide_by_p(&z, 3).is_ok());
        }
    }
}

#[test]
fn ideal_powers_split_into_deeper_power_plus_p_power_multiple() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for c in [ctx("gf(4)"), ctx("gf(3)")] {
        for n in 1..=2u32 {
            let pn = p_power(c.characteristic(), n);
            for _ in 0..15 {
                let x = sample::ideal_power_element(&c, &mut rng, n);
                assert!(Truncated::reduce(&x, n).is_zero());
                let canon = Truncated::reduce(&x, n + 1);
                let mut w = Vec::new();
                for (b, coeff) in canon.coefficients() {
                    assert!(
                        (coeff % &pn).is_zero(),
                        "coefficient {coeff} of an I^{n} element"
                    );
                    w.push((c.basis_element(b), coeff / &pn));
                }
                let w = MonoidElement::from_terms(&c, w);
                let y = &x - &w.scale(&pn);
                assert!(Truncated::reduce(&y, n + 1).is_zero());
            }
        }
    }
}

#[test]
fn graded_pieces_are_copies_of_r() {
    let f4 = ctx("gf(4)");
    let elems = f4.elements().unwrap();
    for n in 0..=2u32 {
        let pn = p_power(2, n);
        let graded = |r: &PerfectElement| {
            Truncated::reduce(&MonoidElement::bracket(&f4, r.clone()).scale(&pn), n + 1)
        };
        for r in &elems {
            for s in &elems {
                let rel = &(&MonoidElement::bracket(&f4, r.clone())
                    + &MonoidElement::bracket(&f4, s.clone()))
                    - &MonoidElement::bracket(&f4, f4.add(r, s));
                assert!(Truncated::reduce(&rel.scale(&pn), n + 1).is_zero());
                if r != s {
                    assert_ne!(graded(r), graded(s));
                }
            }
        }
    }
}

/// `L^{p^{n-1}} = [r] mod I^n` for any `L` with `pi(L) = r^{p^{-(n-1)}}`.
fn teichmuller_limit(c: &Arc<AlgebraContext>, r: &PerfectElement, n: u32) -> MonoidElement {
    let root = c.pth_root_iter(r, n - 1);
    let lift = MonoidElement::from_terms(
        c,
        c.decompose(&root)
            .into_iter()
            .map(|(b, k)| (c.basis_element(&b), BigInt::from(k))),
    );
    lift.pow(c.characteristic().pow(n - 1) as u32)
}

#[test]
fn teichmuller_limit_oracle() {
    let f8 = ctx("gf(8)");
    for r in f8.elements().unwrap() {
        for n in 1..=3 {
            let lim = teichmuller_limit(&f8, &r, n);
            assert_eq!(
                Truncated::reduce(&lim, n),
                Truncated::teichmuller(&f8, r.clone(), n)
            );
        }
    }
    let cl = ctx("perfect(2;t)");
    for lit in ["t", "1+t", "t+t^2"] {
        let r = el(&cl, lit);
        let lim = teichmuller_limit(&cl, &r, 2);
        let fast = Truncated::from_monomial_combination(&lim, 2).unwrap();
        assert_eq!(Truncated::teichmuller(&cl, r, 2), fast);
    }
}

#[test]
fn monomial_fast_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let cl = ctx("perfect(2;t,u)");
    for _ in 0..25 {
        let x = sample::monomial_combination(&cl, &mut rng, 4, 20);
        let y = sample::monomial_combination(&cl, &mut rng, 3, 20);
        let fx = Truncated::from_monomial_combination(&x, 3).unwrap();
        assert_eq!(Truncated::reduce(&x, 3), fx);
        let fy = Truncated::from_monomial_combination(&y, 3).unwrap();
        assert_eq!(Truncated::reduce(&(&x * &y), 3), &fx * &fy);
    }
    assert!(Truncated::from_monomial_combination(&zr(&cl, "[1+t]"), 2).is_err());
    assert!(Truncated::from_monomial_combination(&zr(&ctx("gf(4)"), "[g]"), 2).is_err());
}

#[test]
fn dvr_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let f4 = ctx("gf(4)");
    let n = 4;
    let sample_with_valuation = |rng: &mut ChaCha8Rng| {
        let v = rng.gen_range(0..3);
        let unit = &sample::monoid_element(&f4, rng, 3, 7) * &MonoidElement::from_int(&f4, 2);
        let x = &MonoidElement::bracket(&f4, el(&f4, "g")) + &unit;
        Truncated::reduce(&x.scale(&p_power(2, v)), n)
    };
    for _ in 0..40 {
        let x = sample_with_valuation(&mut rng);
        let y = sample_with_valuation(&mut rng);
        let (Valuation::Finite(vx), Valuation::Finite(vy)) =
            (x.valuation().unwrap(), y.valuation().unwrap())
        else {
            panic!("constructed elements are nonzero");
        };
        if vx + vy < n {
            assert_eq!((&x * &y).valuation().unwrap(), Valuation::Finite(vx + vy));
        }
        match (&x + &y).valuation().unwrap() {
            Valuation::Finite(v) => assert!(v >= vx.min(vy)),
            Valuation::AtLeast(_) => {}
        }
        assert_eq!(x.invert().is_ok(), vx == 0);
    }
}

#[test]
fn arithmetic_is_independent_of_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for c in [ctx("gf(4)"), ctx("gf(3)"), ctx("perfect(2;t)")] {
        let n = 2;
        for _ in 0..10 {
            let x = sample::monoid_element(&c, &mut rng, 3, 5);
            let y = sample::monoid_element(&c, &mut rng, 3, 5);
            let x2 = &x + &sample::ideal_power_element(&c, &mut rng, n);
            let y2 = &y + &sample::ideal_power_element(&c, &mut rng, n);
            assert_eq!(Truncated::reduce(&x2, n), Truncated::reduce(&x, n));
            assert_eq!(
                Truncated::reduce(&(&x2 * &y2), n),
                Truncated::reduce(&(&x * &y), n)
            );
            assert_eq!(
                Truncated::reduce(&(&x2 + &y2), n),
                Truncated::reduce(&(&x + &y), n)
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reduce_is_a_ring_homomorphism(seed in any::<u64>(), spec_idx in 0usize..3, n in 0u32..4) {
        let c = ctx(["gf(4)", "gf(9)", "perfect(2;t)"][spec_idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::monoid_element(&c, &mut rng, 3, 6);
        let y = sample::monoid_element(&c, &mut rng, 3, 6);
        let (rx, ry) = (Truncated::reduce(&x, n), Truncated::reduce(&y, n));
        prop_assert_eq!(Truncated::reduce(&(&x * &y), n), &rx * &ry);
        prop_assert_eq!(Truncated::reduce(&(&x + &y), n), &rx + &ry);
        prop_assert_eq!(Truncated::reduce(&(-&x), n), rx.neg());
    }

    #[test]
    fn digits_round_trip(seed in any::<u64>(), n in 1u32..4) {
        let c = ctx("gf(4)");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Truncated::reduce(&sample::monoid_element(&c, &mut rng, 4, 9), n);
        prop_assert_eq!(Truncated::from_digits(&c, &x.teichmuller_expand()), x);
    }
}

#[test]
fn valuation_is_the_p_power_filtration() {
    // ℤF₄/I³ has 64 elements; compare v(x) ≥ i with x ∈ pⁱ·(ℤF₄/I³)
    let f4 = ctx("gf(4)");
    let n = 3;
    let all: Vec<Truncated> = (0..8)
        .flat_map(|a| (0..8).map(move |b| (a, b)))
        .map(|(a, b)| {
            let coeffs = [(BasisIndex::Power(0), int(a)), (BasisIndex::Power(1), int(b))].into_iter().collect();
            Truncated::from_coeffs(&f4, n, coeffs)
        })
        .collect();
    for i in 0..=n {
        let multiples: std::collections::BTreeSet<String> =
            all.iter().map(|y| y.scale(&p_power(2, i)).to_string()).collect();
        for x in &all {
            let deep = match x.valuation().unwrap() {
                Valuation::Finite(v) => v >= i,
                Valuation::AtLeast(_) => true,
            };
            assert_eq!(deep, multiples.contains(&x.to_string()), "{x}, i = {i}");
        }
    }
}
