use super::*;

fn ctx(spec: &str) -> Arc<AlgebraContext> {
    Arc::new(AlgebraContext::parse_spec(spec).unwrap())
}

fn vector(alg: &ResidueAlgebra, src: &str) -> Vec<u64> {
    alg.from_monoid(&MonoidElement::parse(alg.context(), src).unwrap())
}

#[test]
fn kernel_examples() {
    let f2 = ctx("gf(2)");
    let k = kernel_ideal_mod_pn(&f2, 1).unwrap();
    let alg = ResidueAlgebra::new(&f2, 1).unwrap();
    assert_eq!(k, ResidueModule::span(2, 1, 2, [alg.bracket(&f2.zero())]));

    let f3 = ctx("gf(3)");
    let alg = ResidueAlgebra::new(&f3, 1).unwrap();
    let k = kernel_ideal_mod_pn(&f3, 1).unwrap();
    let expected = ResidueModule::span(3, 1, 3, [vector(&alg, "[0]"), vector(&alg, "[1] + [2]")]);
    assert_eq!(k, expected);

    let alg = ResidueAlgebra::new(&f2, 2).unwrap();
    let k = kernel_ideal_mod_pn(&f2, 2).unwrap();
    assert!(k.contains(&vector(&alg, "2*[1]")));
    assert!(k.contains(&vector(&alg, "[0]")));
    assert!(!k.contains(&vector(&alg, "[1]")));

    assert_eq!(
        kernel_ideal_mod_pn(&ctx("perfect(2;t)"), 1).unwrap_err(),
        Error::InfiniteRing
    );
    assert!(kernel_ideal_mod_pn(&f2, 0).is_err());
}

#[test]
fn mod_p_unit_examples() {
    let f2 = ctx("gf(2)");
    let alg = ResidueAlgebra::new(&f2, 1).unwrap();
    let e1 = unit_idempotent_mod_p(&alg, &kernel_ideal_mod_pn(&f2, 1).unwrap()).unwrap();
    assert_eq!(e1, vector(&alg, "[0]"));

    let f3 = ctx("gf(3)");
    let alg = ResidueAlgebra::new(&f3, 1).unwrap();
    let e1 = unit_idempotent_mod_p(&alg, &kernel_ideal_mod_pn(&f3, 1).unwrap()).unwrap();
    assert_eq!(e1, vector(&alg, "2*[1] + 2*[2]"));

    for spec in ["gf(2)", "gf(3)", "gf(4)", "gf(5)", "gf(8)", "gf(9)"] {
        let c = ctx(spec);
        let alg = ResidueAlgebra::new(&c, 1).unwrap();
        let e1 = unit_idempotent_mod_p(&alg, &kernel_ideal_mod_pn(&c, 1).unwrap()).unwrap();
        assert_eq!(alg.mul(&e1, &e1), e1, "{spec}");
    }
}

#[test]
fn lifted_idempotent_examples() {
    let f3 = ctx("gf(3)");
    let idem = Idempotent::compute(&f3, 2).unwrap();
    assert_eq!(idem.formatted(), "5*[1] + 5*[2] (mod 9)");
    let f2 = ctx("gf(2)");
    for n in 1..=4 {
        let idem = Idempotent::compute(&f2, n).unwrap();
        assert_eq!(idem.e, idem.algebra.bracket(&f2.zero()));
        assert_eq!(idem.formatted(), format!("[0] (mod {})", 1 << n));
    }
}

#[test]
fn idempotent_properties() {
    for spec in ["gf(2)", "gf(3)", "gf(4)", "gf(5)", "gf(9)"] {
        let c = ctx(spec);
        for n in 1..=3 {
            let idem = Idempotent::compute(&c, n).unwrap();
            let alg = &idem.algebra;
            let e = &idem.e;
            assert_eq!(alg.mul(e, e), *e);
            let complement = alg.sub(&alg.one(), e);
            for g in idem.power_ideal.rows() {
                assert_eq!(alg.mul(e, g), *g);
                assert!(alg.mul(&complement, g).iter().all(|&x| x == 0));
            }
            // e-part is exactly the image of I^n
            let e_part = ResidueModule::span(
                c.characteristic(),
                n,
                alg.rank(),
                alg.elements().iter().map(|r| alg.mul(e, &alg.bracket(r))),
            );
            assert_eq!(e_part, idem.power_ideal);
            let report = idem.splitting_check();
            assert!(report.holds(), "{spec} n={n}: {report:?}");
            // |(ℤ/pⁿ)R| = |e-part|·|ℤR/Iⁿ|
            assert_eq!(
                n as u64 * alg.rank() as u64,
                e_part.log_order() + report.target_log_order
            );
        }
    }
}

#[test]
fn compatible_across_precisions() {
    for spec in ["gf(2)", "gf(3)", "gf(4)", "gf(9)"] {
        let c = ctx(spec);
        let p = c.characteristic();
        for n in 2..=3 {
            let hi = Idempotent::compute(&c, n).unwrap();
            let lo = Idempotent::compute(&c, n - 1).unwrap();
            let m = p.pow(n - 1);
            let reduced: Vec<u64> = hi.e.iter().map(|x| x % m).collect();
            assert_eq!(reduced, lo.e);
            assert_eq!(hi.power_ideal.reduce_exponent(n - 1), lo.power_ideal);
        }
    }
}

#[test]
fn splitting_check_examples() {
    let f2 = ctx("gf(2)");
    let idem = Idempotent::compute(&f2, 2).unwrap();
    let report = idem.splitting_check();
    assert!(report.holds());
    // Howell form normalises the generator [1] − [0] to [0] + 3[1]
    assert_eq!(report.matrix, vec![vec![3]]);
    assert_eq!(
        idem.algebra
            .reduce_coordinates(&vector(&idem.algebra, "[1] - [0]")),
        vec![1]
    );
    assert_eq!(report.modulus, 4);

    let f3 = ctx("gf(3)");
    let report = Idempotent::compute(&f3, 2).unwrap().splitting_check();
    assert!(report.holds());
    assert_eq!(report.complement_log_order, 2);

    // the zero "idempotent" does not split off the kernel
    let zero = idem.algebra.zero();
    let bad = splitting_check(&idem.algebra, &idem.power_ideal, &zero);
    assert!(!bad.covers_kernel);
    assert!(!bad.bijective());
    assert!(!bad.holds());
}

#[test]
fn power_ideal_routes_agree() {
    for spec in ["gf(2)", "gf(3)", "gf(4)", "gf(8)"] {
        let c = ctx(spec);
        for n in 1..=3 {
            let alg = ResidueAlgebra::new(&c, n).unwrap();
            assert_eq!(
                power_ideal_by_products(&alg),
                power_ideal_by_reduction(&alg),
                "{spec} n={n}"
            );
        }
    }
    // A_1 is the mod-p kernel
    let f4 = ctx("gf(4)");
    let alg = ResidueAlgebra::new(&f4, 1).unwrap();
    assert_eq!(
        power_ideal(&alg).unwrap(),
        kernel_ideal_mod_pn(&f4, 1).unwrap()
    );
}

#[test]
fn character_examples() {
    assert_eq!(teichmuller_character(3, 2, 2).unwrap(), 8);
    for p in [2, 3, 5, 7] {
        for n in 1..4 {
            assert_eq!(teichmuller_character(p, n, 1).unwrap(), 1);
            // ω(r)^{p-1} = 1 and ω(r) ≡ r mod p
            for r in 1..p {
                let w = teichmuller_character(p, n, r).unwrap();
                let m = p.pow(n);
                assert_eq!(w % p, r);
                let mut acc = 1;
                for _ in 0..p - 1 {
                    acc = acc * w % m;
                }
                assert_eq!(acc, 1);
            }
        }
    }
    assert_eq!(teichmuller_character(3, 2, 3), Err(Error::NotInvertible));
}

#[test]
fn explicit_formula_matches_for_odd_p() {
    let f3 = ctx("gf(3)");
    let alg = ResidueAlgebra::new(&f3, 2).unwrap();
    assert_eq!(
        alg.format(&explicit_e_prime_field(3, 2).unwrap()),
        "5*[1] + 5*[2] (mod 9)"
    );
    for p in [3, 5, 7] {
        let c = Arc::new(AlgebraContext::prime_field(p).unwrap());
        for n in 1..=3 {
            let idem = Idempotent::compute(&c, n).unwrap();
            assert_eq!(explicit_e_prime_field(p, n).unwrap(), idem.e, "p={p} n={n}");
        }
    }
}

#[test]
fn formula_at_two_gives_zero_not_the_kernel_idempotent() {
    assert!(matches!(
        explicit_e_prime_field(2, 2),
        Err(Error::Unsupported(_))
    ));
    let f2 = ctx("gf(2)");
    for n in 1..=3 {
        let alg = ResidueAlgebra::new(&f2, n).unwrap();
        let formula = character_sum_formula(&alg).unwrap();
        assert_eq!(formula, alg.zero());
        let idem = Idempotent::compute(&f2, n).unwrap();
        assert_eq!(idem.e, alg.bracket(&f2.zero()));
        assert!(!splitting_check(&alg, &idem.power_ideal, &formula).holds());
    }
}
