//! Exhaustive consistency suites over small rings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::batch::{self, Strategy};
use crate::error::Result;
use crate::idempotent::{
    character_sum_formula, explicit_e_prime_field, splitting_check, Idempotent,
};
use crate::monoid::MonoidElement;
use crate::perfect::AlgebraContext;
use crate::truncated::{p_power, Truncated};
use crate::witt::{alpha2, IntPolynomial, WittContext, WittRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// First failure, if any.
    pub failure: Option<String>,
    /// Noteworthy facts that are not failures.
    pub findings: Vec<String>,
}

struct Suite {
    cases: usize,
    failure: Option<String>,
    findings: Vec<String>,
}

impl Suite {
    fn new() -> Self {
        Self {
            cases: 0,
            failure: None,
            findings: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self, name: &'static str) -> SuiteResult {
        SuiteResult {
            name,
            passed: self.failure.is_none(),
            cases: self.cases,
            failure: self.failure,
            findings: self.findings,
        }
    }
}

fn ring(spec: &str) -> Arc<AlgebraContext> {
    Arc::new(AlgebraContext::parse_spec(spec).expect("built-in spec"))
}

type SuiteFn = fn(Strategy) -> Result<Suite>;

const SUITES: &[(&str, SuiteFn)] = &[
    ("witt-length-two-laws", length_two_laws),
    ("ghost-identities", ghost_identities),
    ("alpha-isomorphism-f2", alpha_isomorphism_f2),
    ("alpha2-agreement-f4", alpha2_agreement_f4),
    ("teichmuller-round-trip-f2", round_trip_f2),
    ("teichmuller-limit-f8", teichmuller_limit_f8),
    ("graded-pieces-f4", graded_pieces_f4),
    ("idempotent", idempotent_suite),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(name, _)| *name).collect()
}

/// Runs every suite; the suites themselves fan out under `Parallel`.
pub fn run(strategy: Strategy) -> Vec<SuiteResult> {
    batch::map(strategy, SUITES, |(name, f)| match f(strategy) {
        Ok(s) => s.finish(name),
        Err(e) => SuiteResult {
            name,
            passed: false,
            cases: 0,
            failure: Some(format!("error: {e}")),
            findings: Vec::new(),
        },
    })
}

fn length_two_laws(_: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    for p in [2u64, 3, 5] {
        let w = WittContext::new(p, 2)?;
        let pp = p as u32;
        let mut sum = vec![
            (vec![0, 1, 0, 0], BigInt::from(1)),
            (vec![0, 0, 0, 1], BigInt::from(1)),
        ];
        for nu in 1..pp {
            sum.push((
                vec![nu, 0, pp - nu, 0],
                -(binomial(BigInt::from(p), BigInt::from(nu)) / p),
            ));
        }
        let prod = vec![
            (vec![0, 1, pp, 0], BigInt::from(1)),
            (vec![pp, 0, 0, 1], BigInt::from(1)),
            (vec![0, 1, 0, 1], BigInt::from(p)),
        ];
        s.check(
            w.sum_polynomials()[1] == IntPolynomial::from_terms(4, sum),
            || format!("S1 differs at p={p}"),
        );
        s.check(
            w.product_polynomials()[1] == IntPolynomial::from_terms(4, prod),
            || format!("P1 differs at p={p}"),
        );
    }
    Ok(s)
}

fn ghost_identities(_: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    for p in [2, 3] {
        for n in 1..=3 {
            s.check(WittContext::new(p, n)?.check_ghost_identities(), || {
                format!("p={p} n={n}")
            });
        }
    }
    Ok(s)
}

fn alpha_isomorphism_f2(strategy: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    let f2 = ring("gf(2)");
    for n in 1..=3u32 {
        let w = WittRing::new(&f2, n)?;
        let elems: Vec<Truncated> = (0..1i64 << n)
            .map(|k| Truncated::from_int(&f2, k, n))
            .collect();
        let images = batch::alpha_all(strategy, &w, &elems)?;
        let distinct: std::collections::BTreeSet<String> =
            images.iter().map(|u| u.to_string()).collect();
        s.check(distinct.len() == elems.len(), || {
            format!("alpha not injective at n={n}")
        });
        for (x, ax) in elems.iter().zip(&images) {
            s.check(w.alpha_inverse(ax)? == *x, || {
                format!("inverse fails on {x}")
            });
        }
        let pairs: Vec<_> = elems
            .iter()
            .flat_map(|x| elems.iter().map(move |y| (x.clone(), y.clone())))
            .collect();
        let bad = batch::alpha_mismatches(strategy, &w, &pairs)?;
        s.check(bad == 0, || {
            format!("{bad} pairs break the homomorphism at n={n}")
        });
    }
    Ok(s)
}

fn alpha2_agreement_f4(strategy: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    let f4 = ring("gf(4)");
    let w = WittRing::new(&f4, 2)?;
    let g = f4.generator().expect("extension field");
    let mut elems = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            let x = MonoidElement::from_terms(
                &f4,
                [(f4.one(), BigInt::from(a)), (g.clone(), BigInt::from(b))],
            );
            elems.push(Truncated::reduce(&x, 2));
        }
    }
    let pairs: Vec<_> = elems
        .iter()
        .flat_map(|x| elems.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let verdicts = batch::try_map(strategy, &pairs, |(x, y)| {
        let sum = x.try_add(y)?;
        let prod = x.try_mul(y)?;
        Ok(alpha2(&sum)? == w.alpha(&sum)? && alpha2(&prod)? == w.alpha(&prod)?)
    })?;
    for (ok, (x, y)) in verdicts.into_iter().zip(&pairs) {
        s.check(ok, || format!("alpha2 and alpha differ on {x} and {y}"));
    }
    Ok(s)
}

fn round_trip_f2(_: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    let f2 = ring("gf(2)");
    for n in 0..=4u32 {
        for k in 0..1i64 << n {
            let x = Truncated::from_int(&f2, k, n);
            s.check(
                Truncated::from_digits(&f2, &x.teichmuller_expand()) == x,
                || format!("{x}"),
            );
        }
    }
    Ok(s)
}

fn teichmuller_limit_f8(_: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    let f8 = ring("gf(8)");
    for r in f8.elements().expect("finite") {
        for n in 1..=3u32 {
            let root = f8.pth_root_iter(&r, n - 1);
            let lift = MonoidElement::from_terms(
                &f8,
                f8.decompose(&root)
                    .into_iter()
                    .map(|(b, k)| (f8.basis_element(&b), BigInt::from(k))),
            );
            let lim = lift.pow(2u32.pow(n - 1));
            s.check(
                Truncated::reduce(&lim, n) == Truncated::teichmuller(&f8, r.clone(), n),
                || format!("r = {}, n = {n}", f8.format_element(&r)),
            );
        }
    }
    Ok(s)
}

fn graded_pieces_f4(_: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    let f4 = ring("gf(4)");
    let elems = f4.elements().expect("finite");
    let br = |r: &crate::perfect::PerfectElement| MonoidElement::bracket(&f4, r.clone());
    for n in 0..=2u32 {
        let pn = p_power(2, n);
        for r in &elems {
            for t in &elems {
                let rel = &(&br(r) + &br(t)) - &br(&f4.add(r, t));
                s.check(Truncated::reduce(&rel.scale(&pn), n + 1).is_zero(), || {
                    format!("additivity at n={n}")
                });
                if r != t {
                    let (a, b) = (
                        Truncated::reduce(&br(r).scale(&pn), n + 1),
                        Truncated::reduce(&br(t).scale(&pn), n + 1),
                    );
                    s.check(a != b, || format!("p^{n}[r] collide at n={n}"));
                }
            }
        }
    }
    Ok(s)
}

fn idempotent_suite(_: Strategy) -> Result<Suite> {
    let mut s = Suite::new();
    for spec in ["gf(2)", "gf(3)", "gf(4)"] {
        let c = ring(spec);
        for n in 1..=3u32 {
            let idem = Idempotent::compute(&c, n)?;
            let alg = &idem.algebra;
            s.check(alg.mul(&idem.e, &idem.e) == idem.e, || {
                format!("{spec} n={n}: not idempotent")
            });
            let report = idem.splitting_check();
            s.check(report.holds(), || {
                format!("{spec} n={n}: splitting fails: {report:?}")
            });
            if spec == "gf(2)" {
                s.check(idem.e == alg.bracket(&c.zero()), || {
                    format!("F2 n={n}: e = {}", idem.formatted())
                });
            }
            if spec == "gf(3)" {
                s.check(explicit_e_prime_field(3, n)? == idem.e, || {
                    format!("F3 n={n}: formula differs")
                });
                if n == 2 {
                    s.check(idem.formatted() == "5*[1] + 5*[2] (mod 9)", || {
                        idem.formatted()
                    });
                }
            }
            if spec == "gf(2)" && n == 2 {
                let formula = character_sum_formula(alg)?;
                let holds = splitting_check(alg, &idem.power_ideal, &formula).holds();
                s.findings.push(format!(
                    "p = 2: the character-sum formula gives e = {} (splits: {holds}); the kernel idempotent is e = {}",
                    alg.format(&formula),
                    idem.formatted()
                ));
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let results = run(Strategy::Parallel);
        assert_eq!(
            results.iter().map(|r| r.name).collect::<Vec<_>>(),
            suite_names()
        );
        for r in &results {
            assert!(r.passed, "{}: {:?}", r.name, r.failure);
            assert!(r.cases > 0);
        }
        let findings: Vec<_> = results.iter().flat_map(|r| &r.findings).collect();
        assert_eq!(findings.len(), 1);
        assert!(findings[0].contains("e = 0 (mod 4)"));
        assert_eq!(run(Strategy::Sequential), results);
    }
}
