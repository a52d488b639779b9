//! Ring specs (`gf(4,x^2+x+1)`, `perfect(2;t)`) and element literals
//! (`g^2+1`, `t^(1/2)+t`).

use super::fp_poly::{self, mul_mod};
use super::{AlgebraContext, Exponent, Kind, Monomial, PerfectElement, Repr, GENERATOR};
use crate::error::{Error, Result};
use crate::text::{parse_expr, tokenize, Cursor, ExprTarget, Power};

struct ElementTarget<'a>(&'a AlgebraContext);

impl ExprTarget for ElementTarget<'_> {
    type Value = PerfectElement;

    fn int(&self, n: u64) -> PerfectElement {
        self.0.from_int((n % self.0.p) as i64)
    }

    fn name(&self, name: &str, power: Power, pos: usize) -> Result<PerfectElement> {
        let ctx = self.0;
        match &ctx.kind {
            Kind::FiniteField { .. } => {
                let g = match ctx.generator() {
                    Some(g) if name == GENERATOR => g,
                    _ => return Err(Error::UnknownGenerator(name.to_string())),
                };
                if power.den != 1 {
                    return Err(Error::parse(
                        pos,
                        "fractional exponents need a perfect closure",
                    ));
                }
                Ok(ctx.pow(&g, power.num))
            }
            Kind::PerfectClosure { vars } => {
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
                let den_exp = p_log(power.den, ctx.p).ok_or_else(|| {
                    Error::parse(
                        pos,
                        format!("denominator {} is not a power of {}", power.den, ctx.p),
                    )
                })?;
                let mut exps = vec![Exponent::ZERO; vars.len()];
                exps[idx] = Exponent::new(power.num, den_exp, ctx.p);
                Ok(ctx.monomial(Monomial::from_exponents(ctx.p, exps)))
            }
        }
    }

    fn add(&self, a: &PerfectElement, b: &PerfectElement) -> PerfectElement {
        self.0.add(a, b)
    }

    fn neg(&self, a: &PerfectElement) -> PerfectElement {
        self.0.neg(a)
    }

    fn mul(&self, a: &PerfectElement, b: &PerfectElement) -> PerfectElement {
        self.0.mul(a, b)
    }

    fn pow(&self, a: &PerfectElement, n: u64) -> PerfectElement {
        self.0.pow(a, n)
    }
}

fn p_log(mut d: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    while d > 1 {
        if !d.is_multiple_of(p) {
            return None;
        }
        d /= p;
        e += 1;
    }
    Some(e)
}

pub(super) fn parse_element(ctx: &AlgebraContext, src: &str) -> Result<PerfectElement> {
    let toks = tokenize(src)?;
    parse_element_tokens(ctx, &toks, src.len())
}

pub(crate) fn parse_element_tokens(
    ctx: &AlgebraContext,
    toks: &[crate::text::Token],
    end: usize,
) -> Result<PerfectElement> {
    let mut cur = Cursor::new(toks, end);
    if cur.at_end() {
        return Err(Error::parse(end, "empty element literal"));
    }
    let v = parse_expr(&mut cur, &ElementTarget(ctx))?;
    if !cur.at_end() {
        return Err(Error::parse(cur.pos(), "unexpected trailing input"));
    }
    Ok(v)
}

pub(super) fn format_element(ctx: &AlgebraContext, a: &PerfectElement) -> String {
    let mut parts: Vec<String> = Vec::new();
    match &a.0 {
        Repr::Finite(v) => {
            for (i, &c) in v.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                parts.push(match (i, c) {
                    (0, c) => c.to_string(),
                    (1, 1) => GENERATOR.to_string(),
                    (1, c) => format!("{c}*{GENERATOR}"),
                    (i, 1) => format!("{GENERATOR}^{i}"),
                    (i, c) => format!("{c}*{GENERATOR}^{i}"),
                });
            }
        }
        Repr::Closure(m) => {
            for (mono, &c) in m.iter().rev() {
                let mut s = String::new();
                mono.write(ctx.variables(), &mut s)
                    .expect("writing to a String");
                parts.push(match (mono.is_one(), c) {
                    (true, c) => c.to_string(),
                    (false, 1) => s,
                    (false, c) => format!("{c}*{s}"),
                });
            }
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

pub(super) fn format_modulus(modulus: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in modulus.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        parts.push(match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}*x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}*x^{i}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Polynomials over F_p in the single variable `x`.
struct ModulusTarget {
    p: u64,
}

impl ExprTarget for ModulusTarget {
    type Value = Vec<u64>;

    fn int(&self, n: u64) -> Vec<u64> {
        let mut v = vec![n % self.p];
        fp_poly::trim(&mut v);
        v
    }

    fn name(&self, name: &str, power: Power, pos: usize) -> Result<Vec<u64>> {
        if name != "x" {
            return Err(Error::UnknownGenerator(name.to_string()));
        }
        if power.den != 1 {
            return Err(Error::parse(pos, "modulus exponents must be integers"));
        }
        let mut v = vec![0; power.num as usize + 1];
        v[power.num as usize] = 1;
        Ok(v)
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut v: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p)
            .collect();
        fp_poly::trim(&mut v);
        v
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|&c| (self.p - c) % self.p).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = (v[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        fp_poly::trim(&mut v);
        v
    }

    fn pow(&self, a: &Vec<u64>, n: u64) -> Vec<u64> {
        (0..n).fold(vec![1], |acc, _| self.mul(&acc, a))
    }
}

pub(super) fn parse_modulus(src: &str, p: u64) -> Result<Vec<u64>> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks, src.len());
    let v = parse_expr(&mut cur, &ModulusTarget { p })?;
    if !cur.at_end() {
        return Err(Error::parse(cur.pos(), "unexpected trailing input"));
    }
    Ok(v)
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

pub(super) fn parse_ring_spec(spec: &str) -> Result<AlgebraContext> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidRingSpec(spec.to_string());
    if let Some(body) = s.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')) {
        let (q_str, modulus) = match body.split_once(',') {
            Some((q, m)) => (q, Some(m)),
            None => (body, None),
        };
        let q: u64 = q_str.parse().map_err(|_| bad())?;
        let (p, k) = prime_power(q).ok_or(Error::NonPrime(q))?;
        match modulus {
            None => AlgebraContext::builtin(q),
            Some(m) => {
                let poly = parse_modulus(m, p)?;
                AlgebraContext::finite_field_of_degree(p, k, poly)
            }
        }
    } else if let Some(body) = s.strip_prefix("perfect(").and_then(|r| r.strip_suffix(')')) {
        let (p_str, vars) = body.split_once(';').ok_or_else(bad)?;
        let p: u64 = p_str.parse().map_err(|_| bad())?;
        let vars: Vec<&str> = vars.split(',').collect();
        AlgebraContext::perfect_closure(p, &vars)
    } else {
        Err(bad())
    }
}
