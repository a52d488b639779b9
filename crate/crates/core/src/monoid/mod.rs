//! The monoid algebra `ZR` of the multiplicative monoid of a perfect
//! F_p-algebra `R`: finite formal sums `sum n_r [r]` with `[r][s] = [rs]`.
//!
//! Coefficients are exact integers. Nothing here is reduced modulo anything;
//! `delta` depends on that.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perfect::{AlgebraContext, PerfectElement, RingHom};
use crate::text::{tokenize, Cursor, Tok};

#[derive(Clone, Debug)]
pub struct MonoidElement {
    ctx: Arc<AlgebraContext>,
    terms: BTreeMap<PerfectElement, BigInt>,
}

pub(crate) fn same_context(a: &Arc<AlgebraContext>, b: &Arc<AlgebraContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn add_term(map: &mut BTreeMap<PerfectElement, BigInt>, key: PerfectElement, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl MonoidElement {
    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        MonoidElement {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `[1]`, the identity of `ZR`.
    pub fn one(ctx: &Arc<AlgebraContext>) -> Self {
        Self::bracket(ctx, ctx.one())
    }

    /// `n [1]`.
    pub fn from_int(ctx: &Arc<AlgebraContext>, n: impl Into<BigInt>) -> Self {
        Self::one(ctx).scale(&n.into())
    }

    /// The multiplicative lift `[r]`.
    ///
    /// Panics if `r` does not belong to `ctx`.
    pub fn bracket(ctx: &Arc<AlgebraContext>, r: PerfectElement) -> Self {
        assert!(
            ctx.contains(&r),
            "bracketed element is not in {}",
            ctx.spec_string()
        );
        let mut terms = BTreeMap::new();
        terms.insert(r, BigInt::one());
        MonoidElement {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(ctx: &Arc<AlgebraContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (PerfectElement, BigInt)>,
    {
        let mut map = BTreeMap::new();
        for (r, c) in terms {
            assert!(
                ctx.contains(&r),
                "bracketed element is not in {}",
                ctx.spec_string()
            );
            add_term(&mut map, r, c);
        }
        MonoidElement {
            ctx: ctx.clone(),
            terms: map,
        }
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PerfectElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, r: &PerfectElement) -> BigInt {
        self.terms.get(r).cloned().unwrap_or_default()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (r, c) in &other.terms {
            add_term(&mut terms, r.clone(), c.clone());
        }
        Ok(MonoidElement {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = BTreeMap::new();
        for (r, a) in &self.terms {
            for (s, b) in &other.terms {
                add_term(&mut terms, self.ctx.mul(r, s), a * b);
            }
        }
        Ok(MonoidElement {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    fn neg_ref(&self) -> Self {
        MonoidElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(r, c)| (r.clone(), -c)).collect(),
        }
    }

    /// Integer scalar multiple.
    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(&self.ctx);
        }
        MonoidElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(r, c)| (r.clone(), c * n)).collect(),
        }
    }

    /// `x^k` by repeated squaring; exact multinomial expansion.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The augmentation `sum n_r [r] -> sum n_r r`.
    pub fn augmentation(&self) -> PerfectElement {
        let ctx = &self.ctx;
        let p = BigInt::from(ctx.characteristic());
        self.terms.iter().fold(ctx.zero(), |acc, (r, c)| {
            let c = c.mod_floor(&p);
            let c = u64::try_from(&c).expect("residue below p");
            ctx.add(&acc, &ctx.scale(r, c))
        })
    }

    /// Membership in `I = ker(augmentation)`.
    pub fn in_augmentation_ideal(&self) -> bool {
        self.ctx.is_zero(&self.augmentation())
    }

    fn map_brackets(&self, f: impl Fn(&PerfectElement) -> PerfectElement) -> Self {
        let mut terms = BTreeMap::new();
        for (r, c) in &self.terms {
            add_term(&mut terms, f(r), c.clone());
        }
        MonoidElement {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// `F: [r] -> [r^p]`.
    pub fn frobenius(&self) -> Self {
        self.map_brackets(|r| self.ctx.frobenius(r))
    }

    /// `F^{-1}: [r] -> [r^{1/p}]`.
    pub fn frobenius_inv(&self) -> Self {
        self.map_brackets(|r| self.ctx.pth_root(r))
    }

    /// Applies a coefficient-algebra homomorphism inside every bracket.
    pub fn map_hom(&self, h: &RingHom) -> Result<Self> {
        if !same_context(&self.ctx, h.source()) {
            return Err(Error::ContextMismatch);
        }
        let tgt = h.target();
        let mut terms = BTreeMap::new();
        for (r, c) in &self.terms {
            add_term(&mut terms, h.apply(r), c.clone());
        }
        Ok(MonoidElement {
            ctx: tgt.clone(),
            terms,
        })
    }

    /// The arithmetic derivation `delta(x) = (F(x) - x^p) / p`.
    ///
    /// Panics if the division is not exact, which cannot happen for valid
    /// input since `F(x) = x^p mod p ZR`.
    pub fn delta(&self) -> Self {
        let p = self.ctx.characteristic();
        let diff = &self.frobenius() - &self.pow(p as u32);
        diff.div_exact(&BigInt::from(p))
            .expect("F(x) - x^p must be divisible by p in ZR")
    }

    /// Exact division of every coefficient, `None` if some coefficient is not
    /// divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (r, c) in &self.terms {
            let (q, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            terms.insert(r.clone(), q);
        }
        Some(MonoidElement {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    /// Coefficients reduced into `[0, m)`. Valid inside `ZR/I^n` whenever
    /// `m` is a multiple of `p^n`.
    pub(crate) fn reduce_coefficients(&self, m: &BigInt) -> Self {
        let mut terms = BTreeMap::new();
        for (r, c) in &self.terms {
            add_term(&mut terms, r.clone(), c.mod_floor(m));
        }
        MonoidElement {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Parses `2*[g^2] - [1] + [0]`; bracket contents use the coefficient
    /// algebra literal grammar.
    pub fn parse(ctx: &Arc<AlgebraContext>, src: &str) -> Result<Self> {
        let toks = tokenize(src)?;
        let mut cur = Cursor::new(&toks, src.len());
        if cur.at_end() {
            return Err(Error::parse(0, "empty element"));
        }
        let mut acc = Self::zero(ctx);
        let mut first = true;
        while !cur.at_end() {
            let negative = match cur.peek() {
                Some(Tok::Plus) => {
                    cur.bump();
                    false
                }
                Some(Tok::Minus) => {
                    cur.bump();
                    true
                }
                _ if first => false,
                _ => return Err(Error::parse(cur.pos(), "expected `+` or `-`")),
            };
            first = false;
            let term = parse_term(ctx, &toks, &mut cur)?;
            acc = if negative { &acc - &term } else { &acc + &term };
        }
        Ok(acc)
    }
}

fn parse_term(
    ctx: &Arc<AlgebraContext>,
    toks: &[crate::text::Token],
    cur: &mut Cursor<'_>,
) -> Result<MonoidElement> {
    let pos = cur.pos();
    match cur.peek().cloned() {
        Some(Tok::Int(n)) => {
            cur.bump();
            if cur.eat(&Tok::Star) {
                let b = parse_bracket(ctx, toks, cur)?;
                Ok(b.scale(&BigInt::from(n)))
            } else {
                Ok(MonoidElement::from_int(ctx, n))
            }
        }
        Some(Tok::LBracket) => parse_bracket(ctx, toks, cur),
        _ => Err(Error::parse(pos, "expected integer or `[`")),
    }
}

fn parse_bracket(
    ctx: &Arc<AlgebraContext>,
    toks: &[crate::text::Token],
    cur: &mut Cursor<'_>,
) -> Result<MonoidElement> {
    let open = cur.pos();
    cur.expect(&Tok::LBracket, "`[`")?;
    let start = cur.index();
    let mut end = start;
    while end < toks.len() && toks[end].tok != Tok::RBracket {
        if toks[end].tok == Tok::LBracket {
            return Err(Error::parse(toks[end].pos, "nested `[`"));
        }
        end += 1;
    }
    if end == toks.len() {
        return Err(Error::parse(open, "unclosed `[`"));
    }
    let close = toks[end].pos;
    let r = ctx.parse_element_tokens(&toks[start..end], close)?;
    for _ in start..=end {
        cur.bump();
    }
    Ok(MonoidElement::bracket(ctx, r))
}

impl PartialEq for MonoidElement {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for MonoidElement {}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "[{}]", self.ctx.format_element(r))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&MonoidElement> for &MonoidElement {
            type Output = MonoidElement;
            /// Panics when the operands live over different coefficient algebras.
            fn $m(self, rhs: &MonoidElement) -> MonoidElement {
                self.$imp(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<MonoidElement> for MonoidElement {
            type Output = MonoidElement;
            fn $m(self, rhs: MonoidElement) -> MonoidElement {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &MonoidElement {
    type Output = MonoidElement;
    fn neg(self) -> MonoidElement {
        self.neg_ref()
    }
}

impl Neg for MonoidElement {
    type Output = MonoidElement;
    fn neg(self) -> MonoidElement {
        self.neg_ref()
    }
}
