//! Canonical computation in `ZR/I^n`.
//!
//! A class is stored by its coordinates in the distinguished F_p-basis `b` of
//! `R`, each in `[0, p^n)`: the map `Zb/p^n -> ZR/I^n` is an additive
//! isomorphism, so two classes are equal iff their coordinates are.
//!
//! `reduce` peels one p-adic layer at a time. The residue `pi(x)` fixes the
//! coordinates mod p, the remainder `z` lies in `I`, and `z = p a mod I^n`
//! for some `a` that is unique mod `I^{n-1}`. That `a` is found with `delta`:
//! if `z = p a + w` with `w` in `I^n`, then
//! `F(a) = delta(z) + p^{p-1} a^p mod I^{n-1}`, a contraction gaining `p - 1`
//! powers of `I` per step.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monoid::{same_context, MonoidElement};
use crate::perfect::{AlgebraContext, AlgebraKind, BasisIndex, PerfectElement, RingHom};

/// A class in `ZR/I^n` in canonical form.
#[derive(Clone, Debug)]
pub struct Truncated {
    ctx: Arc<AlgebraContext>,
    precision: u32,
    coeffs: BTreeMap<BasisIndex, BigInt>,
}

/// Valuation of an element of `C(K)/p^n` for a perfect field `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    /// The element is zero at the working precision.
    AtLeast(u32),
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

pub fn p_power(p: u64, n: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), n as usize)
}

type Coeffs = BTreeMap<BasisIndex, BigInt>;

fn lift_coeffs(ctx: &Arc<AlgebraContext>, coeffs: &Coeffs) -> MonoidElement {
    MonoidElement::from_terms(
        ctx,
        coeffs
            .iter()
            .map(|(b, c)| (ctx.basis_element(b), c.clone())),
    )
}

/// Number of contraction steps after the initial guess in `divide_by_p`.
fn iteration_count(p: u64, n: u32) -> u32 {
    let n1 = u64::from(n.saturating_sub(1));
    (n1.div_ceil(p - 1) + 1) as u32
}

fn reduce_coeffs(x: &MonoidElement, n: u32) -> Coeffs {
    if n == 0 {
        return Coeffs::new();
    }
    let ctx = x.context();
    let p = ctx.characteristic();
    let x = x.reduce_coefficients(&p_power(p, n));
    let residue = ctx.decompose(&x.augmentation());
    let mut out: Coeffs = residue
        .iter()
        .map(|(b, c)| (b.clone(), BigInt::from(*c)))
        .collect();
    if n == 1 {
        return out;
    }
    let z = &x - &lift_coeffs(ctx, &out);
    let pb = BigInt::from(p);
    for (b, d) in divide_coeffs(&z, n) {
        let entry = out.entry(b).or_insert_with(BigInt::zero);
        *entry += &pb * d;
    }
    out
}

/// `a` with `p a = z mod I^n`, canonical at precision `n - 1`.
/// Requires `z` in `I` and `n >= 1`.
fn divide_coeffs(z: &MonoidElement, n: u32) -> Coeffs {
    debug_assert!(z.in_augmentation_ideal());
    if n <= 1 {
        return Coeffs::new();
    }
    let ctx = z.context();
    let p = ctx.characteristic();
    let m = n - 1;
    let modulus = p_power(p, m);
    let pp1 = p_power(p, (p - 1) as u32);
    let dz = z.delta();
    let mut a = dz.frobenius_inv().reduce_coefficients(&modulus);
    for _ in 0..iteration_count(p, n) {
        let next = &dz + &a.pow(p as u32).scale(&pp1);
        a = next.frobenius_inv().reduce_coefficients(&modulus);
    }
    reduce_coeffs(&a, m)
}

impl Truncated {
    fn from_coeffs(ctx: &Arc<AlgebraContext>, precision: u32, coeffs: Coeffs) -> Self {
        let modulus = p_power(ctx.characteristic(), precision);
        let coeffs = coeffs
            .into_iter()
            .map(|(b, c)| (b, c.mod_floor(&modulus)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Truncated {
            ctx: ctx.clone(),
            precision,
            coeffs,
        }
    }

    /// The canonical form of `x` modulo `I^n`.
    pub fn reduce(x: &MonoidElement, n: u32) -> Self {
        Self::from_coeffs(x.context(), n, reduce_coeffs(x, n))
    }

    /// Canonical form of a combination of bracketed monomials of a perfect
    /// closure: the monomials are a multiplicatively closed basis, so this is
    /// plain coefficient reduction mod `p^n`.
    pub fn from_monomial_combination(x: &MonoidElement, n: u32) -> Result<Self> {
        let ctx = x.context();
        if ctx.kind() != AlgebraKind::PerfectClosure {
            return Err(Error::Unsupported(
                "monomial fast path needs a perfect closure".into(),
            ));
        }
        let mut coeffs = Coeffs::new();
        for (r, c) in x.terms() {
            let terms = r.monomial_terms().expect("closure element");
            let mono = match terms.iter().next() {
                Some((m, 1)) if terms.len() == 1 => m.clone(),
                _ => {
                    return Err(Error::Unsupported(format!(
                        "[{}] is not a bracketed monomial",
                        ctx.format_element(r)
                    )))
                }
            };
            *coeffs
                .entry(BasisIndex::Monomial(mono))
                .or_insert_with(BigInt::zero) += c;
        }
        Ok(Self::from_coeffs(ctx, n, coeffs))
    }

    /// Solves `p a = z` in `ZR/I^n`; the result lives at precision `n - 1`.
    pub fn divide_by_p(z: &MonoidElement, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPrecision(
                "division by p needs precision at least 1".into(),
            ));
        }
        if !z.in_augmentation_ideal() {
            return Err(Error::NotDivisible);
        }
        let ctx = z.context();
        let p = ctx.characteristic();
        let z = z.reduce_coefficients(&p_power(p, n));
        let a = Self::from_coeffs(ctx, n - 1, divide_coeffs(&z, n));
        let check = &a.lift().scale(&BigInt::from(p)) - &z;
        if !Self::reduce(&check, n).is_zero() {
            return Err(Error::Internal(format!(
                "p * ({a}) does not reproduce the dividend"
            )));
        }
        Ok(a)
    }

    pub fn zero(ctx: &Arc<AlgebraContext>, n: u32) -> Self {
        Truncated {
            ctx: ctx.clone(),
            precision: n,
            coeffs: Coeffs::new(),
        }
    }

    pub fn one(ctx: &Arc<AlgebraContext>, n: u32) -> Self {
        Self::from_int(ctx, 1, n)
    }

    pub fn from_int(ctx: &Arc<AlgebraContext>, k: impl Into<BigInt>, n: u32) -> Self {
        let mut coeffs = Coeffs::new();
        if let Some((one, _)) = ctx.decompose(&ctx.one()).pop() {
            coeffs.insert(one, k.into());
        }
        Self::from_coeffs(ctx, n, coeffs)
    }

    /// The Teichmüller representative `[r]`.
    pub fn teichmuller(ctx: &Arc<AlgebraContext>, r: PerfectElement, n: u32) -> Self {
        Self::reduce(&MonoidElement::bracket(ctx, r), n)
    }

    /// `sum p^i [r_i]` for the digits `r_0, ..., r_{n-1}`.
    pub fn from_digits(ctx: &Arc<AlgebraContext>, digits: &[PerfectElement]) -> Self {
        let p = BigInt::from(ctx.characteristic());
        let mut weight = BigInt::one();
        let mut acc = MonoidElement::zero(ctx);
        for r in digits {
            acc = &acc + &MonoidElement::bracket(ctx, r.clone()).scale(&weight);
            weight *= &p;
        }
        Self::reduce(&acc, digits.len() as u32)
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Canonical coordinates in basis order; all in `[0, p^n)`, zeros omitted.
    pub fn coefficients(&self) -> impl Iterator<Item = (&BasisIndex, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, b: &BasisIndex) -> BigInt {
        self.coeffs.get(b).cloned().unwrap_or_default()
    }

    /// The representative `sum c_b [b]` in `ZR`.
    pub fn lift(&self) -> MonoidElement {
        lift_coeffs(&self.ctx, &self.coeffs)
    }

    /// Image under `ZR/I^n -> R`.
    pub fn residue(&self) -> PerfectElement {
        if self.precision == 0 {
            return self.ctx.zero();
        }
        self.lift().augmentation()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch {
                left: self.precision,
                right: other.precision,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut coeffs = self.coeffs.clone();
        for (b, c) in &other.coeffs {
            *coeffs.entry(b.clone()).or_insert_with(BigInt::zero) += c;
        }
        Ok(Self::from_coeffs(&self.ctx, self.precision, coeffs))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(b, c)| (b.clone(), -c)).collect();
        Self::from_coeffs(&self.ctx, self.precision, coeffs)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let prod = &self.lift() * &other.lift();
        if self.ctx.kind() == AlgebraKind::PerfectClosure {
            // products of basis monomials are basis monomials
            return Self::from_monomial_combination(&prod, self.precision);
        }
        Ok(Self::reduce(&prod, self.precision))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(b, c)| (b.clone(), c * k))
            .collect();
        Self::from_coeffs(&self.ctx, self.precision, coeffs)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::one(&self.ctx, self.precision);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// The canonical surjection `ZR/I^n -> ZR/I^m` for `m <= n`.
    pub fn lower_precision(&self, m: u32) -> Result<Self> {
        if m > self.precision {
            return Err(Error::PrecisionMismatch {
                left: self.precision,
                right: m,
            });
        }
        Ok(Self::from_coeffs(&self.ctx, m, self.coeffs.clone()))
    }

    /// Digits `r_0, ..., r_{n-1}` with `x = sum p^i [r_i]`.
    pub fn teichmuller_expand(&self) -> Vec<PerfectElement> {
        let mut digits = Vec::with_capacity(self.precision as usize);
        let mut cur = self.clone();
        while cur.precision > 0 {
            let r = cur.residue();
            let z = &cur.lift() - &MonoidElement::bracket(&self.ctx, r.clone());
            digits.push(r);
            cur = Self::from_coeffs(
                &self.ctx,
                cur.precision - 1,
                divide_coeffs(&z, cur.precision),
            );
        }
        digits
    }

    /// Frobenius, induced from `[r] -> [r^p]`.
    pub fn frobenius(&self) -> Self {
        Self::reduce(&self.lift().frobenius(), self.precision)
    }

    pub fn frobenius_inv(&self) -> Self {
        Self::reduce(&self.lift().frobenius_inv(), self.precision)
    }

    /// Verschiebung `V(x) = p F^{-1}(x)`.
    pub fn verschiebung(&self) -> Self {
        let p = BigInt::from(self.ctx.characteristic());
        Self::reduce(&self.lift().frobenius_inv().scale(&p), self.precision)
    }

    /// Multiplicative inverse by Newton iteration `y <- y (2 - x y)` from the
    /// Teichmüller lift of the inverse residue.
    pub fn invert(&self) -> Result<Self> {
        let n = self.precision;
        if n == 0 {
            return Ok(self.clone());
        }
        let inv = self
            .ctx
            .inverse(&self.residue())
            .ok_or(Error::NotInvertible)?;
        let two = Self::from_int(&self.ctx, 2, n);
        let mut y = Self::teichmuller(&self.ctx, inv, n);
        let mut good = 1;
        while good < n {
            let xy = self.try_mul(&y)?;
            y = y.try_mul(&two.try_sub(&xy)?)?;
            good *= 2;
        }
        if self.try_mul(&y)? != Self::one(&self.ctx, n) {
            return Err(Error::Internal("Newton iteration did not converge".into()));
        }
        Ok(y)
    }

    /// Index of the first nonzero Teichmüller digit; only defined over fields.
    pub fn valuation(&self) -> Result<Valuation> {
        if !self.ctx.is_field() {
            return Err(Error::NotAField);
        }
        let p = BigInt::from(self.ctx.characteristic());
        let v = self
            .coeffs
            .values()
            .map(|c| {
                let mut c = c.clone();
                let mut v = 0;
                while c.is_multiple_of(&p) {
                    c /= &p;
                    v += 1;
                }
                v
            })
            .min();
        Ok(match v {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(self.precision),
        })
    }

    /// The map `ZR_1/I^n -> ZR_2/I^n` induced by a coefficient homomorphism.
    pub fn induced_map(&self, h: &RingHom) -> Result<Self> {
        let mapped = self.lift().map_hom(h)?;
        Ok(Self::reduce(&mapped, self.precision))
    }
}

impl PartialEq for Truncated {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx)
            && self.precision == other.precision
            && self.coeffs == other.coeffs
    }
}

impl Eq for Truncated {}

impl fmt::Display for Truncated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            f.write_str("0")?;
        }
        for (i, (b, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            write!(f, "[{}]", self.ctx.format_basis(b))?;
        }
        write!(f, " (mod I^{})", self.precision)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl std::ops::$tr<&Truncated> for &Truncated {
            type Output = Truncated;
            /// Panics on context or precision mismatch.
            fn $m(self, rhs: &Truncated) -> Truncated {
                self.$imp(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests;
