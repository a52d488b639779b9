//! Concrete perfect F_p-algebras: finite fields given by an irreducible
//! modulus, and perfect closures `F_p[t_1^{p^-inf}, ..., t_d^{p^-inf}]`.
//!
//! Contexts are immutable once built and elements are plain values, so both
//! can be shared freely across threads. Element arithmetic goes through the
//! context, which owns the modulus or the variable names.

mod fp_poly;
mod hom;
mod literal;
mod monomial;

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

pub use fp_poly::is_prime;
pub(crate) use fp_poly::{inv_mod, mul_mod};
pub use hom::RingHom;
pub use monomial::{Exponent, Monomial};

/// Built-in moduli, low degree first: F_4, F_8, F_9, F_16, F_27.
const BUILTIN_MODULI: &[(u64, u64, &[u64])] = &[
    (4, 2, &[1, 1, 1]),
    (8, 2, &[1, 1, 0, 1]),
    (9, 3, &[2, 2, 1]),
    (16, 2, &[1, 1, 0, 0, 1]),
    (27, 3, &[1, 2, 0, 1]),
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    FiniteField { degree: usize, modulus: Vec<u64> },
    PerfectClosure { vars: Vec<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    FiniteField,
    PerfectClosure,
}

/// A validated perfect F_p-algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    p: u64,
    kind: Kind,
}

/// An element of a perfect F_p-algebra. Only meaningful together with the
/// [`AlgebraContext`] it was created in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectElement(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    /// Coefficients in the power basis `1, g, ..., g^{k-1}`.
    Finite(Vec<u64>),
    /// Monomial support with nonzero F_p coefficients.
    Closure(BTreeMap<Monomial, u64>),
}

/// Index of an element of the distinguished F_p-basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    Power(usize),
    Monomial(Monomial),
}

pub const GENERATOR: &str = "g";

impl AlgebraContext {
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::finite_field(p, vec![0, 1])
    }

    /// Finite field `F_p[x]/(modulus)`; `modulus` is listed low degree first
    /// and must be monic and irreducible.
    pub fn finite_field(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let mut modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        fp_poly::trim(&mut modulus);
        let degree = match fp_poly::degree(&modulus) {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidModulus(
                    "modulus must have degree at least 1".into(),
                ))
            }
        };
        if modulus[degree] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(literal::format_modulus(&modulus)));
        }
        Ok(AlgebraContext {
            p,
            kind: Kind::FiniteField { degree, modulus },
        })
    }

    /// Like [`finite_field`](Self::finite_field) but also checks the degree.
    pub fn finite_field_of_degree(p: u64, degree: usize, modulus: Vec<u64>) -> Result<Self> {
        let ctx = Self::finite_field(p, modulus)?;
        match ctx.degree() {
            Some(d) if d == degree => Ok(ctx),
            Some(d) => Err(Error::DegreeMismatch {
                expected: degree,
                got: d,
            }),
            None => unreachable!(),
        }
    }

    /// The field with `q` elements, using the built-in modulus table when `q`
    /// is not prime.
    pub fn builtin(q: u64) -> Result<Self> {
        if is_prime(q) {
            return Self::prime_field(q);
        }
        let (_, p, modulus) = BUILTIN_MODULI
            .iter()
            .find(|(size, _, _)| *size == q)
            .ok_or_else(|| Error::InvalidModulus(format!("no built-in modulus for q = {q}")))?;
        Self::finite_field(*p, modulus.to_vec())
    }

    pub fn perfect_closure<S: AsRef<str>>(p: u64, vars: &[S]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if vars.is_empty() {
            return Err(Error::InvalidRingSpec(
                "perfect closure needs at least one variable".into(),
            ));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidRingSpec(format!(
                    "invalid variable name `{v}`"
                )));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRingSpec(format!("duplicate variable `{v}`")));
            }
        }
        Ok(AlgebraContext {
            p,
            kind: Kind::PerfectClosure { vars },
        })
    }

    /// Parses `gf(p)`, `gf(q)`, `gf(q,modulus)` or `perfect(p;t[,u...])`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        literal::parse_ring_spec(spec)
    }

    pub fn spec_string(&self) -> String {
        match &self.kind {
            Kind::FiniteField { degree: 1, .. } => format!("gf({})", self.p),
            Kind::FiniteField { degree, modulus } => format!(
                "gf({},{})",
                self.p.pow(*degree as u32),
                literal::format_modulus(modulus)
            ),
            Kind::PerfectClosure { vars } => format!("perfect({};{})", self.p, vars.join(",")),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> AlgebraKind {
        match self.kind {
            Kind::FiniteField { .. } => AlgebraKind::FiniteField,
            Kind::PerfectClosure { .. } => AlgebraKind::PerfectClosure,
        }
    }

    pub fn is_field(&self) -> bool {
        self.kind() == AlgebraKind::FiniteField
    }

    /// Degree over F_p for finite fields.
    pub fn degree(&self) -> Option<usize> {
        match self.kind {
            Kind::FiniteField { degree, .. } => Some(degree),
            Kind::PerfectClosure { .. } => None,
        }
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        match &self.kind {
            Kind::FiniteField { modulus, .. } => Some(modulus),
            Kind::PerfectClosure { .. } => None,
        }
    }

    pub fn variables(&self) -> &[String] {
        match &self.kind {
            Kind::FiniteField { .. } => &[],
            Kind::PerfectClosure { vars } => vars,
        }
    }

    /// Number of elements, for finite fields.
    pub fn cardinality(&self) -> Option<u64> {
        self.degree().map(|k| self.p.pow(k as u32))
    }

    // ---- element construction ----

    pub fn zero(&self) -> PerfectElement {
        match &self.kind {
            Kind::FiniteField { degree, .. } => PerfectElement(Repr::Finite(vec![0; *degree])),
            Kind::PerfectClosure { .. } => PerfectElement(Repr::Closure(BTreeMap::new())),
        }
    }

    pub fn one(&self) -> PerfectElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> PerfectElement {
        let c = n.rem_euclid(self.p as i64) as u64;
        match &self.kind {
            Kind::FiniteField { degree, .. } => {
                let mut v = vec![0; *degree];
                v[0] = c;
                PerfectElement(Repr::Finite(v))
            }
            Kind::PerfectClosure { vars } => {
                let mut m = BTreeMap::new();
                if c != 0 {
                    m.insert(Monomial::one(self.p, vars.len()), c);
                }
                PerfectElement(Repr::Closure(m))
            }
        }
    }

    /// The power-basis generator `g` of a finite field of degree > 1.
    pub fn generator(&self) -> Option<PerfectElement> {
        match &self.kind {
            Kind::FiniteField { degree, .. } if *degree > 1 => {
                let mut v = vec![0; *degree];
                v[1] = 1;
                Some(PerfectElement(Repr::Finite(v)))
            }
            _ => None,
        }
    }

    /// The variable `t_i` of a perfect closure.
    pub fn variable(&self, index: usize) -> Option<PerfectElement> {
        match &self.kind {
            Kind::PerfectClosure { vars } if index < vars.len() => {
                Some(self.monomial(Monomial::variable(self.p, vars.len(), index)))
            }
            _ => None,
        }
    }

    pub fn monomial(&self, m: Monomial) -> PerfectElement {
        let mut map = BTreeMap::new();
        map.insert(m, 1);
        PerfectElement(Repr::Closure(map))
    }

    /// Shape check: does `a` belong to this context?
    pub fn contains(&self, a: &PerfectElement) -> bool {
        match (&self.kind, &a.0) {
            (Kind::FiniteField { degree, .. }, Repr::Finite(v)) => {
                v.len() == *degree && v.iter().all(|&c| c < self.p)
            }
            (Kind::PerfectClosure { vars }, Repr::Closure(m)) => m
                .iter()
                .all(|(mono, &c)| c != 0 && c < self.p && mono.exponents().len() == vars.len()),
            _ => false,
        }
    }

    pub fn check(&self, a: &PerfectElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    // ---- arithmetic ----

    pub fn is_zero(&self, a: &PerfectElement) -> bool {
        match &a.0 {
            Repr::Finite(v) => v.iter().all(|&c| c == 0),
            Repr::Closure(m) => m.is_empty(),
        }
    }

    pub fn add(&self, a: &PerfectElement, b: &PerfectElement) -> PerfectElement {
        let p = self.p;
        match (&a.0, &b.0) {
            (Repr::Finite(x), Repr::Finite(y)) => PerfectElement(Repr::Finite(
                x.iter().zip(y).map(|(u, v)| (u + v) % p).collect(),
            )),
            (Repr::Closure(x), Repr::Closure(y)) => {
                let mut out = x.clone();
                for (m, &c) in y {
                    add_closure_term(&mut out, m.clone(), c, p);
                }
                PerfectElement(Repr::Closure(out))
            }
            _ => panic!("{}", Error::ContextMismatch),
        }
    }

    pub fn neg(&self, a: &PerfectElement) -> PerfectElement {
        self.scale(a, self.p - 1)
    }

    pub fn sub(&self, a: &PerfectElement, b: &PerfectElement) -> PerfectElement {
        self.add(a, &self.neg(b))
    }

    /// Multiplies by the scalar `c mod p`.
    pub fn scale(&self, a: &PerfectElement, c: u64) -> PerfectElement {
        let p = self.p;
        let c = c % p;
        match &a.0 {
            Repr::Finite(v) => {
                PerfectElement(Repr::Finite(v.iter().map(|&x| mul_mod(x, c, p)).collect()))
            }
            Repr::Closure(m) => PerfectElement(Repr::Closure(if c == 0 {
                BTreeMap::new()
            } else {
                m.iter()
                    .map(|(k, &x)| (k.clone(), mul_mod(x, c, p)))
                    .collect()
            })),
        }
    }

    pub fn mul(&self, a: &PerfectElement, b: &PerfectElement) -> PerfectElement {
        let p = self.p;
        match (&self.kind, &a.0, &b.0) {
            (Kind::FiniteField { degree, modulus }, Repr::Finite(x), Repr::Finite(y)) => {
                let k = *degree;
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, &u) in x.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (j, &v) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + mul_mod(u, v, p)) % p;
                    }
                }
                for top in (k..prod.len()).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate().take(k) {
                        let idx = top - k + i;
                        prod[idx] = (prod[idx] + p - mul_mod(c, m, p)) % p;
                    }
                    prod[top] = 0;
                }
                prod.truncate(k);
                PerfectElement(Repr::Finite(prod))
            }
            (Kind::PerfectClosure { .. }, Repr::Closure(x), Repr::Closure(y)) => {
                let mut out = BTreeMap::new();
                for (mx, &cx) in x {
                    for (my, &cy) in y {
                        add_closure_term(&mut out, mx.mul(my), mul_mod(cx, cy, p), p);
                    }
                }
                PerfectElement(Repr::Closure(out))
            }
            _ => panic!("{}", Error::ContextMismatch),
        }
    }

    pub fn pow(&self, a: &PerfectElement, mut exp: u64) -> PerfectElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^p`.
    pub fn frobenius(&self, a: &PerfectElement) -> PerfectElement {
        match &a.0 {
            Repr::Finite(_) => self.pow(a, self.p),
            Repr::Closure(m) => PerfectElement(Repr::Closure(
                m.iter().map(|(k, &c)| (k.pow(self.p), c)).collect(),
            )),
        }
    }

    /// The unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: &PerfectElement) -> PerfectElement {
        match (&self.kind, &a.0) {
            (Kind::FiniteField { degree, .. }, Repr::Finite(_)) => {
                // Frobenius has order k on F_{p^k}
                let mut r = a.clone();
                for _ in 1..*degree {
                    r = self.frobenius(&r);
                }
                r
            }
            (Kind::PerfectClosure { .. }, Repr::Closure(m)) => PerfectElement(Repr::Closure(
                m.iter().map(|(k, &c)| (k.pth_root(), c)).collect(),
            )),
            _ => panic!("{}", Error::ContextMismatch),
        }
    }

    /// `a^{p^{-i}}`.
    pub fn pth_root_iter(&self, a: &PerfectElement, i: u32) -> PerfectElement {
        (0..i).fold(a.clone(), |acc, _| self.pth_root(&acc))
    }

    /// `a^{p^i}`.
    pub fn frobenius_iter(&self, a: &PerfectElement, i: u32) -> PerfectElement {
        (0..i).fold(a.clone(), |acc, _| self.frobenius(&acc))
    }

    /// Multiplicative inverse, when `a` is a unit.
    pub fn inverse(&self, a: &PerfectElement) -> Option<PerfectElement> {
        if self.is_zero(a) {
            return None;
        }
        match &a.0 {
            Repr::Finite(_) => {
                let q = self.cardinality().expect("finite field");
                Some(self.pow(a, q - 2))
            }
            Repr::Closure(m) => {
                // units of the perfect closure are the nonzero constants
                let (mono, &c) = m.iter().next()?;
                (m.len() == 1 && mono.is_one()).then(|| self.from_int(inv_mod(c, self.p) as i64))
            }
        }
    }

    // ---- basis ----

    /// Coordinates of `a` in the distinguished basis, in basis order, zero
    /// coordinates omitted.
    pub fn decompose(&self, a: &PerfectElement) -> Vec<(BasisIndex, u64)> {
        match &a.0 {
            Repr::Finite(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (BasisIndex::Power(i), c))
                .collect(),
            Repr::Closure(m) => m
                .iter()
                .map(|(k, &c)| (BasisIndex::Monomial(k.clone()), c))
                .collect(),
        }
    }

    pub fn basis_element(&self, index: &BasisIndex) -> PerfectElement {
        match (&self.kind, index) {
            (Kind::FiniteField { degree, .. }, BasisIndex::Power(i)) if i < degree => {
                let mut v = vec![0; *degree];
                v[*i] = 1;
                PerfectElement(Repr::Finite(v))
            }
            (Kind::PerfectClosure { .. }, BasisIndex::Monomial(m)) => self.monomial(m.clone()),
            _ => panic!(
                "basis index {index:?} does not belong to {}",
                self.spec_string()
            ),
        }
    }

    pub fn compose(&self, coords: &[(BasisIndex, u64)]) -> PerfectElement {
        coords.iter().fold(self.zero(), |acc, (b, c)| {
            self.add(&acc, &self.scale(&self.basis_element(b), *c))
        })
    }

    /// Size of the basis, for finite fields.
    pub fn basis_len(&self) -> Option<usize> {
        self.degree()
    }

    /// The whole basis, for finite fields, in basis order.
    pub fn basis(&self) -> Option<Vec<BasisIndex>> {
        self.degree()
            .map(|k| (0..k).map(BasisIndex::Power).collect())
    }

    pub fn format_basis(&self, index: &BasisIndex) -> String {
        match index {
            BasisIndex::Power(0) => "1".to_string(),
            BasisIndex::Power(1) => GENERATOR.to_string(),
            BasisIndex::Power(i) => format!("{GENERATOR}^{i}"),
            BasisIndex::Monomial(m) => {
                let mut s = String::new();
                m.write(self.variables(), &mut s)
                    .expect("writing to a String");
                s
            }
        }
    }

    // ---- enumeration ----

    /// Index of a finite-field element: `sum c_i p^i`.
    pub fn element_index(&self, a: &PerfectElement) -> Option<u64> {
        match &a.0 {
            Repr::Finite(v) => Some(v.iter().rev().fold(0, |acc, &c| acc * self.p + c)),
            Repr::Closure(_) => None,
        }
    }

    pub fn element_from_index(&self, mut index: u64) -> Option<PerfectElement> {
        let k = self.degree()?;
        if index >= self.cardinality()? {
            return None;
        }
        let mut v = vec![0; k];
        for c in v.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        Some(PerfectElement(Repr::Finite(v)))
    }

    /// All elements of a finite field, ordered by [`element_index`](Self::element_index).
    pub fn elements(&self) -> Option<Vec<PerfectElement>> {
        let q = self.cardinality()?;
        Some(
            (0..q)
                .map(|i| self.element_from_index(i).expect("index in range"))
                .collect(),
        )
    }

    /// A random element. Perfect-closure samples have at most three terms with
    /// small exponents and denominators up to `p^2`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> PerfectElement {
        match &self.kind {
            Kind::FiniteField { degree, .. } => PerfectElement(Repr::Finite(
                (0..*degree).map(|_| rng.gen_range(0..self.p)).collect(),
            )),
            Kind::PerfectClosure { vars } => {
                let mut m = BTreeMap::new();
                for _ in 0..rng.gen_range(0..=3) {
                    let exps = (0..vars.len())
                        .map(|_| Exponent::new(rng.gen_range(0..4), rng.gen_range(0..=2), self.p))
                        .collect();
                    add_closure_term(
                        &mut m,
                        Monomial::from_exponents(self.p, exps),
                        rng.gen_range(1..self.p),
                        self.p,
                    );
                }
                PerfectElement(Repr::Closure(m))
            }
        }
    }

    /// A random bracketed basis monomial of a perfect closure.
    pub fn random_monomial<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Monomial> {
        let vars = self.variables().len();
        (self.kind() == AlgebraKind::PerfectClosure).then(|| {
            let exps = (0..vars)
                .map(|_| Exponent::new(rng.gen_range(0..4), rng.gen_range(0..=2), self.p))
                .collect();
            Monomial::from_exponents(self.p, exps)
        })
    }

    // ---- text ----

    pub fn parse_element(&self, src: &str) -> Result<PerfectElement> {
        literal::parse_element(self, src)
    }

    pub(crate) fn parse_element_tokens(
        &self,
        toks: &[crate::text::Token],
        end: usize,
    ) -> Result<PerfectElement> {
        literal::parse_element_tokens(self, toks, end)
    }

    pub fn format_element(&self, a: &PerfectElement) -> String {
        literal::format_element(self, a)
    }

    pub fn display<'a>(&'a self, a: &'a PerfectElement) -> impl fmt::Display + 'a {
        struct D<'a>(&'a AlgebraContext, &'a PerfectElement);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format_element(self.1))
            }
        }
        D(self, a)
    }
}

impl PerfectElement {
    /// Monomial support of a perfect-closure element, `None` for finite fields.
    pub fn monomial_terms(&self) -> Option<&BTreeMap<Monomial, u64>> {
        match &self.0 {
            Repr::Closure(m) => Some(m),
            Repr::Finite(_) => None,
        }
    }

    /// Power-basis coefficients of a finite-field element.
    pub fn power_coefficients(&self) -> Option<&[u64]> {
        match &self.0 {
            Repr::Finite(v) => Some(v),
            Repr::Closure(_) => None,
        }
    }
}

fn add_closure_term(map: &mut BTreeMap<Monomial, u64>, m: Monomial, c: u64, p: u64) {
    if c.is_multiple_of(p) {
        return;
    }
    let entry = map.entry(m);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c % p);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = (*o.get() + c) % p;
            if s == 0 {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}
