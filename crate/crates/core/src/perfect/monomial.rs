//! Monomials with nonnegative exponents in Z[1/p], the basis of a perfect
//! polynomial closure.

use std::cmp::Ordering;
use std::fmt;

/// The rational `num / p^den_exp`, normalized so that `p` does not divide
/// `num` unless `den_exp == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    num: u64,
    den_exp: u32,
}

fn p_pow(p: u64, e: u32) -> u128 {
    (p as u128)
        .checked_pow(e)
        .expect("exponent denominator overflows u128")
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { num: 0, den_exp: 0 };

    pub fn new(num: u64, den_exp: u32, p: u64) -> Self {
        let mut e = Exponent { num, den_exp };
        e.normalize(p);
        e
    }

    pub fn integer(num: u64) -> Self {
        Exponent { num, den_exp: 0 }
    }

    fn normalize(&mut self, p: u64) {
        if self.num == 0 {
            self.den_exp = 0;
            return;
        }
        while self.den_exp > 0 && self.num.is_multiple_of(p) {
            self.num /= p;
            self.den_exp -= 1;
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.den_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Numerator scaled to the denominator `p^den_exp`.
    fn scaled(&self, den_exp: u32, p: u64) -> u128 {
        (self.num as u128)
            .checked_mul(p_pow(p, den_exp - self.den_exp))
            .expect("exponent numerator overflows u128")
    }

    pub fn add(self, other: Exponent, p: u64) -> Exponent {
        let d = self.den_exp.max(other.den_exp);
        let n = self.scaled(d, p) + other.scaled(d, p);
        Exponent::new(u64::try_from(n).expect("exponent overflows u64"), d, p)
    }

    pub fn mul_int(self, k: u64, p: u64) -> Exponent {
        let n = self.num.checked_mul(k).expect("exponent overflows u64");
        Exponent::new(n, self.den_exp, p)
    }

    pub fn div_p(self, p: u64) -> Exponent {
        if self.num == 0 {
            return self;
        }
        Exponent::new(self.num, self.den_exp + 1, p)
    }

    pub fn cmp_with(&self, other: &Exponent, p: u64) -> Ordering {
        let d = self.den_exp.max(other.den_exp);
        self.scaled(d, p).cmp(&other.scaled(d, p))
    }
}

/// A monomial `t_1^{e_1} ... t_d^{e_d}` over a fixed prime.
///
/// Ordered graded-lexicographically: by total degree, then by the exponent of
/// the first variable, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    p: u64,
    exps: Vec<Exponent>,
}

impl Monomial {
    pub fn one(p: u64, vars: usize) -> Self {
        Monomial {
            p,
            exps: vec![Exponent::ZERO; vars],
        }
    }

    pub fn from_exponents(p: u64, exps: Vec<Exponent>) -> Self {
        Monomial { p, exps }
    }

    pub fn variable(p: u64, vars: usize, index: usize) -> Self {
        let mut m = Monomial::one(p, vars);
        m.exps[index] = Exponent::integer(1);
        m
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(Exponent::is_zero)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.add(*b, self.p))
            .collect();
        Monomial { p: self.p, exps }
    }

    pub fn pow(&self, k: u64) -> Monomial {
        let exps = self.exps.iter().map(|e| e.mul_int(k, self.p)).collect();
        Monomial { p: self.p, exps }
    }

    pub fn pth_root(&self) -> Monomial {
        let exps = self.exps.iter().map(|e| e.div_p(self.p)).collect();
        Monomial { p: self.p, exps }
    }

    fn total_degree(&self) -> (u128, u32) {
        let d = self.exps.iter().map(|e| e.den_exp).max().unwrap_or(0);
        let n = self.exps.iter().map(|e| e.scaled(d, self.p)).sum();
        (n, d)
    }

    /// Writes the monomial with the given variable names, `1` when trivial.
    pub fn write(&self, names: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (e, name) in self.exps.iter().zip(names) {
            if e.is_zero() {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(name)?;
            match (e.num, e.den_exp) {
                (1, 0) => {}
                (n, 0) => write!(f, "^{n}")?,
                (n, d) => write!(f, "^({n}/{})", p_pow(self.p, d))?,
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (na, da) = self.total_degree();
        let (nb, db) = other.total_degree();
        let d = da.max(db);
        let lhs = na * p_pow(self.p, d - da);
        let rhs = nb * p_pow(self.p, d - db);
        lhs.cmp(&rhs).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps) {
                match a.cmp_with(b, self.p) {
                    Ordering::Equal => continue,
                    // larger leading exponent sorts later
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let e = Exponent::new(4, 2, 2);
        assert_eq!(e, Exponent::integer(1));
        let half = Exponent::new(1, 1, 2);
        assert_eq!(half.add(half, 2), Exponent::integer(1));
        assert_eq!(Exponent::integer(1).div_p(3), Exponent::new(1, 1, 3));
        assert_eq!(Exponent::new(0, 5, 2), Exponent::ZERO);
    }

    #[test]
    fn graded_lex_order() {
        let p = 2;
        let t = Monomial::variable(p, 2, 0);
        let u = Monomial::variable(p, 2, 1);
        let one = Monomial::one(p, 2);
        let sqrt_t = t.pth_root();
        assert!(one < sqrt_t);
        assert!(sqrt_t < t);
        assert!(u < t);
        assert!(t < t.mul(&sqrt_t));
        assert!(t.mul(&u) > t);
    }

    #[test]
    fn printing() {
        let names = vec!["t".to_string(), "u".to_string()];
        let m = Monomial::variable(2, 2, 0)
            .pth_root()
            .mul(&Monomial::variable(2, 2, 1).pow(3));
        let mut s = String::new();
        m.write(&names, &mut s).unwrap();
        assert_eq!(s, "t^(1/2)*u^3");
    }
}
