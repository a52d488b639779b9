//! Classical truncated p-typical Witt vectors, built from the universal
//! structure polynomials, and the comparison maps from `ℤR/Iⁿ`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::monoid::same_context;
use crate::perfect::is_prime;
use crate::perfect::{AlgebraContext, PerfectElement};
use crate::truncated::{p_power, Truncated};

mod poly;
pub use poly::IntPolynomial;


pub const MAX_LENGTH: u32 = 4;
pub const MAX_PRIME: u64 = 5;

/// `w_m = Σ_{i≤m} pⁱ vᵢ^{p^{m−i}}` evaluated on the given polynomials.
pub fn ghost_polynomial(p: u64, m: usize, vars: &[IntPolynomial]) -> IntPolynomial {
    let mut acc = IntPolynomial::zero(vars[0].nvars());
    for (i, v) in vars.iter().enumerate().take(m + 1) {
        let e = (p as u32).pow((m - i) as u32);
        acc = &acc + &v.pow(e).scale(&p_power(p, i as u32));
    }
    acc
}

/// Structure polynomials for `W_n` over ℤ in the variables
/// `X₀..X_{n−1}, Y₀..Y_{n−1}`.
#[derive(Clone, Debug)]
pub struct WittContext {
    p: u64,
    n: u32,
    sum: Vec<IntPolynomial>,
    product: Vec<IntPolynomial>,
    negation: Vec<IntPolynomial>,
}

impl WittContext {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidPrecision(
                "Witt vectors need length at least 1".into(),
            ));
        }
        if n > MAX_LENGTH || p > MAX_PRIME {
            return Err(Error::Unsupported(format!(
                "Witt structure polynomials are limited to p <= {MAX_PRIME}, n <= {MAX_LENGTH}"
            )));
        }
        let len = n as usize;
        let vars = 2 * len;
        let xs: Vec<_> = (0..len).map(|i| IntPolynomial::variable(vars, i)).collect();
        let ys: Vec<_> = (0..len)
            .map(|i| IntPolynomial::variable(vars, len + i))
            .collect();
        let gx: Vec<_> = (0..len).map(|m| ghost_polynomial(p, m, &xs)).collect();
        let gy: Vec<_> = (0..len).map(|m| ghost_polynomial(p, m, &ys)).collect();

        let sum = solve_ghost(p, gx.iter().zip(&gy).map(|(a, b)| a + b))?;
        let product = solve_ghost(p, gx.iter().zip(&gy).map(|(a, b)| a * b))?;
        let negation = if p == 2 {
            solve_ghost(p, gx.iter().map(|a| -a))?
        } else {
            xs.iter().map(|x| -x).collect()
        };
        Ok(Self {
            p,
            n,
            sum,
            product,
            negation,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn length(&self) -> u32 {
        self.n
    }

    pub fn sum_polynomials(&self) -> &[IntPolynomial] {
        &self.sum
    }

    pub fn product_polynomials(&self) -> &[IntPolynomial] {
        &self.product
    }

    pub fn negation_polynomials(&self) -> &[IntPolynomial] {
        &self.negation
    }

    /// `X0, …, X{n−1}, Y0, …, Y{n−1}`.
    pub fn variable_names(&self) -> Vec<String> {
        let n = self.n as usize;
        (0..n)
            .map(|i| format!("X{i}"))
            .chain((0..n).map(|i| format!("Y{i}")))
            .collect()
    }

    /// The `X` and `Y` variables as polynomials.
    pub fn variables(&self) -> (Vec<IntPolynomial>, Vec<IntPolynomial>) {
        let n = self.n as usize;
        let xs = (0..n).map(|i| IntPolynomial::variable(2 * n, i)).collect();
        let ys = (0..n)
            .map(|i| IntPolynomial::variable(2 * n, n + i))
            .collect();
        (xs, ys)
    }

    /// Re-derives the defining ghost identities symbolically over ℤ.
    pub fn check_ghost_identities(&self) -> bool {
        let (xs, ys) = self.variables();
        (0..self.n as usize).all(|m| {
            let (wx, wy) = (
                ghost_polynomial(self.p, m, &xs),
                ghost_polynomial(self.p, m, &ys),
            );
            ghost_polynomial(self.p, m, &self.sum) == &wx + &wy
                && ghost_polynomial(self.p, m, &self.product) == &wx * &wy
                && ghost_polynomial(self.p, m, &self.negation) == -&wx
        })
    }
}

fn solve_ghost(p: u64, targets: impl Iterator<Item = IntPolynomial>) -> Result<Vec<IntPolynomial>> {
    let mut out: Vec<IntPolynomial> = Vec::new();
    for (m, target) in targets.enumerate() {
        let mut rest = target;
        for (i, s) in out.iter().enumerate() {
            let e = (p as u32).pow((m - i) as u32);
            rest = &rest - &s.pow(e).scale(&p_power(p, i as u32));
        }
        let next = rest.div_exact(&p_power(p, m as u32)).ok_or_else(|| {
            Error::Internal(format!("ghost component {m} is not divisible by p^{m}"))
        })?;
        out.push(next);
    }
    Ok(out)
}

/// A point of `W_n(R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    ctx: Arc<AlgebraContext>,
    coords: Vec<PerfectElement>,
}

impl WittVector {
    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[PerfectElement] {
        &self.coords
    }

    pub fn formatted_coords(&self) -> Vec<String> {
        self.coords
            .iter()
            .map(|c| self.ctx.format_element(c))
            .collect()
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.formatted_coords().join(", "))
    }
}

/// `W_n(R)` for a concrete coefficient algebra.
#[derive(Clone, Debug)]
pub struct WittRing {
    algebra: Arc<AlgebraContext>,
    polys: Arc<WittContext>,
}

impl WittRing {
    pub fn new(algebra: &Arc<AlgebraContext>, n: u32) -> Result<Self> {
        let polys = Arc::new(WittContext::new(algebra.characteristic(), n)?);
        Ok(Self {
            algebra: algebra.clone(),
            polys,
        })
    }

    pub fn with_polynomials(
        algebra: &Arc<AlgebraContext>,
        polys: Arc<WittContext>,
    ) -> Result<Self> {
        if polys.characteristic() != algebra.characteristic() {
            return Err(Error::ContextMismatch);
        }
        Ok(Self {
            algebra: algebra.clone(),
            polys,
        })
    }

    pub fn algebra(&self) -> &Arc<AlgebraContext> {
        &self.algebra
    }

    pub fn polynomials(&self) -> &Arc<WittContext> {
        &self.polys
    }

    pub fn length(&self) -> u32 {
        self.polys.length()
    }

    pub fn vector(&self, coords: Vec<PerfectElement>) -> Result<WittVector> {
        if coords.len() != self.length() as usize {
            return Err(Error::LengthMismatch {
                left: self.length() as usize,
                right: coords.len(),
            });
        }
        for c in &coords {
            self.algebra.check(c)?;
        }
        Ok(WittVector {
            ctx: self.algebra.clone(),
            coords,
        })
    }

    fn check(&self, u: &WittVector) -> Result<()> {
        if !same_context(&self.algebra, &u.ctx) {
            return Err(Error::ContextMismatch);
        }
        if u.len() != self.length() as usize {
            return Err(Error::LengthMismatch {
                left: self.length() as usize,
                right: u.len(),
            });
        }
        Ok(())
    }

    fn wrap(&self, coords: Vec<PerfectElement>) -> WittVector {
        WittVector {
            ctx: self.algebra.clone(),
            coords,
        }
    }

    fn apply(&self, polys: &[IntPolynomial], u: &WittVector, v: Option<&WittVector>) -> WittVector {
        let filler = vec![self.algebra.zero(); u.len()];
        let values: Vec<PerfectElement> = u
            .coords
            .iter()
            .chain(v.map_or(&filler, |v| &v.coords))
            .cloned()
            .collect();
        self.wrap(
            polys
                .iter()
                .map(|f| f.eval_in(&self.algebra, &values))
                .collect(),
        )
    }

    pub fn zero(&self) -> WittVector {
        self.wrap(vec![self.algebra.zero(); self.length() as usize])
    }

    pub fn one(&self) -> WittVector {
        self.teichmuller(self.algebra.one())
    }

    /// `(r, 0, …, 0)`.
    pub fn teichmuller(&self, r: PerfectElement) -> WittVector {
        let mut coords = vec![self.algebra.zero(); self.length() as usize];
        coords[0] = r;
        self.wrap(coords)
    }

    pub fn add(&self, u: &WittVector, v: &WittVector) -> Result<WittVector> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.apply(&self.polys.sum, u, Some(v)))
    }

    pub fn mul(&self, u: &WittVector, v: &WittVector) -> Result<WittVector> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.apply(&self.polys.product, u, Some(v)))
    }

    pub fn neg(&self, u: &WittVector) -> Result<WittVector> {
        self.check(u)?;
        Ok(self.apply(&self.polys.negation, u, None))
    }

    pub fn sub(&self, u: &WittVector, v: &WittVector) -> Result<WittVector> {
        self.add(u, &self.neg(v)?)
    }

    /// `k·u` by double-and-add.
    pub fn scalar_mul(&self, k: &BigInt, u: &WittVector) -> Result<WittVector> {
        self.check(u)?;
        let mut base = if k.is_negative() {
            self.neg(u)?
        } else {
            u.clone()
        };
        let mut k = k.abs();
        let mut acc = self.zero();
        let two = BigInt::from(2);
        while !k.is_zero() {
            let (q, r) = k.div_rem(&two);
            if !r.is_zero() {
                acc = self.apply(&self.polys.sum, &acc, Some(&base));
            }
            k = q;
            if !k.is_zero() {
                base = self.apply(&self.polys.sum, &base, Some(&base));
            }
        }
        Ok(acc)
    }

    pub fn from_int(&self, k: &BigInt) -> WittVector {
        self.scalar_mul(k, &self.one())
            .expect("one has the right shape")
    }

    /// Coordinatewise p-th power.
    pub fn frobenius(&self, u: &WittVector) -> Result<WittVector> {
        self.check(u)?;
        Ok(self.wrap(u.coords.iter().map(|c| self.algebra.frobenius(c)).collect()))
    }

    /// `Σ_b c_b · τ(b)` over the canonical coefficients of `x`.
    pub fn alpha(&self, x: &Truncated) -> Result<WittVector> {
        if !same_context(&self.algebra, x.context()) {
            return Err(Error::ContextMismatch);
        }
        if x.precision() != self.length() {
            return Err(Error::PrecisionMismatch {
                left: x.precision(),
                right: self.length(),
            });
        }
        let mut acc = self.zero();
        for (b, c) in x.coefficients() {
            let t = self.teichmuller(self.algebra.basis_element(b));
            acc = self.add(&acc, &self.scalar_mul(c, &t)?)?;
        }
        Ok(acc)
    }

    /// Inverse of [`WittRing::alpha`]: digit `i` is the `i`-fold p-th root of
    /// coordinate `i`.
    pub fn alpha_inverse(&self, u: &WittVector) -> Result<Truncated> {
        self.check(u)?;
        let digits: Vec<PerfectElement> = u
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| self.algebra.pth_root_iter(c, i as u32))
            .collect();
        Ok(Truncated::from_digits(&self.algebra, &digits))
    }
}

/// `x ↦ (π(x), π(δ(x)))` on `ℤR/I²`, evaluated on the canonical lift.
pub fn alpha2(x: &Truncated) -> Result<WittVector> {
    if x.precision() != 2 {
        return Err(Error::PrecisionMismatch {
            left: x.precision(),
            right: 2,
        });
    }
    let lift = x.lift();
    let ctx = x.context().clone();
    let coords = vec![lift.augmentation(), lift.delta().augmentation()];
    Ok(WittVector { ctx, coords })
}
