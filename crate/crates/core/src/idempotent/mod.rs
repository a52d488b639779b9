//! The idempotent of `ℤ_p R` cutting out the kernel of `ℤ_p R → C(R)` for a
//! finite perfect `R` (i.e. a finite field), computed at precision `pⁿ`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::monoid::MonoidElement;
use crate::perfect::{AlgebraContext, PerfectElement};
use crate::truncated::Truncated;

mod howell;
use howell::{mul_mod, unit_inverse, unit_vector};
pub use howell::{nullspace_mod_p, solve_mod_p, ResidueModule};

#[cfg(test)]
mod tests;

/// `(ℤ/pⁿ)R` for finite `R`, elements stored densely by element index.
#[derive(Clone, Debug)]
pub struct ResidueAlgebra {
    ctx: Arc<AlgebraContext>,
    n: u32,
    modulus: u64,
    elements: Vec<PerfectElement>,
    table: Vec<Vec<usize>>,
}

impl ResidueAlgebra {
    pub fn new(ctx: &Arc<AlgebraContext>, n: u32) -> Result<Self> {
        let elements = ctx.elements().ok_or(Error::InfiniteRing)?;
        if n == 0 {
            return Err(Error::InvalidPrecision(
                "precision must be at least 1".into(),
            ));
        }
        let p = ctx.characteristic();
        let modulus = p
            .checked_pow(n)
            .filter(|m| *m < 1 << 62)
            .ok_or_else(|| Error::InvalidPrecision(format!("p^{n} is too large")))?;
        let index =
            |r: &PerfectElement| ctx.element_index(r).expect("finite ring element") as usize;
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index(&ctx.mul(a, b))).collect())
            .collect();
        Ok(Self {
            ctx: ctx.clone(),
            n,
            modulus,
            elements,
            table,
        })
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[PerfectElement] {
        &self.elements
    }

    pub fn index_of(&self, r: &PerfectElement) -> usize {
        self.ctx.element_index(r).expect("finite ring element") as usize
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn bracket(&self, r: &PerfectElement) -> Vec<u64> {
        unit_vector(self.rank(), self.index_of(r))
    }

    pub fn one(&self) -> Vec<u64> {
        self.bracket(&self.ctx.one())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y) % self.modulus)
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.modulus - y) % self.modulus)
            .collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter()
            .map(|&x| mul_mod(x, k % self.modulus, self.modulus))
            .collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.modulus as u128;
        let mut acc = vec![0u128; self.rank()];
        for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                let slot = &mut acc[self.table[i][j]];
                *slot = (*slot + x as u128 * y as u128) % m;
            }
        }
        acc.into_iter().map(|x| x as u64).collect()
    }

    pub fn from_monoid(&self, x: &MonoidElement) -> Vec<u64> {
        let m = BigInt::from(self.modulus);
        let mut out = self.zero();
        for (r, c) in x.terms() {
            let c: u64 = c.mod_floor(&m).try_into().expect("residue fits");
            let i = self.index_of(r);
            out[i] = (out[i] + c) % self.modulus;
        }
        out
    }

    pub fn to_monoid(&self, a: &[u64]) -> MonoidElement {
        MonoidElement::from_terms(
            &self.ctx,
            a.iter()
                .zip(&self.elements)
                .filter(|(c, _)| **c != 0)
                .map(|(&c, r)| (r.clone(), BigInt::from(c))),
        )
    }

    /// `"5*[1] + 5*[2] (mod 9)"`, terms in element-index order.
    pub fn format(&self, a: &[u64]) -> String {
        let terms: Vec<String> = a
            .iter()
            .zip(&self.elements)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, r)| {
                let r = self.ctx.format_element(r);
                if c == 1 {
                    format!("[{r}]")
                } else {
                    format!("{c}*[{r}]")
                }
            })
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        format!("{body} (mod {})", self.modulus)
    }

    /// Canonical `ℤR/Iⁿ` coordinates of `a`, in basis order.
    pub fn reduce_coordinates(&self, a: &[u64]) -> Vec<u64> {
        let t = Truncated::reduce(&self.to_monoid(a), self.n);
        let basis = self.ctx.basis().expect("finite ring has a basis");
        basis
            .iter()
            .map(|b| {
                t.coefficient(b)
                    .try_into()
                    .expect("canonical coefficient fits")
            })
            .collect()
    }

    fn span(&self, gens: impl IntoIterator<Item = Vec<u64>>) -> ResidueModule {
        ResidueModule::span(self.ctx.characteristic(), self.n, self.rank(), gens)
    }

    fn ideal_products(&self, m: &ResidueModule, gens: &[Vec<u64>]) -> ResidueModule {
        self.span(
            m.rows()
                .iter()
                .flat_map(|a| gens.iter().map(move |g| self.mul(a, g))),
        )
    }
}

fn fp_kernel_lifts(alg: &ResidueAlgebra) -> Vec<Vec<u64>> {
    let ctx = &alg.ctx;
    let basis = ctx.basis().expect("finite ring has a basis");
    let columns: Vec<Vec<u64>> = alg
        .elements
        .iter()
        .map(|r| {
            let coords = ctx.decompose(r);
            basis
                .iter()
                .map(|b| coords.iter().find(|(c, _)| c == b).map_or(0, |(_, k)| *k))
                .collect()
        })
        .collect();
    nullspace_mod_p(ctx.characteristic(), basis.len(), &columns)
}

/// Image of `I` in `(ℤ/pⁿ)R`, computed both as `{x : π(x) = 0}` and as the
/// span of the additivity relations together with `p·1`.
pub fn kernel_ideal_mod_pn(ctx: &Arc<AlgebraContext>, n: u32) -> Result<ResidueModule> {
    let alg = ResidueAlgebra::new(ctx, n)?;
    let p = ctx.characteristic();
    let by_kernel = alg.span(
        fp_kernel_lifts(&alg)
            .into_iter()
            .chain((0..alg.rank()).map(|i| alg.scale(&unit_vector(alg.rank(), i), p))),
    );
    let mut relations = vec![alg.scale(&alg.one(), p)];
    for r in &alg.elements {
        for s in &alg.elements {
            let rel = alg.sub(
                &alg.add(&alg.bracket(r), &alg.bracket(s)),
                &alg.bracket(&ctx.add(r, s)),
            );
            relations.push(rel);
        }
    }
    let by_relations = alg.span(relations);
    if by_kernel != by_relations {
        return Err(Error::Internal(
            "the two descriptions of the augmentation ideal disagree".into(),
        ));
    }
    Ok(by_kernel)
}

/// Image of `Iⁿ` in `(ℤ/pⁿ)R`, as `Jⁿ` for the ideal `J` generated by lifts
/// of the mod-p kernel. Since `I = J + pℤR`, `I^{2n} ⊂ Jⁿ + pⁿℤR`, and
/// `Iⁿ = I^{2n} + pⁿℤR`, this is the whole image.
pub fn power_ideal_by_products(alg: &ResidueAlgebra) -> ResidueModule {
    let lifts = fp_kernel_lifts(alg);
    let brackets: Vec<Vec<u64>> = (0..alg.rank())
        .map(|i| unit_vector(alg.rank(), i))
        .collect();
    let mut m = alg.span(
        lifts
            .iter()
            .flat_map(|g| brackets.iter().map(|b| alg.mul(g, b))),
    );
    for _ in 1..alg.n {
        m = alg.ideal_products(&m, &lifts);
    }
    m
}

/// Image of `Iⁿ` in `(ℤ/pⁿ)R` as the kernel of the reduction to `ℤR/Iⁿ`:
/// spanned by `[r] − (canonical form of [r])`.
pub fn power_ideal_by_reduction(alg: &ResidueAlgebra) -> ResidueModule {
    alg.span(alg.elements.iter().map(|r| {
        let canonical = Truncated::reduce(&MonoidElement::bracket(&alg.ctx, r.clone()), alg.n);
        alg.sub(&alg.bracket(r), &alg.from_monoid(&canonical.lift()))
    }))
}

/// Both constructions of the image of `Iⁿ`; errors if they disagree.
pub fn power_ideal(alg: &ResidueAlgebra) -> Result<ResidueModule> {
    let a = power_ideal_by_products(alg);
    let b = power_ideal_by_reduction(alg);
    if a != b {
        return Err(Error::Internal(
            "the two descriptions of the image of I^n disagree".into(),
        ));
    }
    Ok(a)
}

/// The element `e₁` of `A₁` acting as the identity on `A₁`.
pub fn unit_idempotent_mod_p(alg: &ResidueAlgebra, a1: &ResidueModule) -> Result<Vec<u64>> {
    let p = alg.ctx.characteristic();
    if alg.modulus != p {
        return Err(Error::PrecisionMismatch {
            left: alg.n,
            right: 1,
        });
    }
    let basis = a1.rows();
    if basis.is_empty() {
        return Ok(alg.zero());
    }
    // unknowns λ_i; equations (Σ λ_i b_i)·g = g for every generator g
    let mut a = Vec::new();
    let mut rhs = Vec::new();
    for g in basis {
        let products: Vec<Vec<u64>> = basis.iter().map(|b| alg.mul(b, g)).collect();
        for coord in 0..alg.rank() {
            a.push(products.iter().map(|v| v[coord]).collect());
            rhs.push(g[coord]);
        }
    }
    let lambda = solve_mod_p(p, &a, &rhs)
        .ok_or_else(|| Error::Internal("the mod-p kernel has no unit element".into()))?;
    let mut e = alg.zero();
    for (l, b) in lambda.iter().zip(basis) {
        e = alg.add(&e, &alg.scale(b, *l));
    }
    Ok(e)
}

/// Iterates `e ← 3e² − 2e³` to the idempotent lifting `e₁`.
pub fn newton_lift_idempotent(alg: &ResidueAlgebra, e1: &[u64]) -> Vec<u64> {
    let steps = (u32::BITS - (alg.n.max(1) - 1).leading_zeros()) + 1;
    let mut e: Vec<u64> = e1.iter().map(|x| x % alg.modulus).collect();
    for _ in 0..steps {
        let e2 = alg.mul(&e, &e);
        let e3 = alg.mul(&e2, &e);
        e = alg.sub(&alg.scale(&e2, 3), &alg.scale(&e3, 2));
    }
    e
}

/// Everything computed for one `(R, n)`.
#[derive(Clone, Debug)]
pub struct Idempotent {
    pub algebra: ResidueAlgebra,
    pub kernel_mod_p: ResidueModule,
    pub e1: Vec<u64>,
    pub power_ideal: ResidueModule,
    pub e: Vec<u64>,
}

impl Idempotent {
    pub fn compute(ctx: &Arc<AlgebraContext>, n: u32) -> Result<Self> {
        let algebra = ResidueAlgebra::new(ctx, n)?;
        let mod_p = ResidueAlgebra::new(ctx, 1)?;
        let kernel_mod_p = kernel_ideal_mod_pn(ctx, 1)?;
        let e1 = unit_idempotent_mod_p(&mod_p, &kernel_mod_p)?;
        let power_ideal = power_ideal(&algebra)?;
        let e = newton_lift_idempotent(&algebra, &e1);
        if algebra.mul(&e, &e) != e {
            return Err(Error::Internal(
                "Newton iteration did not reach an idempotent".into(),
            ));
        }
        if power_ideal.rows().iter().any(|g| algebra.mul(&e, g) != *g) {
            return Err(Error::Internal(
                "lifted idempotent is not a unit for the image of I^n".into(),
            ));
        }
        Ok(Self {
            algebra,
            kernel_mod_p,
            e1,
            power_ideal,
            e,
        })
    }

    pub fn formatted(&self) -> String {
        self.algebra.format(&self.e)
    }

    /// `e₁`, printed modulo p.
    pub fn formatted_mod_p(&self) -> String {
        let mod_p =
            ResidueAlgebra::new(self.algebra.context(), 1).expect("already built at precision n");
        mod_p.format(&self.e1)
    }

    pub fn splitting_check(&self) -> SplittingReport {
        splitting_check(&self.algebra, &self.power_ideal, &self.e)
    }
}

/// Outcome of checking that `e` splits `(ℤ/pⁿ)R` as `Aₙ ⊕ ℤR/Iⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    pub modulus: u64,
    /// `e·Aₙ = Aₙ`.
    pub covers_kernel: bool,
    /// `e` acts as the identity on `Aₙ`.
    pub unit_on_kernel: bool,
    /// `log_p` orders of `(1−e)(ℤ/pⁿ)R` and of `ℤR/Iⁿ`.
    pub complement_log_order: u64,
    pub target_log_order: u64,
    pub surjective: bool,
    /// Canonical coordinates of the images of the complement's generators.
    pub matrix: Vec<Vec<u64>>,
}

impl SplittingReport {
    pub fn bijective(&self) -> bool {
        self.surjective && self.complement_log_order == self.target_log_order
    }

    pub fn holds(&self) -> bool {
        self.covers_kernel && self.unit_on_kernel && self.bijective()
    }
}

pub fn splitting_check(
    alg: &ResidueAlgebra,
    power_ideal: &ResidueModule,
    e: &[u64],
) -> SplittingReport {
    let p = alg.ctx.characteristic();
    let covered = alg.span(power_ideal.rows().iter().map(|g| alg.mul(e, g)));
    let unit_on_kernel = power_ideal.rows().iter().all(|g| alg.mul(e, g) == *g);
    let complement_idem = alg.sub(&alg.one(), e);
    let complement =
        alg.span((0..alg.rank()).map(|i| alg.mul(&complement_idem, &unit_vector(alg.rank(), i))));
    let matrix: Vec<Vec<u64>> = complement
        .rows()
        .iter()
        .map(|r| alg.reduce_coordinates(r))
        .collect();
    let d = matrix
        .first()
        .map_or_else(|| alg.ctx.basis_len().unwrap_or(0), Vec::len);
    let image = ResidueModule::span(p, alg.n, d, matrix.iter().cloned());
    SplittingReport {
        modulus: alg.modulus,
        covers_kernel: covered == *power_ideal,
        unit_on_kernel,
        complement_log_order: complement.log_order(),
        target_log_order: d as u64 * alg.n as u64,
        surjective: image.log_order() == d as u64 * alg.n as u64,
        matrix,
    }
}

/// `ω(r) = r^{p^{n−1}} mod pⁿ`, the stabilised Teichmüller representative.
pub fn teichmuller_character(p: u64, n: u32, r: u64) -> Result<u64> {
    if r.is_multiple_of(p) {
        return Err(Error::NotInvertible);
    }
    let m = p
        .checked_pow(n)
        .ok_or_else(|| Error::InvalidPrecision(format!("p^{n} is too large")))?;
    let mut x = r % m;
    for _ in 1..n {
        // x ← x^p
        let base = x;
        for _ in 1..p {
            x = mul_mod(x, base, m);
        }
    }
    Ok(x)
}

/// Evaluates `e = 1 − (p−1)^{−1} Σ_{r ∈ 𝔽_p^×} ω(r)^{−1}[r]` in `(ℤ/pⁿ)𝔽_p`,
/// for any `p`. Only meaningful for odd `p`; see [`explicit_e_prime_field`].
pub fn character_sum_formula(alg: &ResidueAlgebra) -> Result<Vec<u64>> {
    let ctx = &alg.ctx;
    let p = ctx.characteristic();
    if ctx.degree() != Some(1) {
        return Err(Error::Unsupported(
            "the character formula is for prime fields".into(),
        ));
    }
    let m = alg.modulus;
    let scale = unit_inverse(p - 1, m);
    let mut complement = alg.zero();
    for r in 1..p {
        let w_inv = unit_inverse(teichmuller_character(p, alg.n, r)?, m);
        let i = alg.index_of(&ctx.from_int(r as i64));
        complement[i] = mul_mod(scale, w_inv, m);
    }
    Ok(alg.sub(&alg.one(), &complement))
}

/// The closed-form idempotent for `R = 𝔽_p`, `p` odd. At `p = 2` the formula
/// gives `e = 0` whereas the kernel is spanned by `[0]`, so it is refused.
pub fn explicit_e_prime_field(p: u64, n: u32) -> Result<Vec<u64>> {
    if p == 2 {
        return Err(Error::Unsupported(
            "the character-sum formula needs p odd: at p = 2 it yields e = 0, but the kernel idempotent is [0]"
                .into(),
        ));
    }
    let ctx = Arc::new(AlgebraContext::prime_field(p)?);
    character_sum_formula(&ResidueAlgebra::new(&ctx, n)?)
}
