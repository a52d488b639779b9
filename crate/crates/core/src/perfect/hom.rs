use std::sync::Arc;

use super::{AlgebraContext, Kind, PerfectElement, Repr};
use crate::error::{Error, Result};

/// A homomorphism of perfect F_p-algebras, given by the images of the
/// source generators (`g` for a finite field of degree > 1, the variables
/// `t_i` for a perfect closure, nothing for a prime field).
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Arc<AlgebraContext>,
    target: Arc<AlgebraContext>,
    images: Vec<PerfectElement>,
}

impl RingHom {
    pub fn new(
        source: Arc<AlgebraContext>,
        target: Arc<AlgebraContext>,
        images: Vec<PerfectElement>,
    ) -> Result<Self> {
        if source.p != target.p {
            return Err(Error::InvalidHom(format!(
                "characteristics differ: {} vs {}",
                source.p, target.p
            )));
        }
        for img in &images {
            if !target.contains(img) {
                return Err(Error::InvalidHom(
                    "generator image is not in the target".into(),
                ));
            }
        }
        let expected = match &source.kind {
            Kind::FiniteField { degree: 1, .. } => 0,
            Kind::FiniteField { .. } => 1,
            Kind::PerfectClosure { vars } => vars.len(),
        };
        if images.len() != expected {
            return Err(Error::InvalidHom(format!(
                "expected {expected} generator images, got {}",
                images.len()
            )));
        }
        if let (Kind::FiniteField { degree, modulus }, Some(h)) = (&source.kind, images.first()) {
            debug_assert!(*degree > 1);
            if !target.is_zero(&eval_poly(&target, modulus, h)) {
                return Err(Error::InvalidHom(format!(
                    "image {} does not satisfy {}",
                    target.format_element(h),
                    super::literal::format_modulus(modulus).replace('x', super::GENERATOR)
                )));
            }
        }
        Ok(RingHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(ctx: Arc<AlgebraContext>) -> Self {
        let images = match &ctx.kind {
            Kind::FiniteField { degree: 1, .. } => Vec::new(),
            Kind::FiniteField { .. } => vec![ctx.generator().expect("degree > 1")],
            Kind::PerfectClosure { vars } => (0..vars.len())
                .map(|i| ctx.variable(i).expect("variable"))
                .collect(),
        };
        RingHom {
            source: ctx.clone(),
            target: ctx,
            images,
        }
    }

    /// Finds an embedding of a finite field into a finite field by exhausting
    /// candidate generator images in element-index order.
    pub fn find_embedding(
        source: Arc<AlgebraContext>,
        target: Arc<AlgebraContext>,
    ) -> Result<Self> {
        match &source.kind {
            Kind::FiniteField { degree: 1, .. } => return RingHom::new(source, target, Vec::new()),
            Kind::FiniteField { .. } => {}
            Kind::PerfectClosure { .. } => {
                return Err(Error::InvalidHom(
                    "homomorphisms out of a perfect closure need explicit variable images".into(),
                ))
            }
        }
        let modulus = source.modulus().expect("finite field");
        if source.p != target.p {
            return Err(Error::NoEmbedding("characteristics differ".into()));
        }
        let candidates = target.elements().ok_or_else(|| {
            // the perfect closure is a graded domain, its algebraic elements are F_p
            Error::NoEmbedding(format!(
                "{} has no elements of degree > 1 over F_p",
                target.spec_string()
            ))
        })?;
        let root = candidates
            .into_iter()
            .find(|h| target.is_zero(&eval_poly(&target, modulus, h)))
            .ok_or_else(|| {
                Error::NoEmbedding(format!(
                    "no element of {} satisfies the defining relation of {}",
                    target.spec_string(),
                    source.spec_string()
                ))
            })?;
        RingHom::new(source, target, vec![root])
    }

    pub fn source(&self) -> &Arc<AlgebraContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraContext> {
        &self.target
    }

    pub fn images(&self) -> &[PerfectElement] {
        &self.images
    }

    pub fn apply(&self, a: &PerfectElement) -> PerfectElement {
        let tgt = &self.target;
        match &a.0 {
            Repr::Finite(coeffs) => match self.images.first() {
                None => tgt.from_int(coeffs[0] as i64),
                Some(h) => eval_poly(tgt, coeffs, h),
            },
            Repr::Closure(terms) => {
                let mut acc = tgt.zero();
                for (mono, &c) in terms {
                    let mut value = tgt.one();
                    for (e, h) in mono.exponents().iter().zip(&self.images) {
                        let root = tgt.pth_root_iter(h, e.denominator_exponent());
                        value = tgt.mul(&value, &tgt.pow(&root, e.numerator()));
                    }
                    acc = tgt.add(&acc, &tgt.scale(&value, c));
                }
                acc
            }
        }
    }
}

/// Horner evaluation of an F_p-coefficient polynomial at `h`.
fn eval_poly(ctx: &AlgebraContext, coeffs: &[u64], h: &PerfectElement) -> PerfectElement {
    coeffs.iter().rev().fold(ctx.zero(), |acc, &c| {
        ctx.add(&ctx.mul(&acc, h), &ctx.from_int(c as i64))
    })
}
