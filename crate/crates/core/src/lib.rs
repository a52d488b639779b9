pub mod error;
pub mod perfect;
mod text;

pub use error::{Error, Result};
pub use perfect::{AlgebraContext, AlgebraKind, BasisIndex, PerfectElement, RingHom};
pub mod monoid;
pub mod sample;

pub use monoid::MonoidElement;
pub mod batch;
pub mod idempotent;
pub mod selftest;
pub mod truncated;
pub mod witt;

pub use truncated::{Truncated, Valuation};
pub use witt::{alpha2, IntPolynomial, WittContext, WittRing, WittVector};
