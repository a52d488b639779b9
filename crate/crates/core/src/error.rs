use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus {0} is reducible over F_p")]
    ReducibleModulus(String),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid ring spec: {0}")]
    InvalidRingSpec(String),
    #[error("operands belong to different coefficient algebras")]
    ContextMismatch,
    #[error("precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: u32, right: u32 },
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element is not divisible by p: its augmentation is nonzero")]
    NotDivisible,
    #[error("element is not invertible: its residue is not a unit")]
    NotInvertible,
    #[error("operation requires a field as coefficient algebra")]
    NotAField,
    #[error("operation requires a finite coefficient algebra")]
    InfiniteRing,
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("no embedding exists: {0}")]
    NoEmbedding(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
