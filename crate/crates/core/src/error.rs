use thiserror::Error;

use crate::bidegree::Bidegree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("scheme {scheme} is not defined at p = {p}")]
    IncompatiblePrime { scheme: String, p: u32 },
    #[error("invalid finite field order q = {0}")]
    InvalidFieldOrder(u64),
    #[error("coefficient generator `{gen}` does not exist over {scheme}")]
    AbsentGenerator { gen: &'static str, scheme: String },
    #[error("cannot combine elements of different ambient algebras")]
    AmbientMismatch,
    #[error("cannot combine elements over different primes")]
    PrimeMismatch,
    #[error("element is not homogeneous (found {0} and {1})")]
    Inhomogeneous(Bidegree, Bidegree),
    #[error("tau_0 is not a generator of the MZ form")]
    TauZeroInMz,
    #[error("generator index {0} is out of range")]
    IndexOutOfRange(u32),
    #[error("operation requires the {0} form")]
    WrongForm(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("generator tag {tag} is not available over {scheme}")]
    TagMismatch { tag: String, scheme: String },
    #[error("fiber product compatibility fails: q(z) = {qz} but augmentation = {aug}")]
    Incompatible { qz: String, aug: String },
    #[error("class is not a Bockstein cycle: beta = {0}")]
    NotACycle(String),
    #[error("operands live over different schemes")]
    SchemeMismatch,
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
