//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field spec parse error: {0}")]
    BadFieldSpec(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size {0} exceeds the supported bound 2^24")]
    FieldTooLarge(u64),

    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    NotIrreducible(u32),

    #[error("no built-in modulus for p={p}, n={n}")]
    NoDefaultModulus { p: u64, n: u32 },

    #[error("{m} does not divide {n}")]
    NotADivisor { m: u32, n: u32 },

    #[error("zero raised to a negative exponent")]
    ZeroToNegativePower,

    #[error("trace-affine constraint needs a nonzero weight")]
    ZeroWeight,

    #[error("element 0x{0:x} does not lie in the embedded subfield")]
    NotInSubfield(u64),

    #[error("polynomial parse error: {0}")]
    BadPolynomial(String),

    #[error("value table parse error at line {line}: {msg}")]
    BadTable { line: usize, msg: String },

    #[error("polynomial has algebraic degree {0} > 2, decomposition needs degree <= 2")]
    DegreeTooHigh(u32),

    #[error("function is not quadratic: L_gamma failed an additivity probe")]
    NotQuadratic,

    #[error("linearized-polynomial extraction needs characteristic 2")]
    NotBinary,

    #[error("({gamma:#x}, {beta:#x}) is not a linear-structure pair")]
    InvalidStructurePair { gamma: u64, beta: u64 },

    #[error("H o H is not the identity (params are inconsistent)")]
    InvolutionFailed,

    #[error("closed form disagrees with direct composition at {0} points")]
    ClosedFormMismatch(usize),

    #[error("family condition violated: {0}")]
    ConditionViolated(String),

    #[error("no parameters satisfying the family conditions were found")]
    NoWitnessFound,

    #[error("non-rational squared Walsh magnitude encountered (non-plateaued component)")]
    NonRationalMagnitude,

    #[error("{0}")]
    Other(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
