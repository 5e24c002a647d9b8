use thiserror::Error;

/// Errors raised by the arithmetic, polynomial and scan layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{a} is divisible by {p}, it has no multiplicative order")]
    NotInvertible { a: i64, p: u64 },

    #[error("{v} is not a primitive root mod {p}")]
    NotPrimitiveRoot { v: u64, p: u64 },

    #[error("value {value} outside the allowed range [{lo}, {hi}]")]
    OutOfRange { value: i64, lo: i64, hi: i64 },

    #[error("modulus {0} is too small (need at least 2)")]
    BadModulus(u64),

    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,

    #[error("{what}: division by {divisor} is not exact (value {value})")]
    InexactDivision { what: &'static str, value: i64, divisor: i64 },

    #[error("inertial degree of {q} mod {p} is 1; the criterion needs f > 1")]
    InertialDegreeOne { q: u64, p: u64 },

    #[error("{0} is not a divisor of p-1 greater than 1")]
    BadInertialDegree(u64),

    #[error("p = {p} is outside the residue class {class}")]
    WrongResidueClass { p: u64, class: &'static str },

    #[error("{0} is not a negative discriminant congruent to 0 or 1 mod 4")]
    BadDiscriminant(i64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
