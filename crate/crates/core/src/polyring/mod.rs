//! Exact coefficients, sparse (optionally Laurent) multivariate polynomials,
//! weighted gradings and the text/JSON encodings.

mod coeff;
mod json;
mod monomial;
mod poly;
mod ring;
mod text;

use thiserror::Error;

pub use coeff::{binomial, is_prime, prime_factors, Coeff, Field};
pub use json::{FieldJson, PolynomialJson, TermJson};
pub use monomial::Monomial;
pub use poly::Polynomial;
pub use ring::Ring;
pub use text::{format, format_monomial, parse};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("ring mismatch: {0:?} vs {1:?}")]
    RingMismatch(Vec<String>, Vec<String>),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("unknown grading {0}")]
    UnknownGrading(String),
    #[error("negative exponent on non-Laurent variable {0}")]
    NegativeExponent(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("not reducible modulo {prime}: {detail}")]
    Valuation { prime: u64, detail: String },
    #[error("not divisible by {0}")]
    NotDivisible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("malformed rational {0}")]
    MalformedRational(String),
}
