//! Exact construction and verification of special invariants for the
//! positive-characteristic Daigle–Freudenburg, Freudenburg and Roberts
//! additive-group actions, in every characteristic `p` and parameter `m ≥ 2`.

pub mod cli;
pub mod families;
pub mod lfihd;
pub mod polyring;
pub mod sequence;
pub mod specialinv;

use serde::Serialize;
use thiserror::Error;

use polyring::PolyError;
use sequence::linalg::LinalgError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("malformed derivation: {0}")]
    Derivation(String),
    /// A step whose success the construction guarantees did not succeed.
    #[error("construction falsified at {step}: {detail}")]
    Falsified { step: String, detail: String },
}

/// One named verification step and its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}
