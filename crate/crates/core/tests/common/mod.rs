//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use gainv::lfihd::HigherDerivation;
use gainv::polyring::{Coeff, Field, Monomial, Polynomial, Ring};
use num_rational::BigRational;
use proptest::prelude::*;

/// Raw terms: (numerator, denominator, exponents).
pub type RawTerms = Vec<(i64, i64, Vec<i32>)>;

pub fn raw_terms(nvars: usize, max_exp: i32, max_terms: usize) -> impl Strategy<Value = RawTerms> {
    prop::collection::vec(
        (-30i64..30, 1i64..7, prop::collection::vec(0..=max_exp, nvars)),
        0..=max_terms,
    )
}

pub fn build(ring: &Arc<Ring>, field: Field, raw: &RawTerms, integral: bool) -> Polynomial {
    let terms = raw.iter().filter_map(|(n, d, e)| {
        let d = if integral { 1 } else { *d };
        let q = BigRational::new((*n).into(), d.into());
        let c: Coeff = field.from_rational(&q).ok()?;
        Some((Monomial::new(e.clone()), c))
    });
    Polynomial::from_terms(ring, field, terms).unwrap()
}

/// `θ(f)` computed term by term as a product of powers of the generator
/// images, without going through substitution.
pub fn apply_by_hand(d: &HigherDerivation, f: &Polynomial) -> Polynomial {
    let ext = d.extended();
    let mut acc = Polynomial::zero(ext, f.field());
    for (m, c) in f.terms() {
        let mut term = Polynomial::constant(ext, c.clone());
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                term = &term * d.image(i);
            }
        }
        acc = &acc + &term;
    }
    acc
}

pub fn is_invariant_by_hand(d: &HigherDerivation, f: &Polynomial) -> bool {
    apply_by_hand(d, f) == f.embed(d.extended()).unwrap()
}
