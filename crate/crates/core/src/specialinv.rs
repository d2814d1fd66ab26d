//! Special invariants `F = v^p + v·b′ − b` of the three families over `GF(p)`.
//!
//! `b` and `b′` come from the sequence: `b_n = x^(mp)·c_n(s/x^k, t/x^k, u/x^k)`
//! with `k = m + 1`, then `b = b_p mod p` and `x^m·b′ = p·b_(p−1) mod p`. The
//! six- and seven-variable invariants are the y-homogenized lift and its image
//! under `α`. Steps that the construction guarantees raise
//! [`Error::Falsified`]; everything else is recorded as a [`Check`].

use std::sync::Arc;

use serde::Serialize;

use crate::families::{alpha_hom, build_example, check_m, quotient_y1, subring, y_homogenize, Family};
use crate::lfihd::HigherDerivation;
use crate::polyring::{binomial, is_prime, Field, Monomial, Polynomial, PolynomialJson, Ring};
use crate::sequence::{extend_sequence, SequenceTable};
use crate::{Check, Error};

fn falsified(step: impl Into<String>, detail: impl ToString) -> Error {
    Error::Falsified {
        step: step.into(),
        detail: detail.to_string(),
    }
}

pub fn check_p(p: u64) -> Result<(), Error> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::Parameter(format!("p must be a prime below 2^31, got {p}")));
    }
    Ok(())
}

/// `x^degree·c_n(s/x^k, t/x^k, u/x^k)` in `A5` over `Q`; must be a polynomial.
pub fn b_n(table: &SequenceTable, n: usize, m: u32, degree: i64) -> Result<Polynomial, Error> {
    let c = table
        .c(n)
        .ok_or_else(|| Error::Parameter(format!("sequence table stops before {n}")))?;
    let a5 = subring(Family::Df5, m)?.into_arc();
    let laurent = a5.as_ref().clone().with_laurent("x")?.into_arc();
    let k = m as i32 + 1;
    let x = laurent.index_of("x")?;
    let images: Vec<Polynomial> = ["s", "t", "u"]
        .iter()
        .map(|v| {
            let i = laurent.index_of(v)?;
            let mono = Monomial::var(laurent.nvars(), x, -k).mul(&Monomial::var(laurent.nvars(), i, 1));
            Ok(Polynomial::monomial(&laurent, Field::Rational.one(), mono))
        })
        .collect::<Result<_, Error>>()?;
    let lifted = c
        .substitute(&laurent, &images)?
        .mul_term(&Monomial::var(laurent.nvars(), x, degree as i32), &Field::Rational.one());
    lifted
        .embed(&a5)
        .map_err(|e| falsified(format!("polynomiality of b_{n}"), format!("{e} at x-degree {degree}")))
}

#[derive(Clone, Debug)]
pub struct SpecialInvariant {
    pub family: Family,
    pub p: u64,
    pub m: u32,
    pub ring: Arc<Ring>,
    /// In the `v`-free subring.
    pub b: Polynomial,
    pub b_prime: Polynomial,
    pub f: Polynomial,
    pub transcript: Vec<Check>,
}

impl SpecialInvariant {
    pub fn passed(&self) -> bool {
        self.transcript.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> SpecialInvariantJson {
        SpecialInvariantJson {
            family: self.family.to_string(),
            p: self.p,
            m: self.m,
            f_text: self.f.to_string(),
            b_text: self.b.to_string(),
            b_prime_text: self.b_prime.to_string(),
            f: self.f.to_json(),
            b: self.b.to_json(),
            b_prime: self.b_prime.to_json(),
            checks: self.transcript.clone(),
            passed: self.passed(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialInvariantJson {
    pub family: String,
    pub p: u64,
    pub m: u32,
    pub f_text: String,
    pub b_text: String,
    pub b_prime_text: String,
    pub f: PolynomialJson,
    pub b: PolynomialJson,
    pub b_prime: PolynomialJson,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn table_through(table: &SequenceTable, n: usize) -> Result<SequenceTable, Error> {
    if table.max_index() >= n {
        Ok(table.clone())
    } else {
        extend_sequence(table, n)
    }
}

/// `v^p + v·b′ − b` in the full ring of `derivation`.
fn assemble(derivation: &HigherDerivation, b: &Polynomial, b_prime: &Polynomial, p: u64) -> Result<Polynomial, Error> {
    let ring = derivation.base();
    let field = derivation.field();
    let v = Polynomial::var(ring, field, "v")?;
    Ok(&(&v.pow(p as u32) + &(&v * &b_prime.embed(ring)?)) - &b.embed(ring)?)
}

/// Checks `θ(b) = b + w·b′·U + w^p·U^p` where `θ(v) = v + w·U`.
fn identity_check(derivation: &HigherDerivation, b: &Polynomial, b_prime: &Polynomial, p: u64) -> Result<Check, Error> {
    let ext = derivation.extended();
    let field = derivation.field();
    let u = Polynomial::var(ext, field, derivation.u_name())?;
    let v = Polynomial::var(ext, field, "v")?;
    let w = (derivation.image_of("v")? - &v).coeff_of_power(derivation.u_index(), 1);
    let lhs = derivation.apply(&b.embed(derivation.base())?)?;
    let rhs = &(&b.embed(ext)? + &(&(&w * &b_prime.embed(ext)?) * &u)) + &(&w * &u).pow(p as u32);
    let ok = lhs == rhs;
    Ok(Check::new(
        "theta(b) = b + w b' U + w^p U^p",
        ok,
        if ok {
            format!("w = {w}")
        } else {
            format!("difference {}", &lhs - &rhs)
        },
    ))
}

fn homogeneity_check(f: &Polynomial, grading: &str, degree: i64) -> Result<Check, Error> {
    let ok = f.is_zero() || (f.is_homogeneous(grading)? && f.weighted_degree(grading)? == degree);
    Ok(Check::new(
        format!("F is {grading}-homogeneous of degree {degree}"),
        ok,
        if ok {
            String::new()
        } else {
            format!("degrees {:?}", f.weighted_degrees(f.ring().grading(grading)?).collect::<Vec<_>>())
        },
    ))
}

fn invariance_check(derivation: &HigherDerivation, name: &str, f: &Polynomial) -> Result<Check, Error> {
    let ok = derivation.is_invariant(f)?;
    Ok(Check::new(format!("{name} is invariant"), ok, ""))
}

fn monic_check(f: &Polynomial, p: u64) -> Result<Check, Error> {
    let v = f.ring().index_of("v")?;
    let ok = f.degree_in(v) == Some(p as i32) && f.leading_coeff_in(v).is_some_and(|c| c.is_constant() && c.coeff(&Monomial::one(f.ring().nvars())).is_one());
    Ok(Check::new(format!("F is monic of degree {p} in v"), ok, ""))
}

/// The five-variable special invariant, reusing (and extending) `table`.
pub fn special_invariant_df5_with(table: &SequenceTable, p: u64, m: u32) -> Result<SpecialInvariant, Error> {
    check_p(p)?;
    check_m(m)?;
    let field = Field::prime(p)?;
    let bundle = build_example(Family::Df5, m, field)?;
    let table = table_through(table, p as usize)?;
    let degree = m as i64 * p as i64;

    let bp = b_n(&table, p as usize, m, degree)?;
    let bq = b_n(&table, p as usize - 1, m, degree)?;
    let b = bp
        .reduce_mod_p(p)
        .map_err(|e| falsified("reduction of b_p", e))?;
    let scaled = bq
        .scale_i64(p as i64)
        .reduce_mod_p(p)
        .map_err(|e| falsified("reduction of p*b_(p-1)", e))?;
    let a5 = &bundle.subring;
    let xm = Monomial::var(a5.nvars(), a5.index_of("x")?, m as i32);
    let b_prime = scaled
        .div_monomial(&xm)
        .map_err(|e| falsified("x^m divides p*b_(p-1) mod p", e))?;

    let mut transcript = Vec::new();
    if p > 2 {
        let ok = bq.is_zero() || bq.div_monomial(&xm).is_ok();
        transcript.push(Check::new("x^m divides b_(p-1) over Q", ok, ""));
    }
    transcript.push(Check::new(
        "b' is invariant",
        bundle.sub_derivation.is_invariant(&b_prime)?,
        if b_prime.is_zero() { "b' = 0" } else { "" },
    ));
    transcript.push(identity_check(&bundle.derivation, &b, &b_prime, p)?);
    let f = assemble(&bundle.derivation, &b, &b_prime, p)?;
    transcript.push(monic_check(&f, p)?);
    transcript.push(homogeneity_check(&f, "w5", degree)?);
    transcript.push(homogeneity_check(&f, "w4", p as i64)?);
    transcript.push(invariance_check(&bundle.derivation, "F", &f)?);
    Ok(SpecialInvariant {
        family: Family::Df5,
        p,
        m,
        ring: bundle.ring,
        b,
        b_prime,
        f,
        transcript,
    })
}

/// The six-variable special invariant: the y-homogenized five-variable one.
pub fn special_invariant_f6_with(table: &SequenceTable, p: u64, m: u32) -> Result<SpecialInvariant, Error> {
    let df5 = special_invariant_df5_with(table, p, m)?;
    let field = Field::prime(p)?;
    let bundle = build_example(Family::F6, m, field)?;
    let degree = 2 * m as i64 * p as i64;
    let b = y_homogenize(&df5.b, m, degree)?;
    let b_prime = y_homogenize(&df5.b_prime, m, degree - 2 * m as i64)?;

    let mut transcript = vec![Check::new(
        "b' is invariant",
        bundle.sub_derivation.is_invariant(&b_prime)?,
        if b_prime.is_zero() { "b' = 0" } else { "" },
    )];
    transcript.push(identity_check(&bundle.derivation, &b, &b_prime, p)?);
    let f = assemble(&bundle.derivation, &b, &b_prime, p)?;
    transcript.push(monic_check(&f, p)?);
    transcript.push(homogeneity_check(&f, "w6", degree)?);
    transcript.push(invariance_check(&bundle.derivation, "F", &f)?);
    let back = quotient_y1(m, field)?.apply(&f)?;
    transcript.push(Check::new("F at y = 1 is the five-variable invariant", back == df5.f, ""));
    Ok(SpecialInvariant {
        family: Family::F6,
        p,
        m,
        ring: bundle.ring,
        b,
        b_prime,
        f,
        transcript,
    })
}

/// The seven-variable special invariant: `α` applied to the six-variable one.
pub fn special_invariant_r7_with(table: &SequenceTable, p: u64, m: u32) -> Result<SpecialInvariant, Error> {
    let f6 = special_invariant_f6_with(table, p, m)?;
    let field = Field::prime(p)?;
    let bundle = build_example(Family::R7, m, field)?;
    let alpha = alpha_hom(m, field)?;
    let degree = 3 * m as i64 * p as i64;
    let b = alpha.apply(&f6.b.embed(alpha.source())?)?.embed(&bundle.subring)?;
    let b_prime = alpha.apply(&f6.b_prime.embed(alpha.source())?)?.embed(&bundle.subring)?;
    let f = alpha.apply(&f6.f)?;

    let mut transcript = vec![Check::new(
        "b' is invariant",
        bundle.sub_derivation.is_invariant(&b_prime)?,
        if b_prime.is_zero() { "b' = 0" } else { "" },
    )];
    transcript.push(identity_check(&bundle.derivation, &b, &b_prime, p)?);
    transcript.push(Check::new(
        "F = v^p + v b' - b",
        f == assemble(&bundle.derivation, &b, &b_prime, p)?,
        "",
    ));
    transcript.push(monic_check(&f, p)?);
    transcript.push(homogeneity_check(&f, "w7", degree)?);
    transcript.push(invariance_check(&bundle.derivation, "F", &f)?);
    Ok(SpecialInvariant {
        family: Family::R7,
        p,
        m,
        ring: bundle.ring,
        b,
        b_prime,
        f,
        transcript,
    })
}

pub fn special_invariant_with(table: &SequenceTable, family: Family, p: u64, m: u32) -> Result<SpecialInvariant, Error> {
    match family {
        Family::Df5 => special_invariant_df5_with(table, p, m),
        Family::F6 => special_invariant_f6_with(table, p, m),
        Family::R7 => special_invariant_r7_with(table, p, m),
    }
}

pub fn special_invariant(family: Family, p: u64, m: u32) -> Result<SpecialInvariant, Error> {
    special_invariant_with(&SequenceTable::new(), family, p, m)
}

/// Over `Q`: `θ^(k)(b_p) = C(p, k)·b_(p−k)` for `k ≤ p`, and zero for `p < k ≤ p + 2`.
pub fn theta_binomial_check(table: &SequenceTable, p: u64, m: u32) -> Result<Check, Error> {
    let table = table_through(table, p as usize)?;
    let bundle = build_example(Family::Df5, m, Field::Rational)?;
    let degree = m as i64 * p as i64;
    let bp = b_n(&table, p as usize, m, degree)?;
    let theta = bundle.sub_derivation.apply(&bp)?;
    let u = bundle.sub_derivation.u_index();
    let mut fails = Vec::new();
    for k in 0..=p + 2 {
        let got = theta.coeff_of_power(u, k as i32).embed(&bundle.subring)?;
        let want = if k <= p {
            b_n(&table, (p - k) as usize, m, degree)?.scale(&Field::Rational.from_bigint(&binomial(p, k)))
        } else {
            Polynomial::zero(&bundle.subring, Field::Rational)
        };
        if got != want {
            fails.push(format!("k = {k}"));
        }
    }
    Ok(Check::new(
        format!("theta^(k)(b_{p}) = C({p},k) b_({p}-k), m = {m}"),
        fails.is_empty(),
        fails.join(", "),
    ))
}
