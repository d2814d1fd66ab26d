use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::One;

use super::coeff::{prime_factors, Coeff, Field};
use super::monomial::Monomial;
use super::ring::Ring;
use super::PolyError;

/// Sparse polynomial over `Q` or `GF(p)`.
///
/// No stored coefficient is zero, so two polynomials over the same ring and
/// field are equal exactly when their term maps are equal.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    field: Field,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.field == other.field && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>, field: Field) -> Self {
        Polynomial {
            ring: ring.clone(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Coeff) -> Self {
        let mut p = Polynomial::zero(ring, c.field());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn one(ring: &Arc<Ring>, field: Field) -> Self {
        Polynomial::constant(ring, field.one())
    }

    pub fn from_i64(ring: &Arc<Ring>, field: Field, n: i64) -> Self {
        Polynomial::constant(ring, field.from_i64(n))
    }

    pub fn var(ring: &Arc<Ring>, field: Field, name: &str) -> Result<Self, PolyError> {
        let i = ring.index_of(name)?;
        Ok(Polynomial::monomial(ring, field.one(), Monomial::var(ring.nvars(), i, 1)))
    }

    /// Single term; exponents are not validated against Laurent flags.
    pub fn monomial(ring: &Arc<Ring>, c: Coeff, m: Monomial) -> Self {
        let mut p = Polynomial::zero(ring, c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from terms, summing repeated monomials and
    /// rejecting negative exponents on non-Laurent variables.
    pub fn from_terms<I>(ring: &Arc<Ring>, field: Field, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in terms {
            if m.exps().len() != ring.nvars() {
                return Err(PolyError::InvalidRing(format!(
                    "monomial of length {} in a ring of {} variables",
                    m.exps().len(),
                    ring.nvars()
                )));
            }
            if c.field() != field {
                return Err(PolyError::FieldMismatch(c.field(), field));
            }
            check_exponents(ring, &m)?;
            accumulate(&mut acc, m, c);
        }
        Ok(Polynomial::from_map(ring, field, acc))
    }

    fn from_map(ring: &Arc<Ring>, field: Field, acc: HashMap<Monomial, Coeff>) -> Self {
        Polynomial {
            ring: ring.clone(),
            field,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch(
                self.ring.vars().to_vec(),
                other.ring.vars().to_vec(),
            ));
        }
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m, c);
        }
        Ok(Polynomial { terms, ..self.shell() })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m, &c.neg());
        }
        Ok(Polynomial { terms, ..self.shell() })
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.shell());
        }
        if other.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return Ok(self.mul_term(m, c));
        }
        if self.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut acc, ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(Polynomial::from_map(&self.ring, self.field, acc))
    }

    fn shell(&self) -> Polynomial {
        Polynomial::zero(&self.ring, self.field)
    }

    /// Multiplies by a single term.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return self.shell();
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(mm, cc)| {
                let prod = cc.mul(c);
                (!prod.is_zero()).then(|| (mm.mul(m), prod))
            })
            .collect();
        Polynomial { terms, ..self.shell() }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    pub fn scale_i64(&self, n: i64) -> Polynomial {
        self.scale(&self.field.from_i64(n))
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring, self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Ring homomorphism sending the `i`-th variable of `self.ring()` to
    /// `images[i]`, all of which live in `target`.
    ///
    /// A negative exponent is only admissible when the image is a single term
    /// with invertible coefficient; the resulting exponents must respect the
    /// target's Laurent flags.
    pub fn substitute(
        &self,
        target: &Arc<Ring>,
        images: &[Polynomial],
    ) -> Result<Polynomial, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::InvalidRing(format!(
                "{} images for {} variables",
                images.len(),
                self.ring.nvars()
            )));
        }
        for img in images {
            if !same_ring(img.ring(), target) {
                return Err(PolyError::RingMismatch(
                    img.ring().vars().to_vec(),
                    target.vars().to_vec(),
                ));
            }
            if img.field != self.field {
                return Err(PolyError::FieldMismatch(img.field, self.field));
            }
        }
        let mut powers: HashMap<(usize, i32), Polynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !powers.contains_key(&(i, e)) {
                    let p = power_of_image(&images[i], e, &self.ring.vars()[i])?;
                    powers.insert((i, e), p);
                }
                prod = &prod * &powers[&(i, e)];
            }
            for (pm, pc) in prod.terms {
                accumulate(&mut acc, pm, pc);
            }
        }
        Ok(Polynomial::from_map(target, self.field, acc))
    }

    /// Re-expresses `self` in `target`, matching variables by name.
    ///
    /// Variables of `self` absent from `target` must not occur.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Polynomial, PolyError> {
        let map: Vec<Option<usize>> = self.ring.vars().iter().map(|v| target.position(v)).collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.nvars()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => return Err(PolyError::UnknownVariable(self.ring.vars()[i].clone())),
                }
            }
            let mono = Monomial::new(exps);
            check_exponents(target, &mono)?;
            terms.insert(mono, c.clone());
        }
        Ok(Polynomial {
            ring: target.clone(),
            field: self.field,
            terms,
        })
    }

    /// Weighted degree of every term under explicit weights.
    pub fn weighted_degrees(&self, weights: &[i64]) -> impl Iterator<Item = i64> + '_ {
        let weights = weights.to_vec();
        self.terms.keys().map(move |m| m.weighted_degree(&weights))
    }

    pub fn weighted_degree(&self, grading: &str) -> Result<i64, PolyError> {
        let w = self.ring.grading(grading)?;
        self.weighted_degrees(w).max().ok_or(PolyError::ZeroPolynomial)
    }

    /// True iff every term has the same weighted degree; the zero polynomial
    /// counts as homogeneous.
    pub fn is_homogeneous(&self, grading: &str) -> Result<bool, PolyError> {
        let w = self.ring.grading(grading)?;
        Ok(self.is_homogeneous_with(w))
    }

    pub fn is_homogeneous_with(&self, weights: &[i64]) -> bool {
        let mut degs = self.weighted_degrees(weights);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Multiplies every term by `var^(target - weight)`.
    pub fn homogenize(&self, grading: &str, target: i64, var: &str) -> Result<Polynomial, PolyError> {
        let w = self.ring.grading(grading)?;
        let vi = self.ring.index_of(var)?;
        if w[vi] != 1 {
            return Err(PolyError::Domain(format!(
                "{var} has weight {} in {grading}, expected 1",
                w[vi]
            )));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.weighted_degree(w);
            if d > target {
                return Err(PolyError::Domain(format!(
                    "term of {grading}-degree {d} exceeds target {target}"
                )));
            }
            let mono = m.with_exp(vi, m.exp(vi) + (target - d) as i32);
            terms.insert(mono, c.clone());
        }
        Ok(Polynomial { terms, ..self.shell() })
    }

    /// Coefficient-wise reduction from `Q` into `GF(p)`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Polynomial, PolyError> {
        let field = Field::prime(p)?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let r = c.reduce_mod(p).map_err(|_| PolyError::Valuation {
                prime: p,
                detail: format!("coefficient {c} of {} has a pole at {p}", self.format_monomial(m)),
            })?;
            if !r.is_zero() {
                terms.insert(m.clone(), r);
            }
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            field,
            terms,
        })
    }

    /// Minimum `p`-adic valuation over the coefficients.
    pub fn p_valuation(&self, p: u64) -> Result<i64, PolyError> {
        if self.field != Field::Rational {
            return Err(PolyError::FieldMismatch(self.field, Field::Rational));
        }
        self.terms
            .values()
            .filter_map(|c| c.p_valuation(p))
            .min()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Sorted primes dividing any coefficient denominator.
    pub fn denominator_primes(&self) -> BTreeSet<u64> {
        self.terms
            .values()
            .filter_map(Coeff::as_rational)
            .filter(|q| !q.denom().is_one())
            .flat_map(|q| prime_factors(q.denom()))
            .collect()
    }

    /// Maximum standard total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Maximum exponent of variable `i`; `None` for zero.
    pub fn degree_in(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(i)).max()
    }

    /// Coefficient of `var_i^n`, as a polynomial in the same ring free of `var_i`.
    pub fn coeff_of_power(&self, i: usize, n: i32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) == n)
            .map(|(m, c)| (m.with_exp(i, 0), c.clone()))
            .collect();
        Polynomial { terms, ..self.shell() }
    }

    /// Leading coefficient with respect to variable `i`.
    pub fn leading_coeff_in(&self, i: usize) -> Option<Polynomial> {
        self.degree_in(i).map(|d| self.coeff_of_power(i, d))
    }

    /// Exact division by a monomial.
    pub fn div_monomial(&self, m: &Monomial) -> Result<Polynomial, PolyError> {
        let inv = m.pow(-1);
        let mut terms = BTreeMap::new();
        for (mm, c) in &self.terms {
            let q = mm.mul(&inv);
            check_exponents(&self.ring, &q)
                .map_err(|_| PolyError::NotDivisible(self.format_monomial(m)))?;
            terms.insert(q, c.clone());
        }
        Ok(Polynomial { terms, ..self.shell() })
    }

    pub(crate) fn format_monomial(&self, m: &Monomial) -> String {
        super::text::format_monomial(self.ring.vars(), m).unwrap_or_else(|| "1".to_string())
    }
}

fn power_of_image(img: &Polynomial, e: i32, var: &str) -> Result<Polynomial, PolyError> {
    if e >= 0 {
        return Ok(img.pow(e as u32));
    }
    if img.len() != 1 {
        return Err(PolyError::Domain(format!(
            "negative power of {var} needs a monomial image"
        )));
    }
    let (m, c) = img.terms.iter().next().unwrap();
    let mono = m.pow(e);
    check_exponents(img.ring(), &mono)?;
    let c = c.powi(e as i64).expect("nonzero coefficient is invertible");
    Ok(Polynomial::monomial(img.ring(), c, mono))
}

fn check_exponents(ring: &Ring, m: &Monomial) -> Result<(), PolyError> {
    for (i, &e) in m.exps().iter().enumerate() {
        if e < 0 && !ring.is_laurent(i) {
            return Err(PolyError::NegativeExponent(ring.vars()[i].clone()));
        }
    }
    Ok(())
}

fn accumulate(acc: &mut HashMap<Monomial, Coeff>, m: Monomial, c: Coeff) {
    match acc.get_mut(&m) {
        Some(slot) => *slot = slot.add(&c),
        None => {
            acc.insert(m, c);
        }
    }
}

fn add_into(terms: &mut BTreeMap<Monomial, Coeff>, m: &Monomial, c: &Coeff) {
    match terms.get_mut(m) {
        Some(slot) => {
            let sum = slot.add(c);
            if sum.is_zero() {
                terms.remove(m);
            } else {
                *slot = sum;
            }
        }
        None => {
            if !c.is_zero() {
                terms.insert(m.clone(), c.clone());
            }
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        Polynomial { terms, ..self.shell() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
