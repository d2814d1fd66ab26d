//! Exact coefficients: rationals and prime-field residues.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// The coefficient field of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds `GF(p)`, rejecting composite or out-of-range moduli.
    pub fn prime(p: u64) -> Result<Self, PolyError> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(PolyError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(BigRational::zero()),
            Field::Prime(p) => Coeff::Prime { residue: 0, modulus: p },
        }
    }

    pub fn one(self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => Coeff::Prime {
                residue: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => Coeff::Prime {
                residue: residue_of(n, p),
                modulus: p,
            },
        }
    }

    /// Maps a rational into this field. Fails for GF(p) when `p` divides the denominator.
    pub fn from_rational(self, q: &BigRational) -> Result<Coeff, PolyError> {
        match self {
            Field::Rational => Ok(Coeff::Rational(q.clone())),
            Field::Prime(p) => {
                let den = residue_of(q.denom(), p);
                if den == 0 {
                    return Err(PolyError::Valuation {
                        prime: p,
                        detail: format!("denominator of {q} is divisible by {p}"),
                    });
                }
                let num = residue_of(q.numer(), p);
                Ok(Coeff::Prime {
                    residue: mul_mod(num, inv_mod(den, p), p),
                    modulus: p,
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// A single coefficient. Rationals are kept in lowest terms by `BigRational`;
/// residues are always reduced into `[0, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl Coeff {
    pub fn field(&self) -> Field {
        match self {
            Coeff::Rational(_) => Field::Rational,
            Coeff::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_zero(),
            Coeff::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_one(),
            Coeff::Prime { residue, .. } => *residue == 1,
        }
    }

    /// True for rationals with negative sign; residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Coeff::Rational(q) if q.is_negative())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rational(q) => Some(q),
            Coeff::Prime { .. } => None,
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a + b),
            (Coeff::Prime { residue: a, modulus: p }, Coeff::Prime { residue: b, modulus: q })
                if p == q =>
            {
                Coeff::Prime {
                    residue: (a + b) % p,
                    modulus: *p,
                }
            }
            _ => panic!("coefficient field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(-a),
            Coeff::Prime { residue, modulus } => Coeff::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a * b),
            (Coeff::Prime { residue: a, modulus: p }, Coeff::Prime { residue: b, modulus: q })
                if p == q =>
            {
                Coeff::Prime {
                    residue: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => panic!("coefficient field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Rational(a) => Coeff::Rational(a.recip()),
            Coeff::Prime { residue, modulus } => Coeff::Prime {
                residue: inv_mod(*residue, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Power with a possibly negative exponent.
    pub fn powi(&self, e: i64) -> Option<Coeff> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field().one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            k >>= 1;
        }
        Some(acc)
    }

    /// `ord_p` of a rational coefficient; `None` for zero or residues.
    pub fn p_valuation(&self, p: u64) -> Option<i64> {
        match self {
            Coeff::Rational(q) if !q.is_zero() => {
                Some(ord_p(q.numer(), p) as i64 - ord_p(q.denom(), p) as i64)
            }
            _ => None,
        }
    }

    /// Reduction of a rational into GF(p); identity on residues of the same field.
    pub fn reduce_mod(&self, p: u64) -> Result<Coeff, PolyError> {
        match self {
            Coeff::Rational(q) => Field::Prime(p).from_rational(q),
            Coeff::Prime { modulus, .. } if *modulus == p => Ok(self.clone()),
            Coeff::Prime { modulus, .. } => Err(PolyError::FieldMismatch(
                Field::Prime(*modulus),
                Field::Prime(p),
            )),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of a positive integer, ascending, without multiplicity.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor fits in u64"));
    }
    out
}

/// Exact binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn ord_p(n: &BigInt, p: u64) -> u32 {
    let bp = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(&bp) {
        n /= &bp;
        k += 1;
    }
    k
}

fn residue_of(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    match r.sign() {
        Sign::NoSign => 0,
        _ => r.to_u64().expect("residue fits in u64"),
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}
