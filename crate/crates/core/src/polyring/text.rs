//! ASCII text form of polynomials.
//!
//! ```text
//! poly    := ['-'] term (('+'|'-') term)*
//! term    := coeff ['*' factors] | factors
//! factors := factor ('*' factor)*
//! factor  := var ['^' uint]
//! coeff   := uint ['/' uint]
//! var     := letter (letter|digit)*
//! ```
//!
//! Exponents of Laurent variables may carry a leading `-`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::coeff::{Coeff, Field};
use super::monomial::Monomial;
use super::poly::Polynomial;
use super::ring::Ring;
use super::PolyError;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn ident(&mut self) -> Result<&'a str, PolyError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(self.error("expected a variable")),
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }
}

/// Parses `text` as a polynomial over `ring` and `field`.
pub fn parse(text: &str, ring: &Arc<Ring>, field: Field) -> Result<Polynomial, PolyError> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms = Vec::new();
    let mut negative = cur.eat(b'-');
    loop {
        let (mono, coeff) = parse_term(&mut cur, ring)?;
        let coeff = if negative { -coeff } else { coeff };
        let c = field.from_rational(&coeff)?;
        terms.push((mono, c));
        match cur.peek() {
            None => break,
            Some(b'+') => negative = false,
            Some(b'-') => negative = true,
            Some(c) => return Err(cur.error(format!("unexpected character {:?}", c as char))),
        }
        cur.pos += 1;
    }
    Polynomial::from_terms(ring, field, terms)
}

fn parse_term(cur: &mut Cursor, ring: &Ring) -> Result<(Monomial, BigRational), PolyError> {
    let mut exps = vec![0i32; ring.nvars()];
    let coeff = match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let num = cur.uint()?;
            let coeff = if cur.eat(b'/') {
                let at = cur.pos;
                let den = cur.uint()?;
                if den.is_zero() {
                    return Err(PolyError::MalformedRational(format!("zero denominator at {at}")));
                }
                BigRational::new(num, den)
            } else {
                BigRational::from_integer(num)
            };
            if !cur.eat(b'*') {
                return Ok((Monomial::new(exps), coeff));
            }
            coeff
        }
        Some(c) if c.is_ascii_alphabetic() => BigRational::from_integer(1.into()),
        Some(_) => return Err(cur.error("expected a coefficient or variable")),
        None => return Err(cur.error("unexpected end of input")),
    };
    loop {
        let name = cur.ident()?;
        let i = ring.index_of(name)?;
        let e = if cur.eat(b'^') {
            let neg = cur.eat(b'-');
            let at = cur.pos;
            let e: i32 = cur
                .uint()?
                .try_into()
                .map_err(|_| PolyError::Syntax {
                    pos: at,
                    msg: "exponent too large".into(),
                })?;
            if neg {
                -e
            } else {
                e
            }
        } else {
            1
        };
        exps[i] += e;
        if !cur.eat(b'*') {
            break;
        }
    }
    Ok((Monomial::new(exps), coeff))
}

/// `x^2*t` style rendering of a monomial, `None` for the unit monomial.
pub fn format_monomial(vars: &[String], m: &Monomial) -> Option<String> {
    let mut out = String::new();
    for (v, &e) in vars.iter().zip(m.exps()) {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(v);
        if e != 1 {
            write!(out, "^{e}").unwrap();
        }
    }
    (!out.is_empty()).then_some(out)
}

/// Canonical text: terms in ascending graded-lex order, `0` for zero.
pub fn format(f: &Polynomial) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        let (neg, abs) = match c {
            Coeff::Rational(q) if q.is_negative() => (true, Coeff::Rational(-q)),
            _ => (false, c.clone()),
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        match format_monomial(f.ring().vars(), m) {
            None => write!(out, "{abs}").unwrap(),
            Some(ms) if abs.is_one() => out.push_str(&ms),
            Some(ms) => write!(out, "{abs}*{ms}").unwrap(),
        }
    }
    out
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x", "s", "t", "u", "v"]).unwrap().into_arc()
    }

    #[test]
    fn rejects_parentheses() {
        let err = parse("x^6*u^2 + 2*x^3*t*(2*t^2-3*s*u)", &ring(), Field::Rational).unwrap_err();
        assert!(matches!(err, PolyError::Syntax { .. }), "{err:?}");
    }

    #[test]
    fn expanded_f3_parses() {
        let r = ring();
        let f = parse(
            "4*t^3*x^3 - 6*s*t*u*x^3 + x^6*u^2 + 4*s^3*u - 3*s^2*t^2",
            &r,
            Field::Rational,
        )
        .unwrap();
        assert_eq!(f.len(), 5);
        assert_eq!(format(&f), "-3*s^2*t^2 + 4*s^3*u + 4*x^3*t^3 - 6*x^3*s*t*u + x^6*u^2");
    }

    #[test]
    fn single_negative_rational_term() {
        let f = parse("-1/7*u^3", &ring(), Field::Rational).unwrap();
        assert_eq!(f.len(), 1);
        let (_, c) = f.terms().next().unwrap();
        assert_eq!(c, &Coeff::Rational(BigRational::new((-1).into(), 7.into())));
        assert_eq!(format(&f), "-1/7*u^3");
    }

    #[test]
    fn zero_and_constants() {
        let r = ring();
        assert_eq!(format(&Polynomial::zero(&r, Field::Rational)), "0");
        assert_eq!(format(&parse("0", &r, Field::Rational).unwrap()), "0");
        assert_eq!(format(&parse("-3", &r, Field::Rational).unwrap()), "-3");
        assert_eq!(format(&parse("x - x", &r, Field::Rational).unwrap()), "0");
    }

    #[test]
    fn prime_field_prints_residues() {
        let f = parse("v^3 - x^3*u", &ring(), Field::Prime(3)).unwrap();
        assert_eq!(format(&f), "v^3 + 2*x^3*u");
    }

    #[test]
    fn errors_carry_detail() {
        let r = ring();
        assert!(matches!(parse("q", &r, Field::Rational), Err(PolyError::UnknownVariable(_))));
        assert!(matches!(parse("1/0*x", &r, Field::Rational), Err(PolyError::MalformedRational(_))));
        assert!(matches!(parse("x +", &r, Field::Rational), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x^-1", &r, Field::Rational), Err(PolyError::NegativeExponent(_))));
        assert!(matches!(parse("", &r, Field::Rational), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn laurent_exponents_round_trip() {
        let r = Ring::new(&["t", "y"]).unwrap().with_laurent("y").unwrap().into_arc();
        let f = parse("t*y^-6 + 2", &r, Field::Rational).unwrap();
        assert_eq!(parse(&format(&f), &r, Field::Rational).unwrap(), f);
    }
}
