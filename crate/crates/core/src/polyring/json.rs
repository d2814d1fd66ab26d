//! JSON form: `{"ring": [...], "field": "Q" | {"GF": p}, "terms": [{"c": "n/d", "m": {"x": 2}}]}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::coeff::{Coeff, Field};
use super::monomial::Monomial;
use super::poly::Polynomial;
use super::ring::Ring;
use super::PolyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldJson {
    Q,
    GF(u64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub m: BTreeMap<String, i32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub ring: Vec<String>,
    pub field: FieldJson,
    pub terms: Vec<TermJson>,
}

impl From<Field> for FieldJson {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => FieldJson::Q,
            Field::Prime(p) => FieldJson::GF(p),
        }
    }
}

impl From<&Polynomial> for PolynomialJson {
    fn from(f: &Polynomial) -> Self {
        let vars = f.ring().vars();
        let terms = f
            .terms()
            .map(|(m, c)| TermJson {
                c: c.to_string(),
                m: vars
                    .iter()
                    .zip(m.exps())
                    .filter(|(_, &e)| e != 0)
                    .map(|(v, &e)| (v.clone(), e))
                    .collect(),
            })
            .collect();
        PolynomialJson {
            ring: vars.to_vec(),
            field: f.field().into(),
            terms,
        }
    }
}

impl PolynomialJson {
    /// Builds a ring from the variable list; variables carrying negative
    /// exponents are marked Laurent.
    pub fn ring(&self) -> Result<Ring, PolyError> {
        let mut ring = Ring::new(&self.ring)?;
        for t in &self.terms {
            for (v, &e) in &t.m {
                if e < 0 {
                    ring = ring.with_laurent(v)?;
                }
            }
        }
        Ok(ring)
    }

    pub fn field(&self) -> Result<Field, PolyError> {
        match self.field {
            FieldJson::Q => Ok(Field::Rational),
            FieldJson::GF(p) => Field::prime(p),
        }
    }

    /// Decodes into `ring`, which must declare the same variables in the same order.
    pub fn decode_in(&self, ring: &Arc<Ring>) -> Result<Polynomial, PolyError> {
        if ring.vars() != self.ring.as_slice() {
            return Err(PolyError::RingMismatch(ring.vars().to_vec(), self.ring.clone()));
        }
        let field = self.field()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let q: BigRational = t
                .c
                .trim()
                .parse()
                .map_err(|_| PolyError::MalformedRational(t.c.clone()))?;
            let c: Coeff = field.from_rational(&q)?;
            let mut exps = vec![0; ring.nvars()];
            for (v, &e) in &t.m {
                exps[ring.index_of(v)?] = e;
            }
            terms.push((Monomial::new(exps), c));
        }
        Polynomial::from_terms(ring, field, terms)
    }

    pub fn decode(&self) -> Result<Polynomial, PolyError> {
        self.decode_in(&self.ring()?.into_arc())
    }
}

impl Polynomial {
    pub fn to_json(&self) -> PolynomialJson {
        self.into()
    }
}

#[cfg(test)]
mod tests {
    use super::super::text::parse;
    use super::*;

    #[test]
    fn wire_shape() {
        let r = Ring::new(&["x", "t"]).unwrap().into_arc();
        let f = parse("x*t - 1/2", &r, Field::Rational).unwrap();
        let v = serde_json::to_value(f.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "ring": ["x", "t"],
                "field": "Q",
                "terms": [{"c": "-1/2", "m": {}}, {"c": "1", "m": {"x": 1, "t": 1}}]
            })
        );
        let g = parse("x*t + 4", &r, Field::Prime(5)).unwrap();
        let v = serde_json::to_value(g.to_json()).unwrap();
        assert_eq!(v["field"], serde_json::json!({"GF": 5}));
        let back: PolynomialJson = serde_json::from_value(v).unwrap();
        assert_eq!(back.decode_in(&r).unwrap(), g);
    }

    #[test]
    fn rejects_bad_coefficients() {
        let j: PolynomialJson = serde_json::from_str(
            r#"{"ring":["x"],"field":"Q","terms":[{"c":"1/x","m":{"x":1}}]}"#,
        )
        .unwrap();
        assert!(matches!(j.decode(), Err(PolyError::MalformedRational(_))));
        let j: PolynomialJson = serde_json::from_str(
            r#"{"ring":["x"],"field":{"GF":4},"terms":[]}"#,
        )
        .unwrap();
        assert!(matches!(j.decode(), Err(PolyError::NotPrime(4))));
    }
}
