use std::collections::BTreeMap;
use std::sync::Arc;

use super::PolyError;

/// Ordered variable list with per-variable Laurent flags and named integer gradings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<String>,
    laurent: Vec<bool>,
    gradings: BTreeMap<String, Vec<i64>>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Self, PolyError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(PolyError::InvalidRing(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::InvalidRing(format!("duplicate variable {v}")));
            }
        }
        let n = vars.len();
        Ok(Ring {
            vars,
            laurent: vec![false; n],
            gradings: BTreeMap::new(),
        })
    }

    /// Marks `var` as admitting negative exponents.
    pub fn with_laurent(mut self, var: &str) -> Result<Self, PolyError> {
        let i = self.index_of(var)?;
        self.laurent[i] = true;
        Ok(self)
    }

    pub fn with_grading(mut self, name: &str, weights: &[i64]) -> Result<Self, PolyError> {
        if weights.len() != self.vars.len() {
            return Err(PolyError::InvalidRing(format!(
                "grading {name} has {} weights for {} variables",
                weights.len(),
                self.vars.len()
            )));
        }
        self.gradings.insert(name.to_string(), weights.to_vec());
        Ok(self)
    }

    /// Appends new variables; they get weight 0 in every existing grading.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self, PolyError> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|v| v.as_ref().to_string()));
        let mut out = Ring::new(&vars)?;
        out.laurent[..self.laurent.len()].copy_from_slice(&self.laurent);
        for (name, w) in &self.gradings {
            let mut w = w.clone();
            w.resize(vars.len(), 0);
            out.gradings.insert(name.clone(), w);
        }
        Ok(out)
    }

    /// Same variables and gradings with every Laurent flag cleared.
    pub fn polynomial_part(&self) -> Self {
        Ring {
            laurent: vec![false; self.vars.len()],
            ..self.clone()
        }
    }

    pub fn into_arc(self) -> Arc<Ring> {
        Arc::new(self)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_laurent(&self, i: usize) -> bool {
        self.laurent[i]
    }

    pub fn index_of(&self, var: &str) -> Result<usize, PolyError> {
        self.position(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))
    }

    pub fn position(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    pub fn grading(&self, name: &str) -> Result<&[i64], PolyError> {
        self.gradings
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| PolyError::UnknownGrading(name.to_string()))
    }

    pub fn gradings(&self) -> impl Iterator<Item = (&str, &[i64])> {
        self.gradings.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

fn valid_name(v: &str) -> bool {
    let mut chars = v.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}
