//! Locally finite iterative higher derivations given by generator images.
//!
//! A derivation `θ: B → B[U]` is stored as the images of the generators of
//! `B`; it acts on arbitrary elements by substitution, so the Leibniz rule and
//! local finiteness hold by construction. What remains to check is
//! `θ^(0) = id` and iterativity. Iterativity is checked through the coaction
//! identity `θ_V(θ_U(g)) = θ(g)|_{U ↦ U+V}` on generators: both sides are
//! algebra homomorphisms `B → B[U, V]`, so agreement on generators gives the
//! binomial rule `θ^(j)∘θ^(k) = C(j+k, j)·θ^(j+k)` on all of `B`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::polyring::{parse, Field, Polynomial, PolynomialJson, Ring};
use crate::Error;

/// Pass, or the first failing generator with both sides of the failed identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub generator: String,
    pub check: &'static str,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Clone, Debug)]
pub struct HigherDerivation {
    base: Arc<Ring>,
    ext: Arc<Ring>,
    field: Field,
    images: Vec<Polynomial>,
}

impl HigherDerivation {
    /// `images[i]` is `θ(x_i)` in `base[U]`, where `U` is named `u_name`.
    pub fn new(
        base: &Arc<Ring>,
        field: Field,
        u_name: &str,
        images: Vec<Polynomial>,
    ) -> Result<Self, Error> {
        let ext = base.extend(&[u_name])?.into_arc();
        if images.len() != base.nvars() {
            return Err(Error::Derivation(format!(
                "{} images for {} generators",
                images.len(),
                base.nvars()
            )));
        }
        let images = images
            .iter()
            .map(|img| img.embed(&ext))
            .collect::<Result<Vec<_>, _>>()?;
        let d = HigherDerivation {
            base: base.clone(),
            ext,
            field,
            images,
        };
        for (i, img) in d.images.iter().enumerate() {
            if img.field() != field {
                return Err(Error::Derivation(format!("image of {} over {}", base.vars()[i], img.field())));
            }
            if d.at_u_zero(img) != d.generator(i) {
                return Err(Error::Derivation(format!(
                    "θ({v})|_(U=0) ≠ {v}",
                    v = base.vars()[i]
                )));
            }
        }
        Ok(d)
    }

    /// Parses images given as text over `base[U]`; the generator order is
    /// taken from `base`.
    pub fn from_strs(base: &Arc<Ring>, field: Field, images: &[&str]) -> Result<Self, Error> {
        let ext = base.extend(&["U"])?.into_arc();
        let images = images
            .iter()
            .map(|s| parse(s, &ext, field))
            .collect::<Result<Vec<_>, _>>()?;
        HigherDerivation::new(base, field, "U", images)
    }

    pub fn base(&self) -> &Arc<Ring> {
        &self.base
    }

    /// `base[U]`.
    pub fn extended(&self) -> &Arc<Ring> {
        &self.ext
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn u_index(&self) -> usize {
        self.base.nvars()
    }

    pub fn u_name(&self) -> &str {
        &self.ext.vars()[self.u_index()]
    }

    /// `θ(x_i)`.
    pub fn image(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    pub fn image_of(&self, var: &str) -> Result<&Polynomial, Error> {
        Ok(&self.images[self.base.index_of(var)?])
    }

    fn generator(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ext, self.field, &self.base.vars()[i]).unwrap()
    }

    fn at_u_zero(&self, f: &Polynomial) -> Polynomial {
        f.coeff_of_power(self.u_index(), 0)
    }

    /// `θ(f)` as an element of `base[U]`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, Error> {
        Ok(f.substitute(&self.ext, &self.images)?)
    }

    /// `θ^(n)(f)`, the coefficient of `U^n` in `θ(f)`.
    pub fn theta_n(&self, f: &Polynomial, n: u32) -> Result<Polynomial, Error> {
        let full = self.apply(f)?;
        Ok(full.coeff_of_power(self.u_index(), n as i32).embed(&self.base)?)
    }

    /// All `θ^(n)(f)` for `n = 0..=deg_U θ(f)`.
    pub fn theta_all(&self, f: &Polynomial) -> Result<Vec<Polynomial>, Error> {
        let full = self.apply(f)?;
        let top = full.degree_in(self.u_index()).unwrap_or(0);
        (0..=top)
            .map(|n| Ok(full.coeff_of_power(self.u_index(), n).embed(&self.base)?))
            .collect()
    }

    pub fn is_invariant(&self, f: &Polynomial) -> Result<bool, Error> {
        Ok(self.apply(f)? == f.embed(&self.ext)?)
    }

    /// Checks `θ(g)|_{U=0} = g` and the coaction identity on every generator.
    pub fn check_axioms(&self) -> Result<Verdict, Error> {
        for (i, img) in self.images.iter().enumerate() {
            let g = self.generator(i);
            let at_zero = self.at_u_zero(img);
            if at_zero != g {
                return Ok(Verdict::Fail(Witness {
                    generator: self.base.vars()[i].clone(),
                    check: "identity at U = 0",
                    lhs: at_zero,
                    rhs: g,
                }));
            }
        }
        if self.base.position("V").is_some() {
            return Err(Error::Derivation("generator named V clashes with the coaction variable".into()));
        }
        let two = self.ext.extend(&["V"])?.into_arc();
        let var2 = |name: &str| Polynomial::var(&two, self.field, name).unwrap();
        let u_poly = var2(self.u_name());
        let v_poly = var2("V");

        // θ with U renamed to V, landing in base[U, V].
        let mut rename: Vec<Polynomial> = self.base.vars().iter().map(|v| var2(v)).collect();
        rename.push(v_poly.clone());
        let theta_v: Vec<Polynomial> = self
            .images
            .iter()
            .map(|img| img.substitute(&two, &rename))
            .collect::<Result<_, _>>()?;

        let mut lhs_map = theta_v;
        lhs_map.push(u_poly.clone());
        let mut rhs_map: Vec<Polynomial> = self.base.vars().iter().map(|v| var2(v)).collect();
        rhs_map.push(&u_poly + &v_poly);

        for (i, img) in self.images.iter().enumerate() {
            let lhs = img.substitute(&two, &lhs_map)?;
            let rhs = img.substitute(&two, &rhs_map)?;
            if lhs != rhs {
                return Ok(Verdict::Fail(Witness {
                    generator: self.base.vars()[i].clone(),
                    check: "coaction",
                    lhs,
                    rhs,
                }));
            }
        }
        Ok(Verdict::Pass)
    }

    /// True iff each `θ(g)` is homogeneous of degree `w(g)` when `U` has
    /// weight `u_weight`.
    pub fn check_homogeneous(&self, grading: &str, u_weight: i64) -> Result<bool, Error> {
        let mut weights = self.base.grading(grading)?.to_vec();
        weights.push(u_weight);
        Ok(self.images.iter().enumerate().all(|(i, img)| {
            img.is_homogeneous_with(&weights) && img.weighted_degrees(&weights).all(|d| d == weights[i])
        }))
    }

    /// Restriction to a subring on a subset of the generators whose images
    /// stay inside it.
    pub fn restrict(&self, sub: &Arc<Ring>) -> Result<HigherDerivation, Error> {
        let sub_ext = sub.extend(&[self.u_name()])?.into_arc();
        let images = sub
            .vars()
            .iter()
            .map(|v| {
                self.image_of(v)?.embed(&sub_ext).map_err(|_| {
                    Error::Derivation(format!("θ({v}) leaves the subring"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        HigherDerivation::new(sub, self.field, self.u_name(), images)
    }

    pub fn to_json(&self) -> DerivationJson {
        DerivationJson {
            ring: self.base.vars().to_vec(),
            u: self.u_name().to_string(),
            images: self
                .base
                .vars()
                .iter()
                .zip(&self.images)
                .map(|(v, img)| (v.clone(), img.to_json()))
                .collect(),
        }
    }
}

/// `{"ring": [...], "U": "U", "images": {"var": <polynomial JSON>}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivationJson {
    pub ring: Vec<String>,
    #[serde(rename = "U")]
    pub u: String,
    pub images: BTreeMap<String, PolynomialJson>,
}

impl DerivationJson {
    pub fn decode(&self) -> Result<HigherDerivation, Error> {
        let base = Ring::new(&self.ring)?.into_arc();
        let ext = base.extend(&[self.u.as_str()])?.into_arc();
        let mut images = Vec::with_capacity(base.nvars());
        let mut field = None;
        for v in base.vars() {
            let j = self
                .images
                .get(v)
                .ok_or_else(|| Error::Derivation(format!("no image for {v}")))?;
            let img = j.decode_in(&ext)?;
            field.get_or_insert(img.field());
            images.push(img);
        }
        let field = field.unwrap_or(Field::Rational);
        HigherDerivation::new(&base, field, &self.u, images)
    }
}

/// A ring homomorphism given by images of the source generators.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Arc<Ring>,
    target: Arc<Ring>,
    images: Vec<Polynomial>,
}

impl RingHom {
    pub fn new(source: &Arc<Ring>, target: &Arc<Ring>, images: Vec<Polynomial>) -> Result<Self, Error> {
        if images.len() != source.nvars() {
            return Err(Error::Derivation(format!(
                "{} images for {} source generators",
                images.len(),
                source.nvars()
            )));
        }
        let images = images
            .iter()
            .map(|img| img.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RingHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn from_strs(
        source: &Arc<Ring>,
        target: &Arc<Ring>,
        field: Field,
        images: &[&str],
    ) -> Result<Self, Error> {
        let images = images
            .iter()
            .map(|s| parse(s, target, field))
            .collect::<Result<Vec<_>, _>>()?;
        RingHom::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<Ring> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Ring> {
        &self.target
    }

    pub fn image_of(&self, var: &str) -> Result<&Polynomial, Error> {
        Ok(&self.images[self.source.index_of(var)?])
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, Error> {
        Ok(f.substitute(&self.target, &self.images)?)
    }

    /// Checks `φ_U(θ_src(g)) = θ_tgt(φ(g))` on every source generator, with
    /// `φ_U` the extension of `φ` fixing `U`.
    pub fn check_equivariant(
        &self,
        src: &HigherDerivation,
        tgt: &HigherDerivation,
    ) -> Result<Verdict, Error> {
        if src.base() != &self.source || tgt.base() != &self.target {
            return Err(Error::Derivation("homomorphism and derivations disagree on rings".into()));
        }
        let mut lifted: Vec<Polynomial> = self
            .images
            .iter()
            .map(|img| img.embed(tgt.extended()))
            .collect::<Result<_, _>>()?;
        lifted.push(Polynomial::var(tgt.extended(), tgt.field(), tgt.u_name())?);
        for (i, v) in self.source.vars().iter().enumerate() {
            let lhs = src.image(i).substitute(tgt.extended(), &lifted)?;
            let rhs = tgt.apply(&self.images[i])?;
            if lhs != rhs {
                return Ok(Verdict::Fail(Witness {
                    generator: v.clone(),
                    check: "equivariance",
                    lhs,
                    rhs,
                }));
            }
        }
        Ok(Verdict::Pass)
    }
}
