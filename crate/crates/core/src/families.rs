//! The three parametrized example families, their connecting homomorphisms,
//! the homogenization lift from the five- to the six-variable example, slice
//! invariants, and the generator sets of the `v`-free subrings.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::lfihd::{HigherDerivation, RingHom, Verdict};
use crate::polyring::{parse, Field, Monomial, Polynomial, Ring};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Df5,
    F6,
    R7,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Df5, Family::F6, Family::R7];

    /// Name of the family's own grading.
    pub fn grading(self) -> &'static str {
        match self {
            Family::Df5 => "w5",
            Family::F6 => "w6",
            Family::R7 => "w7",
        }
    }

    /// Degree of `v^p` in the family grading is `factor·m·p`.
    pub fn degree_factor(self) -> i64 {
        match self {
            Family::Df5 => 1,
            Family::F6 => 2,
            Family::R7 => 3,
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            Family::Df5 => &["x", "s", "t", "u", "v"],
            Family::F6 => &["x", "y", "s", "t", "u", "v"],
            Family::R7 => &["x1", "x2", "x3", "y1", "y2", "y3", "v"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Df5 => "DF5",
            Family::F6 => "F6",
            Family::R7 => "R7",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "df5" => Ok(Family::Df5),
            "f6" => Ok(Family::F6),
            "r7" => Ok(Family::R7),
            _ => Err(Error::Parameter(format!("unknown family {s:?}"))),
        }
    }
}

pub(crate) fn check_m(m: u32) -> Result<(), Error> {
    if m < 2 {
        return Err(Error::Parameter(format!("m must be at least 2, got {m}")));
    }
    Ok(())
}

/// The full ring `B` of a family with its gradings.
pub fn family_ring(family: Family, m: u32) -> Result<Ring, Error> {
    check_m(m)?;
    let (m, k) = (m as i64, m as i64 + 1);
    let ring = Ring::new(family.vars())?;
    Ok(match family {
        Family::Df5 => ring
            .with_grading("w5", &[1, k, k, k, m])?
            .with_grading("w4", &[0, 1, 2, 3, 1])?,
        Family::F6 => ring.with_grading("w6", &[1, 1, k, 2 * k, 3 * k, 2 * m])?,
        Family::R7 => ring.with_grading("w7", &[1, 1, 1, k, k, k, 3 * m])?,
    })
}

/// The `v`-free subring `A` of a family, with the restricted gradings.
pub fn subring(family: Family, m: u32) -> Result<Ring, Error> {
    let full = family_ring(family, m)?;
    let vars: Vec<&str> = family.vars().iter().copied().filter(|&v| v != "v").collect();
    let mut ring = Ring::new(&vars)?;
    for (name, w) in full.gradings() {
        ring = ring.with_grading(name, &w[..vars.len()])?;
    }
    Ok(ring)
}

fn images(family: Family, m: u32) -> Vec<String> {
    let k = m + 1;
    match family {
        Family::Df5 => vec![
            "x".into(),
            format!("s + x^{k}*U"),
            format!("t + 2*s*U + x^{k}*U^2"),
            format!("u + 3*t*U + 3*s*U^2 + x^{k}*U^3"),
            format!("v + x^{m}*U"),
        ],
        Family::F6 => vec![
            "x".into(),
            "y".into(),
            format!("s + x^{k}*U"),
            format!("t + 2*y^{k}*s*U + x^{k}*y^{k}*U^2"),
            format!("u + 3*y^{k}*t*U + 3*y^{}*s*U^2 + x^{k}*y^{}*U^3", 2 * k, 2 * k),
            format!("v + x^{m}*y^{m}*U"),
        ],
        Family::R7 => vec![
            "x1".into(),
            "x2".into(),
            "x3".into(),
            format!("y1 + x1^{k}*U"),
            format!("y2 + x2^{k}*U"),
            format!("y3 + x3^{k}*U"),
            format!("v + x1^{m}*x2^{m}*x3^{m}*U"),
        ],
    }
}

#[derive(Clone, Debug)]
pub struct ExampleBundle {
    pub family: Family,
    pub m: u32,
    pub field: Field,
    pub ring: Arc<Ring>,
    pub derivation: HigherDerivation,
    pub subring: Arc<Ring>,
    pub sub_derivation: HigherDerivation,
}

impl ExampleBundle {
    pub fn grading(&self) -> &'static str {
        self.family.grading()
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, Error> {
        Ok(parse(text, &self.ring, self.field)?)
    }

    pub fn parse_sub(&self, text: &str) -> Result<Polynomial, Error> {
        Ok(parse(text, &self.subring, self.field)?)
    }
}

/// The family's derivation as defined, before any verification.
pub fn family_derivation(family: Family, m: u32, field: Field) -> Result<HigherDerivation, Error> {
    let ring = family_ring(family, m)?.into_arc();
    let imgs = images(family, m);
    let refs: Vec<&str> = imgs.iter().map(String::as_str).collect();
    HigherDerivation::from_strs(&ring, field, &refs)
}

/// Builds a family and verifies its axioms and homogeneity; any failure is a
/// falsification of the construction.
pub fn build_example(family: Family, m: u32, field: Field) -> Result<ExampleBundle, Error> {
    let derivation = family_derivation(family, m, field)?;
    let ring = derivation.base().clone();
    let subring = subring(family, m)?.into_arc();
    let sub_derivation = derivation.restrict(&subring)?;

    let falsified = |detail: String| Error::Falsified {
        step: format!("{family}-{m} construction"),
        detail,
    };
    if let Verdict::Fail(w) = derivation.check_axioms()? {
        return Err(falsified(format!("{} fails on {}", w.check, w.generator)));
    }
    if !derivation.check_homogeneous(family.grading(), 0)? {
        return Err(falsified(format!("not {}-homogeneous", family.grading())));
    }
    if family == Family::Df5 && !derivation.check_homogeneous("w4", 1)? {
        return Err(falsified("not w4-homogeneous".into()));
    }
    Ok(ExampleBundle {
        family,
        m,
        field,
        ring,
        derivation,
        subring,
        sub_derivation,
    })
}

/// `α: B6 → B7` respecting the derivations.
pub fn alpha_hom(m: u32, field: Field) -> Result<RingHom, Error> {
    let src = family_ring(Family::F6, m)?.into_arc();
    let tgt = family_ring(Family::R7, m)?.into_arc();
    let k = m + 1;
    let p = |s: &str| parse(s, &tgt, field);
    let t_image = &(&p(&format!("x3^{k}*y2"))? + &p(&format!("x2^{k}*y3"))?) * &p("y1")?
        - p(&format!("x1^{k}*y2*y3"))?;
    let quad = p(&format!("x2^{}*y3^2", 2 * k))?
        + p(&format!("x2^{k}*x3^{k}*y2*y3"))?
        + p(&format!("x3^{}*y2^2", 2 * k))?;
    let u_image = &quad * &p("y1")?
        - &(&p(&format!("x3^{k}*y2"))? + &p(&format!("x2^{k}*y3"))?) * &p(&format!("x1^{k}*y2*y3"))?;
    let images = vec![p("x1")?, p("x2*x3")?, p("y1")?, t_image, u_image, p("v")?];
    RingHom::new(&src, &tgt, images)
}

/// The quotient `B6 → B6/(y − 1) ≅ B5`.
pub fn quotient_y1(m: u32, field: Field) -> Result<RingHom, Error> {
    let src = family_ring(Family::F6, m)?.into_arc();
    let tgt = family_ring(Family::Df5, m)?.into_arc();
    RingHom::from_strs(&src, &tgt, field, &["x", "1", "s", "t", "u", "v"])
}

/// `y^target · f(x/y, s/y^(m+1), t/y^(2(m+1)), u/y^(3(m+1)))`, computed in
/// `A6[1/y]` and required to land in `A6`.
pub fn y_homogenize(f: &Polynomial, m: u32, target: i64) -> Result<Polynomial, Error> {
    let a5 = subring(Family::Df5, m)?.into_arc();
    let a6 = subring(Family::F6, m)?.into_arc();
    let f = f.embed(&a5)?;
    if !f.is_homogeneous("w5")? {
        return Err(Error::Parameter(format!("{f} is not w5-homogeneous")));
    }
    let laurent = a6.as_ref().clone().with_laurent("y")?.into_arc();
    let k = m + 1;
    let images: Vec<Polynomial> = [
        "x*y^-1".to_string(),
        format!("s*y^-{k}"),
        format!("t*y^-{}", 2 * k),
        format!("u*y^-{}", 3 * k),
    ]
    .iter()
    .map(|s| parse(s, &laurent, f.field()))
    .collect::<Result<_, _>>()?;
    let y_target = Monomial::var(laurent.nvars(), 1, target as i32);
    let lifted = f
        .substitute(&laurent, &images)?
        .mul_term(&y_target, &f.field().one());
    let out = lifted.embed(&a6).map_err(|e| Error::Falsified {
        step: "y-homogenization bound".into(),
        detail: format!("{e} while lifting {f} to w6-degree {target}"),
    })?;
    if !out.is_zero() && (!out.is_homogeneous("w6")? || out.weighted_degree("w6")? != target) {
        return Err(Error::Falsified {
            step: "y-homogenization degree".into(),
            detail: format!("{out} is not w6-homogeneous of degree {target}"),
        });
    }
    Ok(out)
}

/// `θ(g)` evaluated at the slice point, plus its denominator-cleared form.
#[derive(Clone, Debug)]
pub struct SliceInvariant {
    pub generator: String,
    /// Element of the `v`-free ring localized at the slice coefficient variable.
    pub value: Polynomial,
    /// `value` times the least power of the localized variable making it polynomial.
    pub cleared: Polynomial,
    pub invariant: bool,
}

/// Evaluates `θ(g)` at `U = −s/x^(m+1)` (DF5, F6) or `U = −y1/x1^(m+1)` (R7)
/// for every generator other than the slice.
pub fn slice_invariants(family: Family, m: u32, field: Field) -> Result<Vec<SliceInvariant>, Error> {
    let bundle = build_example(family, m, field)?;
    let (slice, xvar) = match family {
        Family::Df5 | Family::F6 => ("s", "x"),
        Family::R7 => ("y1", "x1"),
    };
    let sub = &bundle.subring;
    let laurent = sub.as_ref().clone().with_laurent(xvar)?.into_arc();
    let xi = laurent.index_of(xvar)?;
    let mut point: Vec<Polynomial> = sub
        .vars()
        .iter()
        .map(|v| Polynomial::var(&laurent, field, v))
        .collect::<Result<_, _>>()?;
    point.push(parse(&format!("-{slice}*{xvar}^-{}", m + 1), &laurent, field)?);

    let mut out = Vec::new();
    for (i, g) in sub.vars().iter().enumerate() {
        if g == slice {
            continue;
        }
        let value = bundle.sub_derivation.image(i).substitute(&laurent, &point)?;
        let shift = value
            .terms()
            .map(|(mono, _)| -mono.exp(xi))
            .max()
            .unwrap_or(0)
            .max(0);
        let cleared = value
            .mul_term(&Monomial::var(laurent.nvars(), xi, shift), &field.one())
            .embed(sub)?;
        let invariant = bundle.sub_derivation.is_invariant(&cleared)?;
        out.push(SliceInvariant {
            generator: g.clone(),
            value,
            cleared,
            invariant,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub poly: Polynomial,
    pub provenance: String,
    pub invariant: bool,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub family: Family,
    pub m: u32,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn all_invariant(&self) -> bool {
        self.generators.iter().all(|g| g.invariant)
    }
}

/// Reference generators of the invariants of the `v`-free subring for `m = 2`,
/// in this crate's text grammar.
pub fn printed_generators_m2(family: Family) -> &'static [&'static str] {
    match family {
        Family::Df5 => &[
            "x",
            "x^3*t - s^2",
            "x^6*u - 3*x^3*s*t + 2*s^3",
            "x^6*u^2 + 4*x^3*t^3 - 6*x^3*s*t*u + 4*s^3*u - 3*s^2*t^2",
        ],
        Family::F6 => &[
            "x",
            "y",
            "x^3*t - y^3*s^2",
            "x^6*u - 3*x^3*y^3*s*t + 2*y^6*s^3",
            "x^6*u^2 + 4*x^3*y^3*t^3 - 6*x^3*y^3*s*t*u + 4*y^6*s^3*u - 3*y^6*s^2*t^2",
        ],
        Family::R7 => &[
            "x1",
            "x2",
            "x3",
            "x1^3*y2 - x2^3*y1",
            "x1^3*y3 - x3^3*y1",
            "x2^3*y3 - x3^3*y2",
        ],
    }
}

/// The two readings of the reference second generator of the six-variable
/// `v`-free invariants: with `x^3·x^3` and with `x^3·y^3`.
pub fn a6_second_generator_readings(field: Field) -> Result<Vec<(&'static str, Polynomial, bool)>, Error> {
    let bundle = build_example(Family::F6, 2, field)?;
    ["x^6*u - 3*x^3*x^3*s*t + 2*y^6*s^3", "x^6*u - 3*x^3*y^3*s*t + 2*y^6*s^3"]
        .into_iter()
        .map(|text| {
            let f = bundle.parse_sub(text)?;
            let inv = bundle.sub_derivation.is_invariant(&f)?;
            Ok((text, f, inv))
        })
        .collect()
}

/// Invariants of the `v`-free subring: the slice-derived generators plus, for
/// DF5 and F6, the one extra generator obtained by dividing the relation
/// `4·f1³ + f2²` (resp. `4·y^(m+1)·f1³ + f2²`) by `x^(2(m+1))`.
pub fn known_generators(family: Family, m: u32, field: Field) -> Result<GeneratorSet, Error> {
    let bundle = build_example(family, m, field)?;
    let k = m + 1;
    let p = |s: &str| bundle.parse_sub(s);
    let provenance = if m == 2 {
        "reference"
    } else {
        "parametrized from m = 2; accepted on invariance"
    };
    let mut named: Vec<(String, Polynomial, &str)> = Vec::new();
    let divide = |rel: Polynomial| -> Result<Polynomial, Error> {
        let xi = bundle.subring.index_of("x")?;
        let mono = Monomial::var(bundle.subring.nvars(), xi, 2 * k as i32);
        rel.div_monomial(&mono).map_err(|e| Error::Falsified {
            step: format!("{family}-{m} relation division"),
            detail: e.to_string(),
        })
    };
    match family {
        Family::Df5 => {
            let f1 = p(&format!("x^{k}*t - s^2"))?;
            let f2 = p(&format!("x^{}*u - 3*x^{k}*s*t + 2*s^3", 2 * k))?;
            let f3 = divide(f1.pow(3).scale_i64(4) + f2.pow(2))?;
            named.push(("x".into(), p("x")?, "variable"));
            named.push(("f1".into(), f1, provenance));
            named.push(("f2".into(), f2, provenance));
            named.push(("f3".into(), f3, provenance));
        }
        Family::F6 => {
            let g1 = p(&format!("x^{k}*t - y^{k}*s^2"))?;
            let g2 = p(&format!("x^{}*u - 3*x^{k}*y^{k}*s*t + 2*y^{}*s^3", 2 * k, 2 * k))?;
            let g3 = divide(&p(&format!("4*y^{k}"))? * &g1.pow(3) + g2.pow(2))?;
            named.push(("x".into(), p("x")?, "variable"));
            named.push(("y".into(), p("y")?, "variable"));
            named.push(("f1".into(), g1, provenance));
            named.push(("f2".into(), g2, provenance));
            named.push(("f3".into(), g3, provenance));
        }
        Family::R7 => {
            for i in 1..=3 {
                named.push((format!("x{i}"), p(&format!("x{i}"))?, "variable"));
            }
            for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                let g = p(&format!("x{i}^{k}*y{j} - x{j}^{k}*y{i}"))?;
                named.push((format!("g{i}{j}"), g, provenance));
            }
        }
    }
    let generators = named
        .into_iter()
        .map(|(name, poly, prov)| {
            let invariant = bundle.sub_derivation.is_invariant(&poly)?;
            Ok(Generator {
                name,
                poly,
                provenance: prov.to_string(),
                invariant,
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(GeneratorSet {
        family,
        m,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::format;

    #[test]
    fn derivation_tables() {
        let df5 = build_example(Family::Df5, 2, Field::Rational).unwrap();
        assert_eq!(format(df5.derivation.image_of("v").unwrap()), "v + x^2*U");
        let r7 = build_example(Family::R7, 3, Field::Prime(5)).unwrap();
        assert_eq!(format(r7.derivation.image_of("y1").unwrap()), "y1 + x1^4*U");
        let f6 = build_example(Family::F6, 2, Field::Rational).unwrap();
        assert_eq!(
            f6.derivation.image_of("u").unwrap(),
            &parse("u + 3*y^3*t*U + 3*y^6*s*U^2 + x^3*y^6*U^3", f6.derivation.extended(), Field::Rational)
                .unwrap()
        );
        assert!(matches!(build_example(Family::Df5, 1, Field::Rational), Err(Error::Parameter(_))));
    }

    #[test]
    fn alpha_images_at_m2() {
        let a = alpha_hom(2, Field::Rational).unwrap();
        assert_eq!(format(a.image_of("y").unwrap()), "x2*x3");
        assert_eq!(format(a.image_of("s").unwrap()), "y1");
        let tgt = a.target().clone();
        let expected_u = parse(
            "x2^6*y3^2*y1 + x2^3*x3^3*y2*y3*y1 + x3^6*y2^2*y1 - x3^3*y2*x1^3*y2*y3 - x2^3*y3*x1^3*y2*y3",
            &tgt,
            Field::Rational,
        )
        .unwrap();
        assert_eq!(a.image_of("u").unwrap(), &expected_u);
    }

    #[test]
    fn homomorphisms_are_equivariant() {
        for m in 2..=3 {
            let f6 = build_example(Family::F6, m, Field::Rational).unwrap();
            let r7 = build_example(Family::R7, m, Field::Rational).unwrap();
            let df5 = build_example(Family::Df5, m, Field::Rational).unwrap();
            let a = alpha_hom(m, Field::Rational).unwrap();
            assert!(a.check_equivariant(&f6.derivation, &r7.derivation).unwrap().passed());
            let q = quotient_y1(m, Field::Rational).unwrap();
            assert!(q.check_equivariant(&f6.derivation, &df5.derivation).unwrap().passed());
        }
    }

    #[test]
    fn naive_map_is_not_equivariant() {
        let f6 = build_example(Family::F6, 2, Field::Rational).unwrap();
        let r7 = build_example(Family::R7, 2, Field::Rational).unwrap();
        let naive = RingHom::from_strs(
            f6.derivation.base(),
            r7.derivation.base(),
            Field::Rational,
            &["x1", "x2*x3", "y1", "y2", "y3", "v"],
        )
        .unwrap();
        match naive.check_equivariant(&f6.derivation, &r7.derivation).unwrap() {
            Verdict::Fail(w) => assert_eq!(w.generator, "t"),
            Verdict::Pass => panic!("naive map passed"),
        }
    }

    #[test]
    fn quotient_sends_theta_t_to_df5() {
        let f6 = build_example(Family::F6, 2, Field::Rational).unwrap();
        let df5 = build_example(Family::Df5, 2, Field::Rational).unwrap();
        let q = quotient_y1(2, Field::Rational).unwrap();
        let mut lifted: Vec<Polynomial> = ["x", "1", "s", "t", "u", "v", "U"]
            .iter()
            .map(|s| parse(s, df5.derivation.extended(), Field::Rational).unwrap())
            .collect();
        let img = f6.derivation.image_of("t").unwrap().substitute(df5.derivation.extended(), &lifted).unwrap();
        assert_eq!(&img, df5.derivation.image_of("t").unwrap());
        lifted.pop();
        assert_eq!(format(&q.apply(&f6.parse("s").unwrap()).unwrap()), "s");
    }

    #[test]
    fn y_homogenization_examples() {
        let a5 = subring(Family::Df5, 2).unwrap().into_arc();
        let a6 = subring(Family::F6, 2).unwrap().into_arc();
        let p5 = |s: &str| parse(s, &a5, Field::Rational).unwrap();
        let p6 = |s: &str| parse(s, &a6, Field::Rational).unwrap();
        assert_eq!(y_homogenize(&p5("x*t"), 2, 8).unwrap(), p6("x*y*t"));
        assert_eq!(y_homogenize(&p5("x^3*u"), 2, 12).unwrap(), p6("x^3*u"));
        assert_eq!(y_homogenize(&p5("1"), 2, 0).unwrap(), p6("1"));
        match y_homogenize(&p5("u"), 2, 8) {
            Err(Error::Falsified { step, .. }) => assert_eq!(step, "y-homogenization bound"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn slices_at_m2() {
        let slices = slice_invariants(Family::Df5, 2, Field::Rational).unwrap();
        let laurent = slices[0].value.ring().clone();
        let by_name = |g: &str| slices.iter().find(|s| s.generator == g).unwrap();
        assert_eq!(by_name("x").value, parse("x", &laurent, Field::Rational).unwrap());
        assert_eq!(by_name("t").value, parse("t - s^2*x^-3", &laurent, Field::Rational).unwrap());
        assert_eq!(
            by_name("u").value,
            parse("u - 3*s*t*x^-3 + 2*s^3*x^-6", &laurent, Field::Rational).unwrap()
        );
        assert!(slices.iter().all(|s| s.invariant));
        for fam in [Family::F6, Family::R7] {
            assert!(slice_invariants(fam, 3, Field::Rational).unwrap().iter().all(|s| s.invariant));
        }
    }

    #[test]
    fn generator_sets_match_print_at_m2() {
        for fam in Family::ALL {
            let set = known_generators(fam, 2, Field::Rational).unwrap();
            assert!(set.all_invariant());
            let printed: Vec<String> = printed_generators_m2(fam)
                .iter()
                .map(|s| format(&parse(s, &set.generators[0].poly.ring().clone(), Field::Rational).unwrap()))
                .collect();
            let ours: Vec<String> = set.generators.iter().map(|g| format(&g.poly)).collect();
            assert_eq!(ours, printed, "{fam}");
        }
    }

    #[test]
    fn six_variable_x_only_reading_is_rejected() {
        let readings = a6_second_generator_readings(Field::Rational).unwrap();
        assert!(!readings[0].2, "x^3*x^3 reading unexpectedly invariant");
        assert!(readings[1].2);
    }

    #[test]
    fn f6_generators_lift_df5_generators() {
        for m in 2..=4 {
            let df5 = known_generators(Family::Df5, m, Field::Rational).unwrap();
            let f6 = known_generators(Family::F6, m, Field::Rational).unwrap();
            for (a, b) in df5.generators[1..].iter().zip(&f6.generators[2..]) {
                let target = b.poly.weighted_degree("w6").unwrap();
                assert_eq!(y_homogenize(&a.poly, m, target).unwrap(), b.poly);
            }
        }
    }
}
