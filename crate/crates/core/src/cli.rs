//! Command-line driver.
//!
//! Exit codes: 0 when every check passed, 1 when a verification failed, 2 for
//! usage or input errors, 3 when a step the construction guarantees did not
//! hold.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::families::{
    a6_second_generator_readings, build_example, family_derivation, known_generators, printed_generators_m2, Family,
};
use crate::lfihd::{DerivationJson, Verdict};
use crate::polyring::{format, is_prime, parse, Field, Polynomial, PolynomialJson};
use crate::sequence::{extend_sequence, sequence_up_to, verify_sequence, SequenceTable};
use crate::specialinv::{check_p, special_invariant, special_invariant_with, theta_binomial_check};
use crate::{Check, Error};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "gainv",
    version,
    about = "Exact special invariants of additive-group actions",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    /// Run every family over a grid of primes and parameters, e.g. `--grid p=2..13 m=2..5`.
    #[arg(long, num_args = 2, value_names = ["P_RANGE", "M_RANGE"])]
    pub grid: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `Q` or a prime `p` for `GF(p)`.
fn parse_field(s: &str) -> Result<Field, String> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(Field::Rational);
    }
    let p: u64 = s.parse().map_err(|_| format!("expected Q or a prime, got {s:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the example actions.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
    /// Construct and verify the special invariant of a family over GF(p).
    Invariant {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(short)]
        p: u64,
        #[arg(short, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
    },
    /// Re-check a serialized invariant, or a {"derivation", "polynomial"} pair.
    Verify { path: PathBuf },
    /// Build and verify the sequence h_0..h_N.
    Sequence {
        #[arg(short)]
        n: usize,
        /// Primes for the valuation checks; defaults to all primes up to N.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Check the derivation axioms and gradings of a family.
    Axioms {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(short, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
        #[arg(long, value_parser = parse_field, default_value = "Q")]
        field: Field,
    },
    /// List generators of the invariants of the v-free subring.
    Kernel {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(short, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
        #[arg(long, value_parser = parse_field, default_value = "Q")]
        field: Field,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesAction {
    /// Print the derivation images and gradings.
    Show {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(short, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
        #[arg(long, value_parser = parse_field, default_value = "Q")]
        field: Field,
    },
}

/// Result of a command: whether every check passed and both renderings.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    /// Set when some cell hit a falsification that was reported rather than raised.
    pub falsified: bool,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn new(passed: bool, text: String, json: Value) -> Self {
        Outcome {
            passed,
            falsified: false,
            text,
            json,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match (self.falsified, self.passed) {
            (true, _) => 3,
            (false, true) => 0,
            (false, false) => 1,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

pub fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Derivation(_) => 2,
        Error::Poly(_) | Error::Linalg(_) | Error::Falsified { .. } => 3,
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn render_checks(out: &mut String, checks: &[Check]) {
    for c in checks {
        if c.detail.is_empty() {
            let _ = writeln!(out, "[{}] {}", mark(c.passed), c.name);
        } else {
            let _ = writeln!(out, "[{}] {}: {}", mark(c.passed), c.name, c.detail);
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    if let Some(grid) = &cli.grid {
        return cmd_grid(&grid[0], &grid[1]);
    }
    match &cli.command {
        None => Err(Error::Parameter("a subcommand or --grid is required".into())),
        Some(Command::Examples {
            action: ExamplesAction::Show { family, m, field },
        }) => cmd_examples_show(*family, *m, *field),
        Some(Command::Invariant { family, p, m }) => cmd_invariant(*family, *p, *m),
        Some(Command::Verify { path }) => cmd_verify(path),
        Some(Command::Sequence { n, primes }) => cmd_sequence(*n, primes.as_deref()),
        Some(Command::Axioms { family, m, field }) => cmd_axioms(*family, *m, *field),
        Some(Command::Kernel { family, m, field }) => cmd_kernel(*family, *m, *field),
    }
}

pub fn cmd_examples_show(family: Family, m: u32, field: Field) -> Result<Outcome, Error> {
    let d = family_derivation(family, m, field)?;
    let mut text = format!("{family}-{m} over {field}\n");
    for v in d.base().vars() {
        let _ = writeln!(text, "theta({v}) = {}", d.image_of(v)?);
    }
    let mut gradings = serde_json::Map::new();
    for (name, w) in d.base().gradings() {
        let pairs: Vec<String> = d.base().vars().iter().zip(w).map(|(v, w)| format!("{v}={w}")).collect();
        let _ = writeln!(text, "{name}: {}", pairs.join(" "));
        gradings.insert(name.to_string(), json!(w));
    }
    let json = json!({
        "family": family.to_string(),
        "m": m,
        "derivation": d.to_json(),
        "gradings": gradings,
    });
    Ok(Outcome::new(true, text, json))
}

pub fn cmd_invariant(family: Family, p: u64, m: u32) -> Result<Outcome, Error> {
    check_p(p)?;
    let si = special_invariant(family, p, m)?;
    let mut text = format!("F = {}\n", si.f);
    let _ = writeln!(text, "family: {family}, m = {m}, field: GF({p})");
    let _ = writeln!(text, "b = {}", si.b);
    let _ = writeln!(text, "b' = {}", si.b_prime);
    render_checks(&mut text, &si.transcript);
    let json = serde_json::to_value(si.to_json()).expect("serializable");
    Ok(Outcome::new(si.passed(), text, json))
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::Parameter(format!("malformed input: {e}"))
}

fn decode(j: &Value, key: &str) -> Result<PolynomialJson, Error> {
    let v = j.get(key).ok_or_else(|| malformed(format!("missing {key:?}")))?;
    serde_json::from_value(v.clone()).map_err(malformed)
}

pub fn cmd_verify(path: &std::path::Path) -> Result<Outcome, Error> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::Parameter(format!("{}: {e}", path.display())))?;
    let j: Value = serde_json::from_str(&raw).map_err(malformed)?;
    let mut checks = Vec::new();
    if j.get("derivation").is_some() {
        let dj: DerivationJson = serde_json::from_value(j["derivation"].clone()).map_err(malformed)?;
        let d = dj.decode().map_err(malformed)?;
        let f = decode(&j, "polynomial")?.decode_in(d.base()).map_err(malformed)?;
        let axioms = d.check_axioms()?;
        checks.push(Check::new("derivation axioms", axioms.passed(), verdict_detail(&axioms)));
        checks.push(Check::new("polynomial is invariant", d.is_invariant(&f)?, ""));
    } else {
        let family: Family = j
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| malformed("missing family"))?
            .parse()?;
        let p = j.get("p").and_then(Value::as_u64).ok_or_else(|| malformed("missing p"))?;
        let m = j.get("m").and_then(Value::as_u64).ok_or_else(|| malformed("missing m"))?;
        check_p(p)?;
        let m = u32::try_from(m).map_err(malformed)?;
        let field = Field::prime(p).map_err(malformed)?;
        let bundle = build_example(family, m, field)?;
        let f = decode(&j, "f")?.decode_in(&bundle.ring).map_err(malformed)?;
        let b = decode(&j, "b")?.decode_in(&bundle.subring).map_err(malformed)?;
        let bp = decode(&j, "b_prime")?.decode_in(&bundle.subring).map_err(malformed)?;
        if f.field() != field || b.field() != field || bp.field() != field {
            return Err(malformed(format!("coefficients must lie in GF({p})")));
        }
        let v = Polynomial::var(&bundle.ring, field, "v")?;
        let assembled = &(&v.pow(p as u32) + &(&v * &bp.embed(&bundle.ring)?)) - &b.embed(&bundle.ring)?;
        checks.push(Check::new("F = v^p + v b' - b", f == assembled, ""));
        checks.push(Check::new("F is invariant", bundle.derivation.is_invariant(&f)?, ""));
        checks.push(Check::new("b' is invariant", bundle.sub_derivation.is_invariant(&bp)?, ""));
        let degree = family.degree_factor() * m as i64 * p as i64;
        let g = family.grading();
        let homog = !f.is_zero() && f.is_homogeneous(g)? && f.weighted_degree(g)? == degree;
        checks.push(Check::new(format!("F is {g}-homogeneous of degree {degree}"), homog, ""));
        let vi = bundle.ring.index_of("v")?;
        checks.push(Check::new(
            format!("F has v-degree {p}"),
            f.degree_in(vi) == Some(p as i32),
            "",
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    render_checks(&mut text, &checks);
    let _ = writeln!(text, "{}", if passed { "verified" } else { "verification failed" });
    Ok(Outcome::new(passed, text, json!({ "checks": checks, "passed": passed })))
}

fn verdict_detail(v: &Verdict) -> String {
    match v {
        Verdict::Pass => String::new(),
        Verdict::Fail(w) => format!("{} fails on {}: {} != {}", w.check, w.generator, w.lhs, w.rhs),
    }
}

pub fn cmd_sequence(n: usize, primes: Option<&[u64]>) -> Result<Outcome, Error> {
    let primes: Vec<u64> = match primes {
        Some(ps) => {
            if let Some(bad) = ps.iter().find(|&&p| !is_prime(p)) {
                return Err(Error::Parameter(format!("{bad} is not prime")));
            }
            ps.to_vec()
        }
        None => (2..=n as u64).filter(|&p| is_prime(p)).collect(),
    };
    let table = sequence_up_to(n)?;
    let checks = verify_sequence(&table, &primes)?;
    let mut text = String::new();
    for e in table.entries() {
        let primes: Vec<String> = e.denominator_primes().iter().map(u64::to_string).collect();
        let _ = writeln!(text, "h_{} = {}", e.n, e.h);
        let _ = writeln!(
            text,
            "c_{} = {}    (deg {}, denominators {{{}}})",
            e.n,
            e.c,
            e.degree().map_or("-".into(), |d| d.to_string()),
            primes.join(",")
        );
    }
    render_checks(&mut text, &checks);
    let passed = checks.iter().all(|c| c.passed);
    let json = json!({ "table": table.to_json(), "checks": checks, "passed": passed });
    Ok(Outcome::new(passed, text, json))
}

pub fn cmd_axioms(family: Family, m: u32, field: Field) -> Result<Outcome, Error> {
    let d = family_derivation(family, m, field)?;
    let axioms = d.check_axioms()?;
    let mut checks = vec![Check::new("derivation axioms", axioms.passed(), verdict_detail(&axioms))];
    checks.push(Check::new(
        format!("{}-homogeneous", family.grading()),
        d.check_homogeneous(family.grading(), 0)?,
        "",
    ));
    if family == Family::Df5 {
        checks.push(Check::new("w4-homogeneous (U of weight 1)", d.check_homogeneous("w4", 1)?, ""));
    }
    let passed = checks.iter().all(|c| c.passed);
    let mut text = format!("{family}-{m} over {field}\n");
    render_checks(&mut text, &checks);
    Ok(Outcome::new(passed, text, json!({ "family": family.to_string(), "m": m, "checks": checks, "passed": passed })))
}

pub fn cmd_kernel(family: Family, m: u32, field: Field) -> Result<Outcome, Error> {
    let set = known_generators(family, m, field)?;
    let mut text = format!("{family}-{m} over {field}\n");
    let mut checks = Vec::new();
    let mut gens = Vec::new();
    let printed = if m == 2 { printed_generators_m2(family) } else { &[] };
    for (i, g) in set.generators.iter().enumerate() {
        let canonical = g.poly.to_string();
        let shown = match printed.get(i) {
            Some(&lit) if lit != canonical => format!("{canonical}    (reference form: {lit})"),
            _ => canonical,
        };
        let _ = writeln!(text, "{} = {shown}    [{}; {}]", g.name, g.provenance, if g.invariant { "invariant" } else { "NOT invariant" });
        checks.push(Check::new(format!("{} is invariant", g.name), g.invariant, ""));
        gens.push(json!({
            "name": g.name,
            "text": g.poly.to_string(),
            "polynomial": g.poly.to_json(),
            "provenance": g.provenance,
            "invariant": g.invariant,
        }));
    }
    if m == 2 {
        let ring = set.generators[0].poly.ring().clone();
        let ours: Vec<String> = set.generators.iter().map(|g| format(&g.poly)).collect();
        let theirs: Vec<String> = printed
            .iter()
            .map(|s| Ok(format(&parse(s, &ring, field)?)))
            .collect::<Result<_, Error>>()?;
        let ok = ours == theirs;
        checks.push(Check::new(
            "canonical forms match the reference list",
            ok,
            if ok { String::new() } else { format!("constructed {ours:?}, reference {theirs:?}") },
        ));
        if family == Family::F6 {
            for (reading, _, inv) in a6_second_generator_readings(field)? {
                let _ = writeln!(text, "reading {reading:?}: {}", if inv { "invariant" } else { "not invariant" });
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    render_checks(&mut text, &checks);
    let json = json!({ "family": family.to_string(), "m": m, "generators": gens, "checks": checks, "passed": passed });
    Ok(Outcome::new(passed, text, json))
}

/// Parses `name=a..b` (inclusive) or `name=a,b,c`.
fn parse_range(spec: &str, name: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Parameter(format!("expected {name}=A..B or {name}=A,B,..., got {spec:?}"));
    let body = spec.strip_prefix(name).and_then(|s| s.strip_prefix('=')).ok_or_else(bad)?;
    if let Some((a, b)) = body.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        Ok((a..=b).collect())
    } else {
        body.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    }
}

pub fn cmd_grid(p_spec: &str, m_spec: &str) -> Result<Outcome, Error> {
    let primes: Vec<u64> = parse_range(p_spec, "p")?.into_iter().filter(|&p| is_prime(p)).collect();
    let ms = parse_range(m_spec, "m")?;
    if primes.is_empty() || ms.is_empty() {
        return Err(Error::Parameter("empty grid".into()));
    }
    if let Some(&m) = ms.iter().find(|&&m| m < 2 || m > u32::MAX as u64) {
        return Err(Error::Parameter(format!("m must be at least 2, got {m}")));
    }
    let max_p = *primes.iter().max().expect("nonempty");
    let table = extend_sequence(&SequenceTable::new(), max_p as usize)?;

    let mut cells: Vec<(Family, u64, u32)> = Vec::new();
    for family in Family::ALL {
        for &p in &primes {
            cells.extend(ms.iter().map(|&m| (family, p, m as u32)));
        }
    }
    let rows: Vec<Value> = cells
        .par_iter()
        .map(|&(family, p, m)| {
            let start = Instant::now();
            let result = special_invariant_with(&table, family, p, m).and_then(|si| {
                let mut checks = si.transcript.clone();
                if family == Family::Df5 {
                    checks.push(theta_binomial_check(&table, p, m)?);
                }
                Ok((si, checks))
            });
            let ms_elapsed = start.elapsed().as_millis() as u64;
            match result {
                Ok((si, checks)) => json!({
                    "family": family.to_string(), "p": p, "m": m,
                    "status": if checks.iter().all(|c| c.passed) { "pass" } else { "fail" },
                    "b_prime_zero": si.b_prime.is_zero(),
                    "terms": si.f.len(),
                    "millis": ms_elapsed,
                    "checks": checks,
                }),
                Err(e) => json!({
                    "family": family.to_string(), "p": p, "m": m,
                    "status": if error_exit_code(&e) == 3 { "falsified" } else { "error" },
                    "error": e.to_string(),
                    "millis": ms_elapsed,
                }),
            }
        })
        .collect();

    let mut text = format!("{:<6}{:>4}{:>4}  {:<10}{:>8}{:>8}{:>10}\n", "family", "p", "m", "status", "b'=0", "terms", "ms");
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<6}{:>4}{:>4}  {:<10}{:>8}{:>8}{:>10}",
            r["family"].as_str().unwrap_or(""),
            r["p"].to_string(),
            r["m"].to_string(),
            r["status"].as_str().unwrap_or(""),
            r.get("b_prime_zero").map_or("-".into(), Value::to_string),
            r.get("terms").map_or("-".into(), Value::to_string),
            r["millis"].to_string(),
        );
        if let Some(e) = r.get("error") {
            let _ = writeln!(text, "      {}", e.as_str().unwrap_or(""));
        }
    }
    let passed = rows.iter().all(|r| r["status"] == "pass");
    let falsified = rows.iter().any(|r| r["status"] == "falsified" || r["status"] == "error");
    let _ = writeln!(text, "{} of {} cells passed", rows.iter().filter(|r| r["status"] == "pass").count(), rows.len());
    Ok(Outcome {
        passed,
        falsified,
        text,
        json: json!({ "cells": rows, "passed": passed }),
    })
}
