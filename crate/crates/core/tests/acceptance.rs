//! Acceptance run: one line per criterion, exact equality throughout, each
//! criterion also held to a wall-clock budget. Exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gainv::families::{
    alpha_hom, build_example, family_derivation, known_generators, printed_generators_m2, quotient_y1, y_homogenize,
    Family,
};
use gainv::polyring::{format, parse, Coeff, Field, Monomial, Polynomial, Ring};
use gainv::sequence::linalg::{build_matrix, exact_det, MatrixKind};
use gainv::sequence::{sequence_up_to, verify_sequence, SequenceTable};
use gainv::specialinv::{special_invariant_with, theta_binomial_check, SpecialInvariant};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;

const GRID_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const GRID_M: [u32; 4] = [2, 3, 4, 5];

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn criterion_1() -> Outcome {
    for family in Family::ALL {
        for m in GRID_M {
            let d = family_derivation(family, m, Field::Rational).map_err(|e| e.to_string())?;
            ensure(d.check_axioms().map_err(|e| e.to_string())?.passed(), || format!("{family}-{m} axioms"))?;
            ensure(d.check_homogeneous(family.grading(), 0).map_err(|e| e.to_string())?, || {
                format!("{family}-{m} {}", family.grading())
            })?;
            if family == Family::Df5 {
                ensure(d.check_homogeneous("w4", 1).map_err(|e| e.to_string())?, || format!("DF5-{m} w4"))?;
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let pow2 = |e: usize| BigRational::from_integer(BigInt::one() << e);
    for d in 0..=8 {
        let me = exact_det(&build_matrix(MatrixKind::Me, d)).map_err(|e| e.to_string())?;
        let mo = exact_det(&build_matrix(MatrixKind::Mo, d)).map_err(|e| e.to_string())?;
        ensure(me == pow2(d * (d + 1)), || format!("det M_e({d}) = {me}"))?;
        ensure(mo == pow2((d + 1) * (d + 1)), || format!("det M_o({d}) = {mo}"))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let table = sequence_up_to(30).map_err(|e| e.to_string())?;
    let ring = table.ring().clone();
    let c = |s: &str| parse(s, &ring, Field::Rational).unwrap();
    let goldens = [
        (table.h(0), "1"),
        (table.h(2), "t - s^2"),
        (table.c(2), "t"),
        (table.c(3), "u"),
        (table.c(4), "4*s*u - 3*t^2"),
        (table.c(5), "12*s^2*u - 9*s*t^2 - 2*t*u"),
    ];
    for (got, want) in goldens {
        ensure(got == Some(&c(want)), || format!("expected {want}, got {got:?}"))?;
    }
    ensure(table.h(1).is_some_and(Polynomial::is_zero), || "h_1 != 0".into())?;
    let checks = verify_sequence(&table, &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]).map_err(|e| e.to_string())?;
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(format!("{}: {}", c.name, c.detail)),
        None => Ok(()),
    }
}

fn grid(table: &SequenceTable, primes: &[u64]) -> Result<Vec<SpecialInvariant>, String> {
    let cells: Vec<(Family, u64, u32)> = Family::ALL
        .iter()
        .flat_map(|&f| primes.iter().flat_map(move |&p| GRID_M.iter().map(move |&m| (f, p, m))))
        .collect();
    cells
        .par_iter()
        .map(|&(f, p, m)| special_invariant_with(table, f, p, m).map_err(|e| format!("{f} p={p} m={m}: {e}")))
        .collect()
}

fn check_cells(cells: &[SpecialInvariant]) -> Outcome {
    for si in cells {
        let tag = || format!("{} p={} m={}", si.family, si.p, si.m);
        if let Some(c) = si.transcript.iter().find(|c| !c.passed) {
            return Err(format!("{}: {}", tag(), c.name));
        }
        let v = si.ring.index_of("v").unwrap();
        ensure(si.f.degree_in(v) == Some(si.p as i32), || format!("{}: v-degree", tag()))?;
        let w = si.ring.grading(si.family.grading()).unwrap();
        let degree = si.family.degree_factor() * si.m as i64 * si.p as i64;
        ensure(si.f.weighted_degrees(w).all(|d| d == degree), || format!("{}: degree", tag()))?;
    }
    Ok(())
}

fn criterion_4(table: &SequenceTable) -> Result<(Outcome, Duration), String> {
    let start = Instant::now();
    let small = grid(table, &[2, 3, 5])?;
    let small_time = start.elapsed();
    check_cells(&small)?;
    let cells = grid(table, &GRID_PRIMES)?;
    check_cells(&cells)?;
    let golden = |p: u64, want: &str| {
        let si = cells.iter().find(|s| s.family == Family::Df5 && s.p == p && s.m == 2).unwrap();
        ensure(si.f.to_string() == want, || format!("DF5 p={p}: {}", si.f))
    };
    golden(2, "v^2 + x*t")?;
    golden(3, "v^3 + 2*x^3*u")?;
    let binomial: Vec<Outcome> = GRID_PRIMES
        .par_iter()
        .flat_map(|&p| GRID_M.par_iter().map(move |&m| (p, m)))
        .map(|(p, m)| {
            let c = theta_binomial_check(table, p, m).map_err(|e| e.to_string())?;
            ensure(c.passed, || format!("{}: {}", c.name, c.detail))
        })
        .collect();
    binomial.into_iter().collect::<Outcome>()?;
    let small_ok = ensure(small_time < Duration::from_secs(10), || format!("p <= 5 took {small_time:?}"));
    Ok((small_ok, small_time))
}

fn criterion_5(table: &SequenceTable) -> Outcome {
    for m in GRID_M {
        let f5 = build_example(Family::Df5, m, Field::Rational).map_err(|e| e.to_string())?;
        let f6 = build_example(Family::F6, m, Field::Rational).map_err(|e| e.to_string())?;
        let r7 = build_example(Family::R7, m, Field::Rational).map_err(|e| e.to_string())?;
        let alpha = alpha_hom(m, Field::Rational).map_err(|e| e.to_string())?;
        let quot = quotient_y1(m, Field::Rational).map_err(|e| e.to_string())?;
        let a = alpha.check_equivariant(&f6.derivation, &r7.derivation).map_err(|e| e.to_string())?;
        ensure(a.passed(), || format!("alpha not equivariant at m = {m}"))?;
        let q = quot.check_equivariant(&f6.derivation, &f5.derivation).map_err(|e| e.to_string())?;
        ensure(q.passed(), || format!("quotient not equivariant at m = {m}"))?;
        for p in GRID_PRIMES {
            let fl = Field::Prime(p);
            let six = special_invariant_with(table, Family::F6, p, m).map_err(|e| e.to_string())?;
            let five = special_invariant_with(table, Family::Df5, p, m).map_err(|e| e.to_string())?;
            let image = quotient_y1(m, fl).and_then(|q| q.apply(&six.f)).map_err(|e| e.to_string())?;
            ensure(image == five.f, || format!("quotient of F6 p={p} m={m}"))?;
        }
    }
    Ok(())
}

fn criterion_6(table: &SequenceTable) -> Outcome {
    for family in Family::ALL {
        for m in GRID_M {
            let set = known_generators(family, m, Field::Rational).map_err(|e| e.to_string())?;
            ensure(set.all_invariant(), || format!("{family}-{m} generator not invariant"))?;
            if m == 2 {
                let ring = set.generators[0].poly.ring().clone();
                for (g, printed) in set.generators.iter().zip(printed_generators_m2(family)) {
                    let want = format(&parse(printed, &ring, Field::Rational).map_err(|e| e.to_string())?);
                    ensure(format(&g.poly) == want, || format!("{family} {}: {} vs {want}", g.name, g.poly))?;
                }
                ensure(set.generators.len() == printed_generators_m2(family).len(), || {
                    format!("{family}: generator count")
                })?;
            }
        }
    }
    for m in GRID_M {
        let set = known_generators(Family::Df5, m, Field::Rational).map_err(|e| e.to_string())?;
        let (f1, f2) = (&set.generators[1].poly, &set.generators[2].poly);
        let rel = &f1.pow(3).scale_i64(4) + &f2.pow(2);
        let x = Monomial::var(4, 0, 2 * (m as i32 + 1));
        ensure(rel.div_monomial(&x).is_ok(), || format!("x^(2(m+1)) does not divide at m = {m}"))?;
        for p in GRID_PRIMES {
            let five = special_invariant_with(table, Family::Df5, p, m).map_err(|e| e.to_string())?;
            let degree = 2 * m as i64 * p as i64;
            y_homogenize(&five.b, m, degree).map_err(|e| format!("b, p={p} m={m}: {e}"))?;
            y_homogenize(&five.b_prime, m, degree - 2 * m as i64).map_err(|e| format!("b', p={p} m={m}: {e}"))?;
        }
    }
    Ok(())
}

fn random_round_trips() -> Outcome {
    let ring = Ring::new(&["x", "s", "t", "u", "v", "y"]).unwrap().with_laurent("y").unwrap().into_arc();
    let term = (-50i64..50, 1i64..9, prop::collection::vec(0i32..5, 5), -2i32..3);
    let strategy = (
        prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(7)), Just(Field::Prime(101))],
        prop::collection::vec(term, 0..8),
    );
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let cases = std::cell::Cell::new(0u32);
    runner
        .run(&strategy, |(field, terms)| {
            cases.set(cases.get() + 1);
            let terms = terms.into_iter().filter_map(|(n, d, mut e, y)| {
                e.push(y);
                let c: Coeff = field.from_rational(&BigRational::new(n.into(), d.into())).ok()?;
                Some((Monomial::new(e), c))
            });
            let f = Polynomial::from_terms(&ring, field, terms).unwrap();
            let text = f.to_string();
            let back = parse(&text, &ring, field).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_string(), text);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    ensure(cases.get() >= 1000, || format!("only {} round trips ran", cases.get()))
}

fn exit_code(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_gainv")).args(args).output().ok()?.status.code()
}

fn criterion_7() -> Outcome {
    random_round_trips()?;
    let dir = std::env::temp_dir().join(format!("gainv-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let out = dir.join("inv.json");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").map_err(|e| e.to_string())?;
    let out_s = out.to_str().unwrap();
    let cases: [(&[&str], i32); 6] = [
        (&["invariant", "--family", "df5", "-p", "3", "-m", "2", "--format", "json", "-o", out_s], 0),
        (&["verify", out_s], 0),
        (&["verify", bad.to_str().unwrap()], 2),
        (&["invariant", "--family", "f6", "-p", "1", "-m", "2"], 2),
        (&["examples", "show", "--family", "df5", "-m", "1"], 2),
        (&["axioms", "--family", "r7", "-m", "2"], 0),
    ];
    let mut result = Ok(());
    for (args, want) in cases {
        let got = exit_code(args);
        if got != Some(want) {
            result = Err(format!("{args:?} exited {got:?}, expected {want}"));
            break;
        }
    }
    if result.is_ok() {
        // Tamper with one coefficient of b: exit 1.
        let mut j: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        j["b"]["terms"][0]["c"] = "2".into();
        std::fs::write(&out, j.to_string()).map_err(|e| e.to_string())?;
        let got = exit_code(&["verify", out_s]);
        result = ensure(got == Some(1), || format!("tampered verify exited {got:?}"));
    }
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn report(n: u32, name: &str, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = run();
    let took = start.elapsed();
    let within = took <= limit;
    let ok = outcome.is_ok() && within;
    let mut line = format!(
        "criterion {n} [{}] {name}: exact equality, {:.2}s (limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    if let Err(e) = outcome {
        line.push_str(&format!(" -- {e}"));
    } else if !within {
        line.push_str(" -- over budget");
    }
    println!("{line}");
    ok
}

fn main() -> ExitCode {
    let table = sequence_up_to(15).expect("sequence");
    let secs = Duration::from_secs;
    let mut all = true;
    all &= report(1, "axioms and gradings, m = 2..5", secs(5), criterion_1);
    all &= report(2, "determinants of M_e(d), M_o(d), d = 0..8", secs(1), criterion_2);
    all &= report(3, "sequence to N = 30 with valuations", secs(60), criterion_3);
    let mut small = None;
    all &= report(4, "special invariants on the full grid", secs(600), || {
        let (ok, took) = criterion_4(&table)?;
        small = Some(took);
        ok
    });
    if let Some(t) = small {
        println!("criterion 4 (p <= 5 subset): {:.2}s (limit 10s)", t.as_secs_f64());
    }
    all &= report(5, "homomorphism equivariance and y = 1 quotient", secs(10), || criterion_5(&table));
    all &= report(6, "generator sets and relation divisibility", secs(5), || criterion_6(&table));
    all &= report(7, "parser round trip and CLI exit codes", secs(10), criterion_7);
    println!("acceptance: {}", if all { "all criteria passed" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
