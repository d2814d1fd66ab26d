mod common;

use common::is_invariant_by_hand;
use gainv::families::{build_example, known_generators, Family};
use gainv::polyring::{parse, Field, Monomial, Polynomial};
use gainv::sequence::SequenceTable;
use gainv::specialinv::{special_invariant_with, theta_binomial_check};

#[test]
fn characteristic_two_and_three_closed_forms() {
    let table = SequenceTable::new();
    for m in 2..=5u32 {
        let f = special_invariant_with(&table, Family::Df5, 2, m).unwrap();
        let expected = if m == 2 { "v^2 + x*t".to_string() } else { format!("v^2 + x^{}*t", m - 1) };
        assert_eq!(f.f.to_string(), expected);
        assert!(f.b_prime.is_zero());

        let f = special_invariant_with(&table, Family::Df5, 3, m).unwrap();
        assert_eq!(f.f.to_string(), format!("v^3 + 2*x^{}*u", 2 * m - 1));
    }
    let f6 = special_invariant_with(&table, Family::F6, 2, 2).unwrap();
    assert_eq!(f6.f.to_string(), "v^2 + x*y*t");
}

#[test]
fn seven_variable_golden_in_characteristic_two() {
    let f = special_invariant_with(&SequenceTable::new(), Family::R7, 2, 2).unwrap();
    let bundle = build_example(Family::R7, 2, Field::Prime(2)).unwrap();
    let p = |s: &str| parse(s, &bundle.ring, Field::Prime(2)).unwrap();
    // Image of t under the six-to-seven variable map, written out by hand.
    let t_image = &(&p("x3^3*y2 + x2^3*y3") * &p("y1")) - &p("x1^3*y2*y3");
    let expected = &p("v^2") + &(&p("x1*x2*x3") * &t_image);
    assert_eq!(f.f, expected);
}

#[test]
fn invariance_by_direct_application() {
    let table = SequenceTable::new();
    for family in Family::ALL {
        for p in [2u64, 3, 5, 7] {
            for m in [2u32, 3] {
                let si = special_invariant_with(&table, family, p, m).unwrap();
                let bundle = build_example(family, m, Field::Prime(p)).unwrap();
                assert!(is_invariant_by_hand(&bundle.derivation, &si.f), "{family} p={p} m={m}");
                let v = bundle.ring.index_of("v").unwrap();
                assert_eq!(si.f.degree_in(v), Some(p as i32));
                let w = bundle.ring.grading(family.grading()).unwrap();
                let degree = family.degree_factor() * (m as i64) * (p as i64);
                assert!(si.f.weighted_degrees(w).all(|d| d == degree), "{family} p={p} m={m}");
            }
        }
    }
}

#[test]
fn setting_y_to_one_recovers_five_variable_invariant() {
    let table = SequenceTable::new();
    for p in [2u64, 3, 5, 7] {
        for m in 2..=5u32 {
            let f6 = special_invariant_with(&table, Family::F6, p, m).unwrap();
            let f5 = special_invariant_with(&table, Family::Df5, p, m).unwrap();
            let fl = Field::Prime(p);
            let images: Vec<Polynomial> = ["x", "1", "s", "t", "u", "v"]
                .iter()
                .map(|s| parse(s, &f5.ring, fl).unwrap())
                .collect();
            assert_eq!(f6.f.substitute(&f5.ring, &images).unwrap(), f5.f, "p={p} m={m}");
        }
    }
}

#[test]
fn b_prime_observations() {
    // Empirical: b' vanishes for these primes and not for the others.
    let table = SequenceTable::new();
    for (p, zero) in [(2u64, true), (3, true), (5, true), (7, false), (11, true), (13, false)] {
        let si = special_invariant_with(&table, Family::Df5, p, 2).unwrap();
        assert_eq!(si.b_prime.is_zero(), zero, "p = {p}");
        assert!(si.passed());
    }
}

#[test]
fn binomial_expansion_over_rationals() {
    let table = SequenceTable::new();
    for p in [2u64, 3, 5, 7, 11] {
        for m in [2u32, 4] {
            let ch = theta_binomial_check(&table, p, m).unwrap();
            assert!(ch.passed, "{ch:?}");
        }
    }
}

#[test]
fn generators_and_relation_divisibility() {
    for m in 2..=5u32 {
        for family in Family::ALL {
            let set = known_generators(family, m, Field::Rational).unwrap();
            let bundle = build_example(family, m, Field::Rational).unwrap();
            for g in &set.generators {
                assert!(is_invariant_by_hand(&bundle.sub_derivation, &g.poly), "{family} m={m} {}", g.name);
            }
        }
        let set = known_generators(Family::Df5, m, Field::Rational).unwrap();
        let f1 = &set.generators[1].poly;
        let f2 = &set.generators[2].poly;
        let rel = &f1.pow(3).scale_i64(4) + &f2.pow(2);
        let x = Monomial::var(4, 0, 2 * (m as i32 + 1));
        assert!(rel.div_monomial(&x).is_ok(), "m = {m}");
        assert!(rel.div_monomial(&Monomial::var(4, 0, 2 * (m as i32 + 1) + 1)).is_err());
    }
}

#[test]
fn json_carries_inputs_and_transcript() {
    let si = special_invariant_with(&SequenceTable::new(), Family::F6, 5, 3).unwrap();
    let v = serde_json::to_value(si.to_json()).unwrap();
    assert_eq!(v["family"], "F6");
    assert_eq!(v["p"], 5);
    assert_eq!(v["m"], 3);
    assert_eq!(v["f"]["field"], serde_json::json!({"GF": 5}));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(v["passed"], true);
}
