//! The polynomial sequence `h_n` in `C = Q[s, t, u]`.
//!
//! `C` carries the higher derivation `θ̄` with `s ↦ s + U`, `t ↦ t + 2sU + U²`,
//! `u ↦ u + 3tU + 3sU² + U³`, and `c_n = Σ C(n, i)·h_(n−i)·s^i`. Each `h_n` is
//! a `θ̄`-invariant, w4-homogeneous combination of `(−t1)^l·u1^e` with
//! `t1 = t − s²` and `u1 = u − 3st + 2s³`, chosen so that the standard degree
//! of `c_n` drops to `⌊2n/3⌋`. Only the coefficients of `s^(n−3k)·u^k` can
//! exceed that bound, which turns every step into a small structured linear
//! system; indices `n ≡ 0, 1 (mod 6)` are solved together.

pub mod linalg;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::lfihd::HigherDerivation;
use crate::polyring::{binomial, parse, Field, Monomial, Polynomial, PolynomialJson, Ring};
use crate::{Check, Error};

use linalg::{build_matrix, exact_solve, inverse, Matrix, MatrixKind};

/// `Q[s, t, u]` with the grading `w4 = (1, 2, 3)`.
pub fn c_ring() -> Arc<Ring> {
    Ring::new(&["s", "t", "u"])
        .and_then(|r| r.with_grading("w4", &[1, 2, 3]))
        .expect("static ring")
        .into_arc()
}

/// `θ̄` on `C`, the restriction of the five-variable action to `x = 1`.
pub fn induced_derivation() -> HigherDerivation {
    HigherDerivation::from_strs(
        &c_ring(),
        Field::Rational,
        &["s + U", "t + 2*s*U + U^2", "u + 3*t*U + 3*s*U^2 + U^3"],
    )
    .expect("static derivation")
}

pub fn t1(ring: &Arc<Ring>) -> Polynomial {
    parse("t - s^2", ring, Field::Rational).expect("static")
}

pub fn u1(ring: &Arc<Ring>) -> Polynomial {
    parse("u - 3*s*t + 2*s^3", ring, Field::Rational).expect("static")
}

/// The degree bound `e(n) = ⌊2n/3⌋`.
pub fn degree_bound(n: usize) -> i64 {
    (2 * n / 3) as i64
}

/// Coefficient of `(−t1)^l·u1^e` in `h_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCoeff {
    pub l: u32,
    pub e: u32,
    pub coeff: BigRational,
}

#[derive(Clone, Debug)]
pub struct SequenceEntry {
    pub n: usize,
    pub h: Polynomial,
    pub c: Polynomial,
    pub basis: Vec<BasisCoeff>,
}

impl SequenceEntry {
    pub fn w4_degree(&self) -> Option<i64> {
        if self.h.is_zero() || !self.h.is_homogeneous("w4").unwrap_or(false) {
            return None;
        }
        self.h.weighted_degree("w4").ok()
    }

    /// Standard degree of `c_n`.
    pub fn degree(&self) -> Option<i64> {
        self.c.total_degree()
    }

    pub fn denominator_primes(&self) -> BTreeSet<u64> {
        self.h.denominator_primes()
    }
}

#[derive(Clone, Debug)]
pub struct SequenceTable {
    ring: Arc<Ring>,
    entries: Vec<SequenceEntry>,
}

impl Default for SequenceTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SequenceTable {
    /// The table holding `h_0 = 1` and `h_1 = 0`.
    pub fn new() -> Self {
        let ring = c_ring();
        let one = Polynomial::one(&ring, Field::Rational);
        let s = Polynomial::var(&ring, Field::Rational, "s").expect("static");
        let entries = vec![
            SequenceEntry {
                n: 0,
                h: one.clone(),
                c: one,
                basis: vec![],
            },
            SequenceEntry {
                n: 1,
                h: Polynomial::zero(&ring, Field::Rational),
                c: s,
                basis: vec![],
            },
        ];
        SequenceTable { ring, entries }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Largest index held.
    pub fn max_index(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[SequenceEntry] {
        &self.entries
    }

    pub fn entry(&self, n: usize) -> Option<&SequenceEntry> {
        self.entries.get(n)
    }

    pub fn h(&self, n: usize) -> Option<&Polynomial> {
        self.entries.get(n).map(|e| &e.h)
    }

    pub fn c(&self, n: usize) -> Option<&Polynomial> {
        self.entries.get(n).map(|e| &e.c)
    }

    fn s_pow(&self, i: usize) -> Monomial {
        Monomial::var(3, 0, i as i32)
    }

    /// `Σ_(i=from..=n) C(n, i)·h_(n−i)·s^i` over the entries present.
    fn partial(&self, n: usize, from: usize) -> Polynomial {
        let mut acc = Polynomial::zero(&self.ring, Field::Rational);
        for i in from..=n {
            let h = &self.entries[n - i].h;
            if h.is_zero() {
                continue;
            }
            let c = Field::Rational.from_bigint(&binomial(n as u64, i as u64));
            acc = &acc + &h.mul_term(&self.s_pow(i), &c);
        }
        acc
    }

    /// Coefficients of `s^(n−3k)·u^k` in `f` for `k = 0..count`.
    fn relevant(f: &Polynomial, n: usize, count: usize) -> Vec<BigRational> {
        (0..count)
            .map(|k| {
                let m = Monomial::new(vec![(n - 3 * k) as i32, 0, k as i32]);
                f.coeff(&m).as_rational().cloned().unwrap_or_else(BigRational::zero)
            })
            .collect()
    }

    /// `Σ coeff_j·(−t1)^(l_j)·u1^(e_j)` for `e_j = 2j + odd`, `3e_j + 2l_j = n`.
    fn combine(&self, n: usize, odd: bool, coeffs: &[BigRational]) -> Result<(Polynomial, Vec<BasisCoeff>), Error> {
        let neg_t1 = -t1(&self.ring);
        let u1 = u1(&self.ring);
        let mut h = Polynomial::zero(&self.ring, Field::Rational);
        let mut basis = Vec::with_capacity(coeffs.len());
        for (j, x) in coeffs.iter().enumerate() {
            let e = 2 * j + usize::from(odd);
            let l = (n - 3 * e) / 2;
            let c = Field::Rational.from_rational(x)?;
            h = &h + &(&neg_t1.pow(l as u32) * &u1.pow(e as u32)).scale(&c);
            basis.push(BasisCoeff {
                l: l as u32,
                e: e as u32,
                coeff: x.clone(),
            });
        }
        Ok((h, basis))
    }

    fn push(&mut self, n: usize, h: Polynomial, basis: Vec<BasisCoeff>) -> Result<(), Error> {
        debug_assert_eq!(n, self.entries.len());
        self.entries.push(SequenceEntry {
            n,
            c: Polynomial::zero(&self.ring, Field::Rational),
            h,
            basis,
        });
        let c = self.partial(n, 0);
        let bound = degree_bound(n);
        if let Some(deg) = c.total_degree() {
            if deg > bound {
                return Err(Error::Falsified {
                    step: format!("degree bound for c_{n}"),
                    detail: format!("deg c_{n} = {deg} > {bound}"),
                });
            }
        }
        self.entries[n].c = c;
        Ok(())
    }

    fn single_step(&mut self, n: usize) -> Result<(), Error> {
        let d = (n - 1) / 6;
        let alpha = Self::relevant(&self.partial(n, 1), n, d + 1);
        let odd = n % 2 == 1;
        let kind = if odd { MatrixKind::Mo } else { MatrixKind::Me };
        let x = exact_solve(&build_matrix(kind, d), &alpha)?;
        let neg: Vec<BigRational> = x.into_iter().map(|v| -v).collect();
        let (h, basis) = self.combine(n, odd, &neg)?;
        self.push(n, h, basis)
    }

    /// Solves for `h_(n−1)` and `h_n` together, `n ≡ 1 (mod 6)`.
    fn joint_step(&mut self, n: usize) -> Result<(), Error> {
        let d = (n - 1) / 6;
        let prev = n - 1;
        let alpha = Self::relevant(&self.partial(prev, 1), prev, d);
        // h_(n−1) enters c_n only through n·h_(n−1)·s, and h_n only as itself.
        let beta = Self::relevant(&self.partial(n, 2), n, d + 1);

        let m = build_matrix(MatrixKind::M, d);
        let l_inv = inverse(&build_matrix(MatrixKind::L, d))?;
        let nmat = build_matrix(MatrixKind::N, d);
        let ml = m.mul(&l_inv)?;
        let system = ml.mul(&nmat)?;
        let nq = BigRational::from_integer(BigInt::from(n));
        let ml_beta = ml.mul_vec(&beta)?;
        let rhs: Vec<BigRational> = alpha.iter().zip(&ml_beta).map(|(a, b)| &nq * a - b).collect();
        let y = exact_solve(&system, &rhs)?;
        let ny = nmat.mul_vec(&y)?;
        let sum: Vec<BigRational> = beta.iter().zip(&ny).map(|(b, v)| b + v).collect();
        let x: Vec<BigRational> = l_inv.mul_vec(&sum)?.into_iter().map(|v| -v / &nq).collect();

        let (h_prev, basis_prev) = self.combine(prev, false, &x)?;
        self.push(prev, h_prev, basis_prev)?;
        let (h, basis) = self.combine(n, true, &y)?;
        self.push(n, h, basis)
    }

    pub fn to_json(&self) -> SequenceJson {
        SequenceJson {
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    n: e.n,
                    h_text: e.h.to_string(),
                    c_text: e.c.to_string(),
                    h: e.h.to_json(),
                    c: e.c.to_json(),
                    w4_degree: e.w4_degree(),
                    degree: e.degree(),
                    degree_bound: degree_bound(e.n),
                    denominator_primes: e.denominator_primes().into_iter().collect(),
                    basis: e
                        .basis
                        .iter()
                        .map(|b| BasisJson {
                            l: b.l,
                            e: b.e,
                            coeff: b.coeff.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Returns a table holding `h_0 ..= h_(up_to)`. The input is left untouched.
pub fn extend_sequence(table: &SequenceTable, up_to: usize) -> Result<SequenceTable, Error> {
    let mut out = table.clone();
    // An index ≡ 0 (mod 6) at the end was produced by a truncated joint step.
    if out.max_index() >= 6 && out.max_index() % 6 == 0 && up_to > out.max_index() {
        out.entries.pop();
    }
    while out.max_index() < up_to {
        let n = out.entries.len();
        if n % 6 == 0 {
            out.joint_step(n + 1)?;
        } else {
            out.single_step(n)?;
        }
    }
    out.entries.truncate(up_to + 1);
    Ok(out)
}

pub fn sequence_up_to(n: usize) -> Result<SequenceTable, Error> {
    extend_sequence(&SequenceTable::new(), n)
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisJson {
    pub l: u32,
    pub e: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryJson {
    pub n: usize,
    pub h_text: String,
    pub c_text: String,
    pub h: PolynomialJson,
    pub c: PolynomialJson,
    pub w4_degree: Option<i64>,
    pub degree: Option<i64>,
    pub degree_bound: i64,
    pub denominator_primes: Vec<u64>,
    pub basis: Vec<BasisJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceJson {
    pub entries: Vec<EntryJson>,
}

fn summarize(name: &str, failures: Vec<String>, range: &str) -> Check {
    if failures.is_empty() {
        Check::new(name, true, range)
    } else {
        Check::new(name, false, failures.join("; "))
    }
}

/// Re-checks every recorded property of the table.
pub fn verify_sequence(table: &SequenceTable, primes: &[u64]) -> Result<Vec<Check>, Error> {
    let big_n = table.max_index();
    let theta = induced_derivation();
    let range = format!("n = 0..={big_n}");
    let mut checks = Vec::new();

    let mut fails = Vec::new();
    for n in 0..=big_n {
        if table.partial(n, 0) != table.entries[n].c {
            fails.push(format!("c_{n} disagrees with its defining sum"));
        }
    }
    checks.push(summarize("c_n = sum C(n,i) h_(n-i) s^i", fails, &range));

    let mut fails = Vec::new();
    for n in 0..=big_n {
        let c = &table.entries[n].c;
        let all = theta.theta_all(c)?;
        if all.len() > n + 1 {
            fails.push(format!("theta(c_{n}) has U-degree {}", all.len() - 1));
        }
        for (k, tk) in all.iter().enumerate().take(n + 1) {
            let want = table.entries[n - k].c.scale(&Field::Rational.from_bigint(&binomial(n as u64, k as u64)));
            if *tk != want {
                fails.push(format!("theta^({k})(c_{n}) != C({n},{k}) c_{}", n - k));
            }
        }
    }
    checks.push(summarize("theta^(k)(c_n) = C(n,k) c_(n-k)", fails, &range));

    let mut fails = Vec::new();
    for n in 2..=big_n {
        if let Some(d) = table.entries[n].degree() {
            if d > degree_bound(n) {
                fails.push(format!("deg c_{n} = {d} > {}", degree_bound(n)));
            }
        }
    }
    checks.push(summarize("deg c_n <= floor(2n/3)", fails, &format!("n = 2..={big_n}")));

    let mut fails = Vec::new();
    for e in &table.entries {
        for (name, f) in [("h", &e.h), ("c", &e.c)] {
            if f.is_zero() {
                continue;
            }
            if !f.is_homogeneous("w4")? || f.weighted_degree("w4")? != e.n as i64 {
                fails.push(format!("{name}_{} is not w4-homogeneous of degree {}", e.n, e.n));
            }
        }
    }
    checks.push(summarize("w4-homogeneity", fails, &range));

    let mut fails = Vec::new();
    for e in &table.entries {
        if !theta.is_invariant(&e.h)? {
            fails.push(format!("h_{} is not invariant", e.n));
        }
    }
    checks.push(summarize("h_n invariant", fails, &range));

    for &p in primes {
        if !crate::polyring::is_prime(p) {
            return Err(Error::Parameter(format!("{p} is not prime")));
        }
        let pu = p as usize;
        let mut fails = Vec::new();
        let mut seen = Vec::new();
        for j in (0..=big_n).filter(|&j| j + 2 <= pu || j == pu) {
            seen.push(j);
            let h = &table.entries[j].h;
            if !h.is_zero() && h.p_valuation(p)? < 0 {
                fails.push(format!("v_{p}(h_{j}) < 0"));
            }
        }
        if pu >= 1 && pu - 1 <= big_n {
            seen.push(pu - 1);
            let h = &table.entries[pu - 1].h;
            if !h.is_zero() && h.p_valuation(p)? < -1 {
                fails.push(format!("v_{p}(h_{}) < -1", pu - 1));
            }
        }
        seen.sort_unstable();
        let detail = if pu > big_n {
            format!("checked h_j for j in {seen:?} (table stops before p = {p})")
        } else {
            format!("checked h_j for j in 0..={pu}")
        };
        checks.push(summarize(&format!("valuations at p = {p}"), fails, &detail));
    }
    Ok(checks)
}

/// Entry `(k, j)` of `ML⁻¹N` equals that of `M_o(d−1)`; exposed for tests.
pub fn joint_system(d: usize) -> Result<Matrix, Error> {
    let ml = build_matrix(MatrixKind::M, d).mul(&inverse(&build_matrix(MatrixKind::L, d))?)?;
    Ok(ml.mul(&build_matrix(MatrixKind::N, d))?)
}
