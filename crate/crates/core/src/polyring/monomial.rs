use std::cmp::Ordering;

/// Exponent vector, one entry per ring variable.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// vectors compared in declared variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: i64,
    exps: Box<[i32]>,
}

impl Monomial {
    pub fn new(exps: Vec<i32>) -> Self {
        let degree = exps.iter().map(|&e| e as i64).sum();
        Monomial {
            degree,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: i32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial::new(exps)
    }

    pub fn exps(&self) -> &[i32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> i32 {
        self.exps[i]
    }

    /// Standard total degree.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        Monomial::new(self.exps.iter().map(|e| e * k).collect())
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    /// Returns a copy with exponent `i` replaced by `e`.
    pub fn with_exp(&self, i: usize, e: i32) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[i] = e;
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
