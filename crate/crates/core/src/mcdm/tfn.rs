//! Triangular fuzzy numbers and linguistic scales.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul};

/// Triangular fuzzy number `(l, m, u)` with `l <= m <= u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[T; 3]", into = "[T; 3]")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct TriangularFuzzyNumber<T> {
    l: T,
    m: T,
    u: T,
}

impl<T: Real> TriangularFuzzyNumber<T> {
    pub fn new(l: T, m: T, u: T) -> Result<Self> {
        if !(l.is_finite() && m.is_finite() && u.is_finite()) {
            return Err(Error::invalid("fuzzy number components must be finite"));
        }
        if !(l <= m && m <= u) {
            return Err(Error::invalid(format!("fuzzy number needs l <= m <= u, got ({l}, {m}, {u})")));
        }
        Ok(TriangularFuzzyNumber { l, m, u })
    }

    pub fn crisp(x: T) -> Self {
        TriangularFuzzyNumber { l: x, m: x, u: x }
    }

    pub fn one() -> Self {
        Self::crisp(T::one())
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn u(&self) -> T {
        self.u
    }

    pub fn to_array(self) -> [T; 3] {
        [self.l, self.m, self.u]
    }

    /// Fuzzy inverse `(1/u, 1/m, 1/l)`; requires a strictly positive number.
    pub fn inverse(&self) -> Result<Self> {
        if self.l <= T::zero() {
            return Err(Error::invalid("fuzzy inverse needs a strictly positive number"));
        }
        Ok(TriangularFuzzyNumber {
            l: T::one() / self.u,
            m: T::one() / self.m,
            u: T::one() / self.l,
        })
    }

    /// Centre-of-gravity value `(l + m + u) / 3`.
    pub fn centroid(&self) -> T {
        (self.l + self.m + self.u) / T::lit(3.0)
    }

    pub fn scale(&self, k: T) -> Self {
        debug_assert!(k >= T::zero());
        TriangularFuzzyNumber {
            l: self.l * k,
            m: self.m * k,
            u: self.u * k,
        }
    }
}

impl<T: Real> Add for TriangularFuzzyNumber<T> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        TriangularFuzzyNumber {
            l: self.l + o.l,
            m: self.m + o.m,
            u: self.u + o.u,
        }
    }
}

/// Approximate product for non-negative numbers.
impl<T: Real> Mul for TriangularFuzzyNumber<T> {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        TriangularFuzzyNumber {
            l: self.l * o.l,
            m: self.m * o.m,
            u: self.u * o.u,
        }
    }
}

impl<T: Real> TryFrom<[T; 3]> for TriangularFuzzyNumber<T> {
    type Error = Error;

    fn try_from(v: [T; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl<T: Real> From<TriangularFuzzyNumber<T>> for [T; 3] {
    fn from(t: TriangularFuzzyNumber<T>) -> Self {
        t.to_array()
    }
}

/// Five linguistic terms mapped to fuzzy numbers, indexed by Likert score 1..=5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct FuzzyLikertScale<T> {
    terms: Vec<(String, TriangularFuzzyNumber<T>)>,
}

impl<T: Real> FuzzyLikertScale<T> {
    pub fn new(terms: Vec<(String, TriangularFuzzyNumber<T>)>) -> Result<Self> {
        if terms.len() != 5 {
            return Err(Error::invalid(format!("a Likert scale has five terms, got {}", terms.len())));
        }
        for (name, t) in &terms {
            if t.l() < T::zero() || t.u() > T::one() {
                return Err(Error::invalid(format!("term `{name}` leaves [0, 1]")));
            }
        }
        Ok(FuzzyLikertScale { terms })
    }

    pub fn terms(&self) -> &[(String, TriangularFuzzyNumber<T>)] {
        &self.terms
    }

    /// Fuzzy number for a Likert score in 1..=5.
    pub fn for_score(&self, score: u8) -> Result<TriangularFuzzyNumber<T>> {
        match score {
            1..=5 => Ok(self.terms[usize::from(score) - 1].1),
            _ => Err(Error::invalid(format!("Likert score {score} outside 1..=5"))),
        }
    }
}

impl<T: Real> Default for FuzzyLikertScale<T> {
    fn default() -> Self {
        let q = |a: f64, b: f64, c: f64| TriangularFuzzyNumber {
            l: T::lit(a),
            m: T::lit(b),
            u: T::lit(c),
        };
        FuzzyLikertScale {
            terms: vec![
                ("Extremely Unimportant".into(), q(0.0, 0.0, 0.25)),
                ("Unimportant".into(), q(0.0, 0.25, 0.5)),
                ("Moderately Important".into(), q(0.25, 0.5, 0.75)),
                ("Important".into(), q(0.5, 0.75, 1.0)),
                ("Extremely Important".into(), q(0.75, 1.0, 1.0)),
            ],
        }
    }
}

/// Pairwise-comparison linguistic scale for the fuzzy AHP survey.
pub fn pairwise_scale<T: Real>() -> Vec<(&'static str, TriangularFuzzyNumber<T>)> {
    let q = |a: f64, b: f64, c: f64| TriangularFuzzyNumber {
        l: T::lit(a),
        m: T::lit(b),
        u: T::lit(c),
    };
    vec![
        ("Just equal", q(1.0, 1.0, 1.0)),
        ("Equally important", q(1.0, 1.0, 3.0)),
        ("Weakly important", q(1.0, 3.0, 5.0)),
        ("Strongly important", q(3.0, 5.0, 7.0)),
        ("Very strongly important", q(5.0, 7.0, 9.0)),
        ("Extremely preferred", q(7.0, 9.0, 9.0)),
    ]
}
