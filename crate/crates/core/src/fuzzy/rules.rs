//! Rule bases and Mamdani inference.

use super::partition::Partition;
use super::set::{Combine, FuzzySet, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt::Write;

/// `IF x_1 is antecedent[0] and ... THEN y is consequent`, by label index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FuzzyRule {
    pub antecedent: Vec<usize>,
    pub consequent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRuleBase<T>", into = "RawRuleBase<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct RuleBase<T> {
    inputs: Vec<Partition<T>>,
    output: Partition<T>,
    rules: Vec<FuzzyRule>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
struct RawRuleBase<T> {
    inputs: Vec<Partition<T>>,
    output: Partition<T>,
    rules: Vec<FuzzyRule>,
}

impl<T: Real> TryFrom<RawRuleBase<T>> for RuleBase<T> {
    type Error = Error;
    fn try_from(r: RawRuleBase<T>) -> Result<Self> {
        RuleBase::new(r.inputs, r.output, r.rules)
    }
}

impl<T: Real> From<RuleBase<T>> for RawRuleBase<T> {
    fn from(b: RuleBase<T>) -> Self {
        RawRuleBase {
            inputs: b.inputs,
            output: b.output,
            rules: b.rules,
        }
    }
}

impl<T: Real> RuleBase<T> {
    /// Validates label indices and rejects repeated antecedents.
    pub fn new(inputs: Vec<Partition<T>>, output: Partition<T>, rules: Vec<FuzzyRule>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::invalid("rule base needs at least one input"));
        }
        let mut seen = HashSet::new();
        for (i, r) in rules.iter().enumerate() {
            if r.antecedent.len() != inputs.len() {
                return Err(Error::DimensionMismatch(format!(
                    "rule {} has {} antecedents for {} inputs",
                    i + 1,
                    r.antecedent.len(),
                    inputs.len()
                )));
            }
            let bad_input = r.antecedent.iter().zip(&inputs).any(|(&k, p)| k >= p.len());
            if bad_input || r.consequent >= output.len() {
                return Err(Error::invalid(format!("rule {} references an unknown label", i + 1)));
            }
            if !seen.insert(&r.antecedent) {
                return Err(Error::invalid(format!("rule {} repeats an antecedent", i + 1)));
            }
        }
        Ok(RuleBase { inputs, output, rules })
    }

    pub fn inputs(&self) -> &[Partition<T>] {
        &self.inputs
    }

    pub fn output(&self) -> &Partition<T> {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Same partitions with a different rule list.
    pub fn with_rules(&self, rules: Vec<FuzzyRule>) -> Result<Self> {
        RuleBase::new(self.inputs.clone(), self.output.clone(), rules)
    }

    fn check_inputs(&self, x: &[T]) -> Result<()> {
        if x.len() != self.inputs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} inputs for {} variables",
                x.len(),
                self.inputs.len()
            )));
        }
        Ok(())
    }

    /// Firing strength (min of antecedent memberships) of each rule.
    pub fn firing_strengths(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_inputs(x)?;
        let grades: Vec<Vec<T>> = self.inputs.iter().zip(x).map(|(p, &v)| p.memberships(v)).collect();
        Ok(self
            .rules
            .iter()
            .map(|r| {
                r.antecedent
                    .iter()
                    .zip(&grades)
                    .fold(T::one(), |s, (&k, g)| s.min(g[k]))
            })
            .collect())
    }

    /// Human-readable listing, one numbered rule per line.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for (n, r) in self.rules.iter().enumerate() {
            let _ = write!(out, "{} IF", n + 1);
            for (j, (&k, p)) in r.antecedent.iter().zip(&self.inputs).enumerate() {
                let joiner = if j == 0 { "" } else { " and" };
                let _ = write!(out, "{joiner} {} is v.{}_{}", p.name(), j + 1, p.label(k));
            }
            let _ = writeln!(out, " THEN {} is {}", self.output.name(), self.output.label(r.consequent));
        }
        out
    }
}

/// Result of firing a rule base on one input vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Inference<T> {
    /// Max-aggregation of the min-clipped consequents.
    pub aggregated: FuzzySet<T>,
    pub strengths: Vec<T>,
}

/// Mamdani inference: min implication, max aggregation.
pub fn infer<T: Real>(base: &RuleBase<T>, x: &[T]) -> Result<Inference<T>> {
    infer_at(base, x, DEFAULT_RESOLUTION)
}

pub fn infer_at<T: Real>(base: &RuleBase<T>, x: &[T], resolution: usize) -> Result<Inference<T>> {
    if base.is_empty() {
        return Err(Error::NoRules);
    }
    let strengths = base.firing_strengths(x)?;
    let mut aggregated = FuzzySet::empty(base.output.bounds(), resolution)?;
    for (r, &s) in base.rules.iter().zip(&strengths) {
        if s > T::zero() {
            let clipped = base.output.sampled(r.consequent, resolution)?.clip(s);
            aggregated = aggregated.combine(&clipped, Combine::UnionMax)?;
        }
    }
    Ok(Inference { aggregated, strengths })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Defuzzifier {
    /// Centre of gravity of the aggregated set.
    Cog,
    /// Strength-weighted mean of the consequent peaks.
    #[default]
    Wam,
}

/// `Σ peak·strength / Σ strength` over `(peak, strength)` pairs.
pub fn weighted_average<T: Real>(contributions: &[(T, T)]) -> Result<T> {
    let (num, den) = contributions
        .iter()
        .fold((T::zero(), T::zero()), |(n, d), &(p, s)| (n + p * s, d + s));
    if den <= T::zero() {
        return Err(Error::NoFiring);
    }
    Ok(num / den)
}

pub fn defuzzify<T: Real>(base: &RuleBase<T>, inference: &Inference<T>, method: Defuzzifier) -> Result<T> {
    match method {
        Defuzzifier::Cog => inference.aggregated.centroid(),
        Defuzzifier::Wam => {
            let pairs: Vec<(T, T)> = base
                .rules
                .iter()
                .zip(&inference.strengths)
                .map(|(r, &s)| (base.output.peak(r.consequent), s))
                .collect();
            weighted_average(&pairs)
        }
    }
}

/// Crisp output for `x`. The WAM path skips building the aggregated set.
pub fn evaluate<T: Real>(base: &RuleBase<T>, x: &[T], method: Defuzzifier) -> Result<T> {
    if base.is_empty() {
        return Err(Error::NoRules);
    }
    match method {
        Defuzzifier::Cog => defuzzify(base, &infer(base, x)?, method),
        Defuzzifier::Wam => {
            let s = base.firing_strengths(x)?;
            let pairs: Vec<(T, T)> = base
                .rules
                .iter()
                .zip(s)
                .map(|(r, s)| (base.output.peak(r.consequent), s))
                .collect();
            weighted_average(&pairs)
        }
    }
}
