//! Linguistic partitions of a variable's universe.

use super::set::{FuzzySet, MembershipFunction};
use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionShape {
    Triangular,
    #[default]
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Term<T> {
    pub label: String,
    pub mf: MembershipFunction<T>,
}

/// Ordered labelled terms over `[lo, hi]`. Inputs are clamped to the
/// universe before evaluation, so the end terms act as shoulders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPartition<T>", into = "RawPartition<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Partition<T> {
    name: String,
    bounds: (T, T),
    terms: Vec<Term<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
struct RawPartition<T> {
    name: String,
    bounds: (T, T),
    terms: Vec<Term<T>>,
}

impl<T: Real> TryFrom<RawPartition<T>> for Partition<T> {
    type Error = Error;
    fn try_from(r: RawPartition<T>) -> Result<Self> {
        Partition::new(r.name, r.bounds, r.terms)
    }
}

impl<T: Real> From<Partition<T>> for RawPartition<T> {
    fn from(p: Partition<T>) -> Self {
        RawPartition {
            name: p.name,
            bounds: p.bounds,
            terms: p.terms,
        }
    }
}

impl<T: Real> Partition<T> {
    pub fn new(name: impl Into<String>, bounds: (T, T), terms: Vec<Term<T>>) -> Result<Self> {
        if !(bounds.0 < bounds.1) || !bounds.0.is_finite() || !bounds.1.is_finite() {
            return Err(Error::invalid("partition bounds need lo < hi"));
        }
        if terms.is_empty() {
            return Err(Error::invalid("partition needs at least one term"));
        }
        let mut seen = HashSet::new();
        for t in &terms {
            t.mf.validated()?;
            if !seen.insert(t.label.as_str()) {
                return Err(Error::invalid(format!("duplicate label `{}`", t.label)));
            }
        }
        Ok(Partition {
            name: name.into(),
            bounds,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bounds(&self) -> (T, T) {
        self.bounds
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn label(&self, k: usize) -> &str {
        &self.terms[k].label
    }

    pub fn peak(&self, k: usize) -> T {
        self.terms[k].mf.peak()
    }

    pub fn clamp(&self, x: T) -> T {
        x.max(self.bounds.0).min(self.bounds.1)
    }

    /// Membership of (clamped) `x` in term `k`.
    pub fn membership(&self, k: usize, x: T) -> T {
        self.terms[k].mf.eval(self.clamp(x))
    }

    /// Memberships of (clamped) `x` in every term.
    pub fn memberships(&self, x: T) -> Vec<T> {
        let x = self.clamp(x);
        self.terms.iter().map(|t| t.mf.eval(x)).collect()
    }

    /// Index of the term with the largest membership (earliest on ties).
    pub fn best_label(&self, x: T) -> (usize, T) {
        self.memberships(x)
            .into_iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (k, m)| if m > best.1 { (k, m) } else { best })
    }

    /// Term `k` sampled over the universe.
    pub fn sampled(&self, k: usize, resolution: usize) -> Result<FuzzySet<T>> {
        FuzzySet::from_mf(&self.terms[k].mf, self.bounds, resolution)
    }

    /// Renames the terms `{prefix}.1 .. {prefix}.n`.
    pub fn relabel(mut self, prefix: &str) -> Self {
        for (k, t) in self.terms.iter_mut().enumerate() {
            t.label = format!("{prefix}.{}", k + 1);
        }
        self
    }
}

fn check_grid<T: Real>(bounds: (T, T), labels: usize) -> Result<T> {
    if labels < 2 {
        return Err(Error::invalid("a partition needs at least two labels"));
    }
    if !(bounds.0 < bounds.1) {
        return Err(Error::invalid("partition bounds need lo < hi"));
    }
    Ok((bounds.1 - bounds.0) / T::from_count(labels - 1))
}

fn peak_at<T: Real>(bounds: (T, T), step: T, k: usize, labels: usize) -> T {
    if k + 1 == labels {
        bounds.1
    } else {
        bounds.0 + step * T::from_count(k)
    }
}

/// Triangular terms with equally spaced peaks from `lo` to `hi`; each peak
/// sits on its neighbours' feet, so memberships sum to one in the universe.
pub fn uniform_partition<T: Real>(name: impl Into<String>, bounds: (T, T), labels: usize) -> Result<Partition<T>> {
    let step = check_grid(bounds, labels)?;
    let peaks: Vec<T> = (0..labels).map(|k| peak_at(bounds, step, k, labels)).collect();
    let terms = (0..labels)
        .map(|k| {
            let a = if k == 0 { peaks[0] } else { peaks[k - 1] };
            let c = if k + 1 == labels { peaks[k] } else { peaks[k + 1] };
            Ok(Term {
                label: format!("a.{}", k + 1),
                mf: MembershipFunction::triangular(a, peaks[k], c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(name, bounds, terms)
}

/// Gaussian terms on the same peak grid, each crossing its neighbours at 0.5.
pub fn gaussian_partition<T: Real>(name: impl Into<String>, bounds: (T, T), labels: usize) -> Result<Partition<T>> {
    let step = check_grid(bounds, labels)?;
    // Half-width at half-maximum equals half the peak spacing.
    let width = step / (T::lit(2.0) * (T::lit(2.0) * T::lit(2.0).ln()).sqrt());
    let terms = (0..labels)
        .map(|k| {
            Ok(Term {
                label: format!("a.{}", k + 1),
                mf: MembershipFunction::gaussian(peak_at(bounds, step, k, labels), width)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(name, bounds, terms)
}

pub fn partition<T: Real>(
    shape: PartitionShape,
    name: impl Into<String>,
    bounds: (T, T),
    labels: usize,
) -> Result<Partition<T>> {
    match shape {
        PartitionShape::Triangular => uniform_partition(name, bounds, labels),
        PartitionShape::Gaussian => gaussian_partition(name, bounds, labels),
    }
}
