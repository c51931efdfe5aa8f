//! Fuzzy Delphi aggregation, defuzzification and alpha-threshold screening.

use super::tfn::{FuzzyLikertScale, TriangularFuzzyNumber};
use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Aggregates expert opinions: `L = min l`, `M = geometric mean of m`, `U = max u`.
pub fn fdm_aggregate<T: Real>(opinions: &[TriangularFuzzyNumber<T>]) -> Result<TriangularFuzzyNumber<T>> {
    let first = opinions
        .first()
        .ok_or_else(|| Error::invalid("fuzzy Delphi aggregation needs at least one opinion"))?;
    let mut l = first.l();
    let mut u = first.u();
    let mut log_sum = T::zero();
    let mut any_zero = false;
    for o in opinions {
        l = l.min(o.l());
        u = u.max(o.u());
        if o.m() <= T::zero() {
            any_zero = true;
        } else {
            log_sum += o.m().ln();
        }
    }
    let m = if any_zero {
        T::zero()
    } else {
        (log_sum / T::from_count(opinions.len())).exp()
    };
    // Rounding in exp/ln can push the mean a hair outside [l, u].
    TriangularFuzzyNumber::new(l, m.max(l).min(u), u)
}

/// Maps Likert scores through a linguistic scale and aggregates them.
pub fn fdm_aggregate_scores<T: Real>(
    scores: &[u8],
    scale: &FuzzyLikertScale<T>,
) -> Result<TriangularFuzzyNumber<T>> {
    let opinions = scores
        .iter()
        .map(|&s| scale.for_score(s))
        .collect::<Result<Vec<_>>>()?;
    fdm_aggregate(&opinions)
}

/// Centre-of-gravity crisp value `S = (L + M + U) / 3`.
pub fn defuzzify_centroid<T: Real>(w: &TriangularFuzzyNumber<T>) -> T {
    w.centroid()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdmEntry<T> {
    pub id: String,
    pub crisp: T,
    pub selected: bool,
    /// Set when the entry passed the threshold but was removed by policy.
    pub excluded: bool,
}

/// Select/delete outcome of Delphi screening, in input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdmPartition<T> {
    pub alpha: T,
    pub entries: Vec<FdmEntry<T>>,
}

impl<T: Real> FdmPartition<T> {
    pub fn retained(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.selected).map(|e| e.id.as_str()).collect()
    }

    pub fn deleted(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| !e.selected).map(|e| e.id.as_str()).collect()
    }

    /// Moves the listed ids to the deleted side regardless of their score.
    pub fn with_exclusions<S: AsRef<str>>(mut self, exclude: &[S]) -> Self {
        for e in &mut self.entries {
            if exclude.iter().any(|x| x.as_ref() == e.id) && e.selected {
                e.selected = false;
                e.excluded = true;
            }
        }
        self
    }
}

/// Retains a parameter iff its crisp value reaches `alpha`.
pub fn fdm_screen<T: Real>(values: &[(String, T)], alpha: T) -> FdmPartition<T> {
    FdmPartition {
        alpha,
        entries: values
            .iter()
            .map(|(id, s)| FdmEntry {
                id: id.clone(),
                crisp: *s,
                selected: *s >= alpha,
                excluded: false,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    type Tfn = TriangularFuzzyNumber<f64>;

    fn t(l: f64, m: f64, u: f64) -> Tfn {
        Tfn::new(l, m, u).unwrap()
    }

    #[test]
    fn single_opinion_is_identity() {
        assert_eq!(fdm_aggregate(&[t(0.25, 0.5, 0.75)]).unwrap(), t(0.25, 0.5, 0.75));
    }

    #[test]
    fn two_opinions() {
        let w = fdm_aggregate(&[t(0.5, 0.75, 1.0), t(0.75, 1.0, 1.0)]).unwrap();
        assert_eq!(w.l(), 0.5);
        assert_relative_eq!(w.m(), 0.75f64.sqrt(), epsilon = 1e-12);
        assert_eq!(w.u(), 1.0);
    }

    #[test]
    fn zero_middle_annihilates() {
        let w = fdm_aggregate(&[t(0.0, 0.0, 0.25), t(0.75, 1.0, 1.0)]).unwrap();
        assert_eq!(w.m(), 0.0);
        assert!(fdm_aggregate::<f64>(&[]).is_err());
    }

    #[test]
    fn centroid_examples() {
        assert_relative_eq!(defuzzify_centroid(&t(0.75, 1.0, 1.0)), 0.9166666666666666, epsilon = 1e-12);
        assert_eq!(defuzzify_centroid(&t(0.0, 0.0, 0.0)), 0.0);
        assert_relative_eq!(defuzzify_centroid(&t(0.25, 0.68, 1.0)), 0.6433333333333333, epsilon = 1e-12);
    }

    #[test]
    fn screening_thresholds() {
        let vals = vec![("A".to_string(), 0.6), ("B".to_string(), 0.59), ("C".to_string(), 1.0)];
        assert_eq!(fdm_screen(&vals, 0.6).retained(), ["A", "C"]);
        assert_eq!(fdm_screen(&vals, 0.0).retained().len(), 3);
        assert!(fdm_screen(&vals, 1.01).retained().is_empty());
        let p = fdm_screen(&vals, 0.6).with_exclusions(&["A"]);
        assert_eq!(p.retained(), ["C"]);
        assert_eq!(p.deleted(), ["A", "B"]);
        assert!(p.entries[0].excluded);
    }

    #[test]
    fn scores_map_through_scale() {
        let w = fdm_aggregate_scores(&[5, 5, 4], &FuzzyLikertScale::<f64>::default()).unwrap();
        assert_eq!(w.l(), 0.5);
        assert_relative_eq!(w.m(), 0.75f64.powf(1.0 / 3.0), epsilon = 1e-12);
        assert_eq!(w.u(), 1.0);
    }

    fn tfn_strategy() -> impl Strategy<Value = Tfn> {
        (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b, c)| {
            let mut v = [a, b, c];
            v.sort_by(f64::total_cmp);
            t(v[0], v[1], v[2])
        })
    }

    proptest! {
        #[test]
        fn aggregate_stays_ordered(ops in prop::collection::vec(tfn_strategy(), 1..12)) {
            let w = fdm_aggregate(&ops).unwrap();
            prop_assert!(w.l() <= w.m() && w.m() <= w.u());
        }

        #[test]
        fn centroid_is_monotone(a in tfn_strategy(), d in (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64)) {
            let l = a.l() + d.0;
            let m = (a.m() + d.1).max(l);
            let u = (a.u() + d.2).max(m);
            let b = t(l, m, u);
            prop_assert!(defuzzify_centroid(&b) >= defuzzify_centroid(&a) - 1e-15);
        }
    }
}
