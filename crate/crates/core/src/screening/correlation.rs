//! Pearson and Spearman correlation, correlation matrices and the
//! correlation-based variable filter.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMethod {
    #[default]
    Pearson,
    Spearman,
}

/// Correlation of two equally long, non-constant series.
pub fn correlate<T: Real>(x: &[T], y: &[T], method: CorrelationMethod) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "series lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::invalid("correlation needs at least three observations"));
    }
    match method {
        CorrelationMethod::Pearson => pearson(x, y),
        CorrelationMethod::Spearman => pearson(&ranks(x), &ranks(y)),
    }
}

fn pearson<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    let n = T::from_count(x.len());
    let mx = x.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = y.iter().fold(T::zero(), |a, &b| a + b) / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= T::zero() {
        return Err(Error::ZeroVariance("first series".into()));
    }
    if syy <= T::zero() {
        return Err(Error::ZeroVariance("second series".into()));
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

/// 1-based ranks; tied values share their average rank.
pub fn ranks<T: Real>(x: &[T]) -> Vec<T> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![T::zero(); x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = T::from_count(i + j + 2) / T::lit(2.0);
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix<T> {
    pub names: Vec<String>,
    pub values: Matrix<T>,
    pub method: CorrelationMethod,
}

impl<T: Real> CorrelationMatrix<T> {
    pub fn get(&self, a: &str, b: &str) -> Option<T> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[(i, j)])
    }
}

/// Correlation matrix of named columns.
pub fn correlation_matrix<T: Real, S: AsRef<str>>(
    names: &[S],
    columns: &[Vec<T>],
    method: CorrelationMethod,
) -> Result<CorrelationMatrix<T>> {
    if names.len() != columns.len() {
        return Err(Error::DimensionMismatch("names and columns differ in count".into()));
    }
    let p = columns.len();
    let mut values = Matrix::identity(p);
    for i in 0..p {
        for j in i + 1..p {
            let r = correlate(&columns[i], &columns[j], method).map_err(|e| match e {
                Error::ZeroVariance(_) => {
                    let k = if is_constant(&columns[i]) { i } else { j };
                    Error::ZeroVariance(names[k].as_ref().to_string())
                }
                other => other,
            })?;
            values[(i, j)] = r;
            values[(j, i)] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        values,
        method,
    })
}

fn is_constant<T: Real>(x: &[T]) -> bool {
    x.windows(2).all(|w| w[0] == w[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMode {
    /// Drop collinear independents and those weakly related to the dependent.
    HiAndLo,
    /// Drop collinear independents only.
    HiOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum DropReason<T> {
    /// `|r|` with an earlier retained independent reached the upper bound.
    Collinear { with: String, r: T },
    /// `|r|` with the dependent did not exceed the lower bound.
    WeakDependence { r: T },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterOutcome<T> {
    pub retained: Vec<String>,
    pub dropped: Vec<(String, DropReason<T>)>,
}

/// Correlation filter over named independents against a dependent series.
///
/// Independents are visited in the given order. With the lower-bound rule on,
/// an independent with `|r(x, y)| <= lo` is dropped first; a survivor is then
/// dropped if `|r| >= hi` against any independent already retained.
pub fn correlation_filter<T: Real, S: AsRef<str>>(
    names: &[S],
    columns: &[Vec<T>],
    y: &[T],
    hi: T,
    lo: T,
    mode: FilterMode,
) -> Result<FilterOutcome<T>> {
    if !(hi > lo) {
        return Err(Error::invalid(format!("filter needs hi > lo, got hi {hi}, lo {lo}")));
    }
    if names.len() != columns.len() {
        return Err(Error::DimensionMismatch("names and columns differ in count".into()));
    }
    let mut retained: Vec<usize> = Vec::new();
    let mut dropped = Vec::new();
    'outer: for (i, col) in columns.iter().enumerate() {
        let name = names[i].as_ref().to_string();
        if mode == FilterMode::HiAndLo {
            let r = correlate(col, y, CorrelationMethod::Pearson)?;
            if r.abs() <= lo {
                dropped.push((name, DropReason::WeakDependence { r }));
                continue;
            }
        }
        for &k in &retained {
            let r = correlate(col, &columns[k], CorrelationMethod::Pearson)?;
            if r.abs() >= hi {
                dropped.push((
                    name,
                    DropReason::Collinear {
                        with: names[k].as_ref().to_string(),
                        r,
                    },
                ));
                continue 'outer;
            }
        }
        retained.push(i);
    }
    Ok(FilterOutcome {
        retained: retained.iter().map(|&i| names[i].as_ref().to_string()).collect(),
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn perfect_correlations() {
        let x = [1.0, 2.0, 4.0, 7.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_relative_eq!(correlate(&x, &x, CorrelationMethod::Pearson).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(correlate(&x, &neg, CorrelationMethod::Pearson).unwrap(), -1.0, epsilon = 1e-12);
        assert_relative_eq!(correlate(&x, &neg, CorrelationMethod::Spearman).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_series_is_zero_variance() {
        assert!(matches!(
            correlate(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], CorrelationMethod::Pearson),
            Err(Error::ZeroVariance(_))
        ));
        assert!(correlate(&[1.0, 2.0], &[1.0, 2.0], CorrelationMethod::Pearson).is_err());
        assert!(correlate(&[1.0, 2.0, 3.0], &[1.0, 2.0], CorrelationMethod::Pearson).is_err());
    }

    #[test]
    fn average_ranks_for_ties() {
        assert_eq!(ranks(&[10.0, 20.0, 20.0, 5.0]), vec![2.0, 3.5, 3.5, 1.0]);
    }

    #[test]
    fn spearman_with_ties_matches_reference() {
        // scipy.stats.spearmanr([1,2,2,3,5], [2,1,4,4,9]).statistic
        let r = correlate(&[1.0, 2.0, 2.0, 3.0, 5.0], &[2.0, 1.0, 4.0, 4.0, 9.0], CorrelationMethod::Spearman).unwrap();
        assert_relative_eq!(r, 0.7631578947368421, epsilon = 1e-12);
    }

    #[test]
    fn identical_independents_second_dropped() {
        let x = vec![1.0, 2.0, 3.0, 5.0, 8.0];
        let y = vec![2.0, 3.0, 7.0, 9.0, 17.0];
        let out = correlation_filter(&["a", "b"], &[x.clone(), x], &y, 0.8, 0.3, FilterMode::HiAndLo).unwrap();
        assert_eq!(out.retained, ["a"]);
        assert!(matches!(out.dropped[0].1, DropReason::Collinear { .. }));
    }

    #[test]
    fn weak_independent_dropped_only_with_lo_rule() {
        let y = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let x = vec![1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0];
        assert_relative_eq!(correlate(&x, &y, CorrelationMethod::Pearson).unwrap(), 0.0, epsilon = 1e-12);
        let with = correlation_filter(&["w"], &[x.clone()], &y, 0.8, 0.3, FilterMode::HiAndLo).unwrap();
        assert!(with.retained.is_empty());
        let without = correlation_filter(&["w"], &[x], &y, 0.8, 0.3, FilterMode::HiOnly).unwrap();
        assert_eq!(without.retained, ["w"]);
    }

    fn naive_r(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
        let sab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let saa: f64 = a.iter().map(|x| x * x).sum();
        let sbb: f64 = b.iter().map(|x| x * x).sum();
        (n * sab - sa * sb) / ((n * saa - sa * sa).sqrt() * (n * sbb - sb * sb).sqrt())
    }

    #[test]
    fn filter_matches_exhaustive_scan() {
        // Five synthetic variables: a near-copy of x1, a weak one, two independent signals.
        let n = 40;
        let t: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let x1: Vec<f64> = t.iter().map(|v| v + (v * 1.7).sin()).collect();
        let x2: Vec<f64> = t.iter().map(|v| v + 0.3 * (v * 0.9).cos()).collect();
        let x3: Vec<f64> = t.iter().map(|v| (v * 2.3).sin()).collect();
        let x4: Vec<f64> = t.iter().map(|v| (v * 0.37).sin() * 10.0).collect();
        let x5: Vec<f64> = t.iter().map(|v| (v * 0.11).cos() * 5.0 + v * 0.2).collect();
        let y: Vec<f64> = (0..n).map(|i| 2.0 * x1[i] + 3.0 * x4[i] + x5[i]).collect();
        let cols = vec![x1, x2, x3, x4, x5];
        let names = ["x1", "x2", "x3", "x4", "x5"];
        for mode in [FilterMode::HiAndLo, FilterMode::HiOnly] {
            // Oracle: a variable survives iff it passes the lo test (when on) and no
            // surviving earlier variable is |r| >= hi with it. Resolved by scanning all
            // 2^5 subsets for the one that is self-consistent under that definition.
            let mut consistent = Vec::new();
            for mask in 0u32..32 {
                let keep = |i: usize| mask & (1 << i) != 0;
                let ok = (0..5).all(|i| {
                    let lo_ok = mode == FilterMode::HiOnly || naive_r(&cols[i], &y).abs() > 0.3;
                    let hi_ok = (0..i).all(|k| !keep(k) || naive_r(&cols[i], &cols[k]).abs() < 0.8);
                    keep(i) == (lo_ok && hi_ok)
                });
                if ok {
                    consistent.push(mask);
                }
            }
            assert_eq!(consistent.len(), 1);
            let expected: Vec<&str> = (0..5).filter(|i| consistent[0] & (1 << i) != 0).map(|i| names[i]).collect();
            let got = correlation_filter(&names, &cols, &y, 0.8, 0.3, mode).unwrap();
            assert_eq!(got.retained, expected);
        }
    }

    proptest! {
        #[test]
        fn pearson_symmetric_and_affine_invariant(
            xs in prop::collection::vec(-100.0..100.0f64, 5..30),
            ys in prop::collection::vec(-100.0..100.0f64, 5..30),
            a in 0.1..10.0f64, b in -50.0..50.0f64,
        ) {
            let n = xs.len().min(ys.len());
            let (x, y) = (&xs[..n], &ys[..n]);
            if let Ok(r) = correlate(x, y, CorrelationMethod::Pearson) {
                let r2 = correlate(y, x, CorrelationMethod::Pearson).unwrap();
                prop_assert!((r - r2).abs() < 1e-12);
                let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let r3 = correlate(&xt, y, CorrelationMethod::Pearson).unwrap();
                prop_assert!((r - r3).abs() < 1e-9);
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }

        #[test]
        fn spearman_invariant_under_monotone_maps(
            xs in prop::collection::vec(-5.0..5.0f64, 5..30),
            ys in prop::collection::vec(-5.0..5.0f64, 5..30),
        ) {
            let n = xs.len().min(ys.len());
            let (x, y) = (&xs[..n], &ys[..n]);
            if let Ok(r) = correlate(x, y, CorrelationMethod::Spearman) {
                let xt: Vec<f64> = x.iter().map(|v| v.exp() + v.powi(3)).collect();
                let r2 = correlate(&xt, y, CorrelationMethod::Spearman).unwrap();
                prop_assert!((r - r2).abs() < 1e-12);
            }
        }
    }
}
