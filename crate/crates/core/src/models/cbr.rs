//! Case-based reasoning: weighted min/max similarity retrieval.

use super::metrics::MapePair;
use super::transform::Transformation;
use super::{validate_drivers, CostModel, Metrics, ModelKind, TrainingDomain};
use crate::data::{Dataset, ProjectCase, Role};
use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Area, length, valves, year.
pub const DEFAULT_ATTRIBUTE_WEIGHTS: [f64; 4] = [0.2, 0.2, 0.2, 0.4];

/// `min(a, b) / max(a, b)` for positive attribute values.
pub fn attribute_similarity<T: Real>(a: T, b: T) -> Result<T> {
    if !(a > T::zero() && b > T::zero()) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid("attribute similarity needs positive values"));
    }
    Ok(a.min(b) / a.max(b))
}

/// Weighted mean of attribute similarities.
pub fn case_similarity<T: Real>(similarities: &[T], weights: &[T]) -> Result<T> {
    if similarities.len() != weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} similarities for {} weights",
            similarities.len(),
            weights.len()
        )));
    }
    let total = weights.iter().fold(T::zero(), |s, &w| s + w);
    if weights.iter().any(|&w| w < T::zero()) || total <= T::zero() {
        return Err(Error::invalid("attribute weights must be non-negative with a positive sum"));
    }
    let num = similarities.iter().zip(weights).fold(T::zero(), |s, (&a, &w)| s + a * w);
    Ok(num / total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbrConfig {
    weights: [f64; 4],
    case_base: Dataset,
}

impl CbrConfig {
    pub fn new(weights: [f64; 4], case_base: Dataset) -> Result<Self> {
        case_similarity(&[1.0; 4], &weights)?;
        Ok(CbrConfig { weights, case_base })
    }

    pub fn with_default_weights(case_base: Dataset) -> Self {
        CbrConfig {
            weights: DEFAULT_ATTRIBUTE_WEIGHTS,
            case_base,
        }
    }

    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }

    pub fn case_base(&self) -> &Dataset {
        &self.case_base
    }

    /// Returns a config whose base also holds `case`. Retention is always
    /// an explicit step.
    pub fn retain(&self, case: ProjectCase) -> Result<Self> {
        let mut cases = self.case_base.cases().to_vec();
        cases.push(case);
        Ok(CbrConfig {
            weights: self.weights,
            case_base: Dataset::new(cases, self.case_base.role())?,
        })
    }
}

/// One retrieved case with its per-attribute and overall similarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Retrieved {
    pub id: String,
    pub rank: usize,
    pub attribute_similarity: [f64; 4],
    pub case_similarity: f64,
    pub cost_le: f64,
}

fn score(config: &CbrConfig, query: [f64; 4], case: &ProjectCase) -> Result<([f64; 4], f64)> {
    let mut attr = [0.0; 4];
    for (s, (q, c)) in attr.iter_mut().zip(query.iter().zip(case.drivers())) {
        *s = attribute_similarity(*q, c)?;
    }
    let cs = case_similarity(&attr, &config.weights)?;
    Ok((attr, cs))
}

/// Ranks the base by similarity to `query` (ties keep dataset order) and
/// returns the top case's cost with the first `k` retrieved cases.
pub fn cbr_predict(config: &CbrConfig, query: [f64; 4], k: usize) -> Result<(f64, Vec<Retrieved>)> {
    cbr_predict_excluding(config, query, k, None)
}

fn cbr_predict_excluding(
    config: &CbrConfig,
    query: [f64; 4],
    k: usize,
    exclude: Option<&str>,
) -> Result<(f64, Vec<Retrieved>)> {
    validate_drivers(query)?;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut scored = Vec::with_capacity(config.case_base.len());
    for case in config.case_base.cases() {
        if Some(case.id.as_str()) == exclude {
            continue;
        }
        let (attr, cs) = score(config, query, case)?;
        scored.push((case, attr, cs));
    }
    if scored.is_empty() {
        return Err(Error::EmptyDataset);
    }
    // Stable sort keeps earlier cases first among equal similarities.
    scored.sort_by(|a, b| b.2.total_cmp(&a.2));
    let top = scored[0].0.cost_le;
    let list = scored
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (case, attr, cs))| Retrieved {
            id: case.id.clone(),
            rank: i + 1,
            attribute_similarity: attr,
            case_similarity: cs,
            cost_le: case.cost_le,
        })
        .collect();
    Ok((top, list))
}

/// A CBR estimator persisted with its embedded case base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCbr", into = "RawCbr")]
pub struct CbrModel {
    config: CbrConfig,
    pub metrics: Metrics,
    domain: TrainingDomain,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct RawCbr {
    transformation: Transformation,
    attribute_weights: [f64; 4],
    case_base: Vec<ProjectCase>,
    #[serde(default)]
    metrics: Metrics,
    #[serde(default)]
    seed: u64,
}

impl TryFrom<RawCbr> for CbrModel {
    type Error = Error;

    fn try_from(raw: RawCbr) -> Result<Self> {
        if raw.transformation != Transformation::None {
            return Err(Error::invalid("CBR models carry no response transformation"));
        }
        let base = Dataset::new(raw.case_base, Role::Training)?;
        let mut m = CbrModel::new(CbrConfig::new(raw.attribute_weights, base)?);
        m.metrics = raw.metrics;
        m.seed = raw.seed;
        Ok(m)
    }
}

impl From<CbrModel> for RawCbr {
    fn from(m: CbrModel) -> Self {
        RawCbr {
            transformation: Transformation::None,
            attribute_weights: m.config.weights,
            case_base: m.config.case_base.cases().to_vec(),
            metrics: m.metrics,
            seed: m.seed,
        }
    }
}

impl CbrModel {
    pub fn new(config: CbrConfig) -> Self {
        let domain = TrainingDomain::of(&config.case_base);
        CbrModel {
            config,
            metrics: Metrics::default(),
            domain,
            seed: 0,
        }
    }

    /// Builds a model over `base` and records its leave-one-out MAPE.
    pub fn fit(base: Dataset, weights: [f64; 4]) -> Result<Self> {
        let mut m = CbrModel::new(CbrConfig::new(weights, base)?);
        let loo = m.leave_one_out()?;
        m.metrics.mape_loo = Some(loo.predicted_base);
        Ok(m)
    }

    pub fn config(&self) -> &CbrConfig {
        &self.config
    }

    pub fn retrieve(&self, query: [f64; 4], k: usize) -> Result<(f64, Vec<Retrieved>)> {
        cbr_predict(&self.config, query, k)
    }

    /// Each base case predicted from the remaining ones.
    pub fn leave_one_out(&self) -> Result<MapePair> {
        let base = self.config.case_base.cases();
        if base.len() < 2 {
            return Err(Error::invalid("leave-one-out needs at least two cases"));
        }
        let preds = base
            .iter()
            .map(|c| cbr_predict_excluding(&self.config, c.drivers(), 1, Some(&c.id)).map(|r| r.0))
            .collect::<Result<Vec<_>>>()?;
        MapePair::compute(&preds, &self.config.case_base.costs())
    }
}

impl CostModel for CbrModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Cbr
    }

    fn transformation(&self) -> Transformation {
        Transformation::None
    }

    fn predict(&self, drivers: [f64; 4]) -> Result<f64> {
        cbr_predict(&self.config, drivers, 1).map(|r| r.0)
    }

    fn domain(&self) -> &TrainingDomain {
        &self.domain
    }

    fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    fn metrics_mut(&mut self) -> &mut Metrics {
        &mut self.metrics
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn base() -> Dataset {
        let rows = [
            ("1", 25.0, 530.0, 4, 2014, 303024.42),
            ("2", 30.0, 779.0, 3, 2014, 321716.52),
            ("3", 24.0, 482.0, 5, 2014, 343826.61),
        ];
        let cases = rows
            .iter()
            .map(|&(id, a, l, v, y, c)| ProjectCase::new(id, a, l, v, y, c).unwrap())
            .collect();
        Dataset::new(cases, Role::Training).unwrap()
    }

    #[test]
    fn similarity_examples() {
        assert_abs_diff_eq!(attribute_similarity(24.0, 25.0).unwrap(), 0.96, epsilon = 1e-12);
        assert_abs_diff_eq!(attribute_similarity(530.0, 779.0).unwrap(), 0.680359, epsilon = 1e-6);
        assert_eq!(attribute_similarity(7.5, 7.5).unwrap(), 1.0);
        assert!(attribute_similarity(0.0, 1.0).is_err());
        assert!(attribute_similarity(-2.0, 1.0).is_err());
    }

    #[test]
    fn case_similarity_examples() {
        let aw = DEFAULT_ATTRIBUTE_WEIGHTS;
        assert_abs_diff_eq!(case_similarity(&[0.96, 0.68, 1.0, 1.0], &aw).unwrap(), 0.928, epsilon = 1e-12);
        assert_abs_diff_eq!(case_similarity(&[0.80, 1.0, 0.75, 1.0], &aw).unwrap(), 0.91, epsilon = 1e-12);
        assert_eq!(case_similarity(&[1.0; 4], &aw).unwrap(), 1.0);
        assert!(case_similarity(&[1.0; 4], &[0.0; 4]).is_err());
        assert!(case_similarity(&[1.0; 3], &aw).is_err());
    }

    #[test]
    fn exact_match_is_retrieved_first() {
        let cfg = CbrConfig::with_default_weights(base());
        let (cost, list) = cbr_predict(&cfg, [24.0, 482.0, 5.0, 2014.0], 3).unwrap();
        assert_eq!(cost, 343826.61);
        assert_eq!(list[0].id, "3");
        assert_eq!(list[0].case_similarity, 1.0);
        assert_eq!(list.len(), 3);
        assert!(list.windows(2).all(|w| w[0].case_similarity >= w[1].case_similarity));
    }

    #[test]
    fn ties_keep_dataset_order() {
        let cases = vec![
            ProjectCase::new("B", 20.0, 400.0, 4, 2014, 1.0).unwrap(),
            ProjectCase::new("A", 20.0, 400.0, 4, 2014, 2.0).unwrap(),
        ];
        let cfg = CbrConfig::with_default_weights(Dataset::new(cases, Role::Training).unwrap());
        let (cost, list) = cbr_predict(&cfg, [30.0, 500.0, 4.0, 2014.0], 2).unwrap();
        assert_eq!(cost, 1.0);
        assert_eq!(list[0].id, "B");
    }

    #[test]
    fn retain_is_explicit() {
        let cfg = CbrConfig::with_default_weights(base());
        let grown = cfg.retain(ProjectCase::new("9", 60.0, 900.0, 8, 2015, 5e5).unwrap()).unwrap();
        assert_eq!(cfg.case_base().len(), 3);
        assert_eq!(grown.case_base().len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let m = CbrModel::fit(base(), DEFAULT_ATTRIBUTE_WEIGHTS).unwrap();
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["case_base"].as_array().unwrap().len(), 3);
        assert_eq!(json["transformation"], "none");
        let back: CbrModel = serde_json::from_value(json).unwrap();
        assert_eq!(back, m);
    }

    proptest! {
        #[test]
        fn attribute_similarity_properties(a in 0.01f64..1e5, b in 0.01f64..1e5, k in 0.01f64..100.0) {
            let s = attribute_similarity(a, b).unwrap();
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert_eq!(s, attribute_similarity(b, a).unwrap());
            prop_assert!((attribute_similarity(k * a, k * b).unwrap() - s).abs() < 1e-12);
            prop_assert_eq!(s == 1.0, a == b);
        }

        #[test]
        fn case_similarity_scale_invariant(
            s in prop::array::uniform4(0.0f64..=1.0),
            w in prop::array::uniform4(0.01f64..5.0),
            k in 0.01f64..100.0,
        ) {
            let a = case_similarity(&s, &w).unwrap();
            let scaled: Vec<f64> = w.iter().map(|x| x * k).collect();
            prop_assert!((case_similarity(&s, &scaled).unwrap() - a).abs() < 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        }
    }
}
