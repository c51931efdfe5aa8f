//! Parametric cost models, their evaluation and scenario analysis.

pub mod cbr;
pub mod diagnostics;
pub mod metrics;
pub mod mlp;
pub mod regression;
pub mod sensitivity;
pub mod transform;

pub use cbr::{attribute_similarity, case_similarity, cbr_predict, CbrConfig, CbrModel, Retrieved, DEFAULT_ATTRIBUTE_WEIGHTS};
pub use diagnostics::{diagnostics, RegressionDiagnostics};
pub use metrics::{mape, mape_with, MapeBase, MapePair};
pub use mlp::{
    analytic_gradient, gradient_check, max_relative_error, mlp_predict, mlp_train, numeric_gradient, Activation,
    MlpConfig, MlpModel, MlpWeights, Optimizer,
};
pub use regression::{fit_parametric, linear_predictor, predict_cost, FittedCostModel};
pub use sensitivity::{adjust_inflation, importance_ranking, sensitivity_scenarios, Importance, ScenarioSet, DEFAULT_BAND, DEFAULT_SCENARIOS};
pub use transform::Transformation;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyCostModel;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Regression,
    Mlp,
    Cbr,
    Fuzzy,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Regression => "regression",
            ModelKind::Mlp => "mlp",
            ModelKind::Cbr => "cbr",
            ModelKind::Fuzzy => "fuzzy",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Driver ranges and latest project year seen during training.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingDomain {
    pub bounds: [(f64, f64); 4],
    pub last_year: i32,
}

impl TrainingDomain {
    pub fn of(ds: &Dataset) -> Self {
        TrainingDomain {
            bounds: ds.driver_bounds(),
            last_year: ds.cases().iter().map(|c| c.year).max().unwrap_or(0),
        }
    }
}

/// Fit and evaluation metrics; absent entries are not serialized.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adj_r2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    /// MAPE over the training cases, prediction in the denominator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mape_train: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mape_train_actual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mape_valid: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mape_valid_actual: Option<f64>,
    /// Leave-one-out MAPE (CBR only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mape_loo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<usize>,
}

/// Anything that maps a driver vector `[area, length, valves, year]` to LE.
pub trait CostModel: Send + Sync {
    fn kind(&self) -> ModelKind;
    fn transformation(&self) -> Transformation;
    fn predict(&self, drivers: [f64; 4]) -> Result<f64>;
    fn domain(&self) -> &TrainingDomain;
    fn metrics(&self) -> &Metrics;
    fn metrics_mut(&mut self) -> &mut Metrics;
}

/// Rejects physically implausible driver vectors.
pub fn validate_drivers(d: [f64; 4]) -> Result<()> {
    let [area, length, valves, year] = d;
    if !(area.is_finite() && area > 0.0) {
        return Err(Error::invalid(format!("area_ha must be > 0, got {area}")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::invalid(format!("length_m must be > 0, got {length}")));
    }
    if !(valves.is_finite() && valves >= 1.0) {
        return Err(Error::invalid(format!("valves must be >= 1, got {valves}")));
    }
    if !(year.is_finite() && (1990.0..=2100.0).contains(&year)) {
        return Err(Error::invalid(format!("year must lie in 1990..=2100, got {year}")));
    }
    Ok(())
}

/// Both MAPE variants of `model` over every case of `ds`.
pub fn evaluate(model: &dyn CostModel, ds: &Dataset) -> Result<MapePair> {
    let preds = ds
        .cases()
        .iter()
        .map(|c| model.predict(c.drivers()))
        .collect::<Result<Vec<_>>>()?;
    MapePair::compute(&preds, &ds.costs())
}

/// Records validation MAPE on the model's metrics.
pub fn record_validation(model: &mut dyn CostModel, valid: &Dataset) -> Result<MapePair> {
    let m = evaluate(model, valid)?;
    let metrics = model.metrics_mut();
    metrics.mape_valid = Some(m.predicted_base);
    metrics.mape_valid_actual = Some(m.actual_base);
    Ok(m)
}

/// On-disk model representation, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SavedModel {
    Regression(FittedCostModel),
    Mlp(MlpModel),
    Cbr(CbrModel),
    Fuzzy(FuzzyCostModel),
}

impl SavedModel {
    pub fn model(&self) -> &dyn CostModel {
        match self {
            SavedModel::Regression(m) => m,
            SavedModel::Mlp(m) => m,
            SavedModel::Cbr(m) => m,
            SavedModel::Fuzzy(m) => m,
        }
    }

    pub fn model_mut(&mut self) -> &mut dyn CostModel {
        match self {
            SavedModel::Regression(m) => m,
            SavedModel::Mlp(m) => m,
            SavedModel::Cbr(m) => m,
            SavedModel::Fuzzy(m) => m,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl From<FittedCostModel> for SavedModel {
    fn from(m: FittedCostModel) -> Self {
        SavedModel::Regression(m)
    }
}

impl From<MlpModel> for SavedModel {
    fn from(m: MlpModel) -> Self {
        SavedModel::Mlp(m)
    }
}

impl From<CbrModel> for SavedModel {
    fn from(m: CbrModel) -> Self {
        SavedModel::Cbr(m)
    }
}

impl From<FuzzyCostModel> for SavedModel {
    fn from(m: FuzzyCostModel) -> Self {
        SavedModel::Fuzzy(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ProjectCase, Role};

    fn tiny() -> Dataset {
        let cases = (0..8)
            .map(|i| {
                let a = 20.0 + 7.0 * f64::from(i);
                let l = 300.0 + 90.0 * f64::from(i * i % 7);
                let v = 3 + (i * 3 % 5) as u32;
                let y = 2010 + i % 5;
                let cost = 2000.0 * a + 140.0 * l + 9000.0 * f64::from(v) + 100.0 * f64::from(y - 2000);
                ProjectCase::new(format!("C{i}"), a, l, v, y, cost).unwrap()
            })
            .collect();
        Dataset::new(cases, Role::Training).unwrap()
    }

    #[test]
    fn domain_tracks_last_year() {
        let d = TrainingDomain::of(&tiny());
        assert_eq!(d.last_year, 2014);
        assert_eq!(d.bounds[0], (20.0, 69.0));
    }

    #[test]
    fn saved_model_json_shape_and_round_trip() {
        let m = fit_parametric(&tiny(), Transformation::Sqrt).unwrap();
        let saved = SavedModel::from(m);
        let json = saved.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["kind"], "regression");
        assert_eq!(v["transformation"], "sqrt");
        assert_eq!(v["coefficients"].as_array().unwrap().len(), 5);
        assert!(v["metrics"]["r2"].is_number());
        assert!(v["metrics"].get("mape_loo").is_none());
        assert_eq!(v["seed"], 0);
        assert_eq!(SavedModel::from_json(&json).unwrap(), saved);
    }

    #[test]
    fn unknown_kind_is_rejected() {
        assert!(SavedModel::from_json(r#"{"kind":"forest","seed":0}"#).is_err());
    }

    #[test]
    fn driver_validation() {
        assert!(validate_drivers([19.6, 453.0, 6.0, 2020.0]).is_ok());
        assert!(validate_drivers([0.0, 453.0, 6.0, 2020.0]).is_err());
        assert!(validate_drivers([19.6, 453.0, 0.0, 2020.0]).is_err());
        assert!(validate_drivers([19.6, f64::NAN, 6.0, 2020.0]).is_err());
    }
}
