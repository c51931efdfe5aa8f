//! Transformed multiple linear regression on the four key drivers.

use super::metrics::MapePair;
use super::transform::Transformation;
use super::{validate_drivers, CostModel, Metrics, ModelKind, TrainingDomain};
use crate::data::{Dataset, Driver};
use crate::error::{Error, Result};
use crate::screening::ols_fit;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedCostModel {
    pub transformation: Transformation,
    /// `B0..B4` in fitting-space units: intercept, area, length, valves, year.
    pub coefficients: [f64; 5],
    pub metrics: Metrics,
    pub domain: TrainingDomain,
    pub seed: u64,
}

/// Fits the transformed response on area, length, valves and year.
pub fn fit_parametric(train: &Dataset, transformation: Transformation) -> Result<FittedCostModel> {
    let names: Vec<&str> = Driver::ALL.iter().map(|d| d.symbol()).collect();
    let columns: Vec<Vec<f64>> = Driver::ALL.iter().map(|&d| train.driver_column(d)).collect();
    let y: Vec<f64> = train.costs().into_iter().map(|c| transformation.apply(c)).collect();
    let fit = ols_fit(&names, &columns, &y)?;
    let mut coefficients = [0.0; 5];
    coefficients.copy_from_slice(&fit.coefficients);
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonConvergence("regression produced non-finite coefficients".into()));
    }
    let mut model = FittedCostModel {
        transformation,
        coefficients,
        metrics: Metrics {
            r: Some(fit.r),
            r2: Some(fit.r2),
            adj_r2: Some(fit.adj_r2),
            f: Some(fit.f),
            ..Metrics::default()
        },
        domain: TrainingDomain::of(train),
        seed: 0,
    };
    let preds = predict_all(&model, train)?;
    let m = MapePair::compute(&preds, &train.costs())?;
    model.metrics.mape_train = Some(m.predicted_base);
    model.metrics.mape_train_actual = Some(m.actual_base);
    Ok(model)
}

/// Linear predictor in the fitting space.
pub fn linear_predictor(model: &FittedCostModel, drivers: [f64; 4]) -> f64 {
    drivers
        .iter()
        .zip(&model.coefficients[1..])
        .fold(model.coefficients[0], |acc, (x, b)| acc + x * b)
}

/// Predicted cost in LE for a driver vector `[area, length, valves, year]`.
pub fn predict_cost(model: &FittedCostModel, drivers: [f64; 4]) -> Result<f64> {
    validate_drivers(drivers)?;
    model.transformation.invert(linear_predictor(model, drivers))
}

fn predict_all(model: &FittedCostModel, ds: &Dataset) -> Result<Vec<f64>> {
    ds.cases().iter().map(|c| predict_cost(model, c.drivers())).collect()
}

impl CostModel for FittedCostModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Regression
    }

    fn transformation(&self) -> Transformation {
        self.transformation
    }

    fn predict(&self, drivers: [f64; 4]) -> Result<f64> {
        predict_cost(self, drivers)
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
