//! Prediction error measures.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Denominator of the absolute percentage error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapeBase {
    /// `|actual - predicted| / predicted`.
    #[default]
    Predicted,
    /// `|actual - predicted| / actual`.
    Actual,
}

/// Mean absolute percentage error, dividing by the prediction.
pub fn mape<T: Real>(predictions: &[T], actuals: &[T]) -> Result<T> {
    mape_with(predictions, actuals, MapeBase::Predicted)
}

pub fn mape_with<T: Real>(predictions: &[T], actuals: &[T], base: MapeBase) -> Result<T> {
    if predictions.len() != actuals.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} actuals",
            predictions.len(),
            actuals.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::invalid("MAPE of an empty series"));
    }
    let mut total = T::zero();
    for (&p, &a) in predictions.iter().zip(actuals) {
        let denom = match base {
            MapeBase::Predicted => p,
            MapeBase::Actual => a,
        };
        if denom == T::zero() {
            return Err(Error::invalid("MAPE denominator is zero"));
        }
        total += ((a - p) / denom).abs();
    }
    Ok(total / T::from_count(predictions.len()) * T::lit(100.0))
}

/// Both MAPE variants of a prediction series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapePair {
    pub predicted_base: f64,
    pub actual_base: f64,
}

impl MapePair {
    pub fn compute(predictions: &[f64], actuals: &[f64]) -> Result<Self> {
        Ok(MapePair {
            predicted_base: mape_with(predictions, actuals, MapeBase::Predicted)?,
            actual_base: mape_with(predictions, actuals, MapeBase::Actual)?,
        })
    }
}
