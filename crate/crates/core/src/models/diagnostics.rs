//! Influence, collinearity and autocorrelation diagnostics of a fitted regression.

use super::regression::{linear_predictor, FittedCostModel};
use crate::data::{Dataset, Driver};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::screening::ols_fit;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionDiagnostics {
    pub cooks_distance: Vec<f64>,
    pub max_cooks_distance: f64,
    pub leverage: Vec<f64>,
    /// Per driver in area, length, valves, year order.
    pub vif: Vec<f64>,
    pub tolerance: Vec<f64>,
    pub durbin_watson: f64,
}

/// Diagnostics of `model` on the data it was fitted to, computed on
/// fitting-space residuals in dataset order.
pub fn diagnostics(model: &FittedCostModel, train: &Dataset) -> Result<RegressionDiagnostics> {
    let n = train.len();
    let k = Driver::ALL.len();
    let p = k + 1;
    if n <= p {
        return Err(Error::invalid("diagnostics need more cases than parameters"));
    }
    let residuals: Vec<f64> = train
        .cases()
        .iter()
        .map(|c| model.transformation.apply(c.cost_le) - linear_predictor(model, c.drivers()))
        .collect();
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let mse = sse / (n - p) as f64;

    let leverage = hat_diagonal(train)?;
    let cooks_distance: Vec<f64> = residuals
        .iter()
        .zip(&leverage)
        .map(|(e, h)| {
            if mse == 0.0 || *h >= 1.0 {
                0.0
            } else {
                e * e / (p as f64 * mse) * h / ((1.0 - h) * (1.0 - h))
            }
        })
        .collect();
    let max_cooks_distance = cooks_distance.iter().copied().fold(0.0, f64::max);

    let columns: Vec<Vec<f64>> = Driver::ALL.iter().map(|&d| train.driver_column(d)).collect();
    let mut vif = Vec::with_capacity(k);
    for j in 0..k {
        let others: Vec<Vec<f64>> = (0..k).filter(|&i| i != j).map(|i| columns[i].clone()).collect();
        let names: Vec<&str> = (0..k).filter(|&i| i != j).map(|i| Driver::ALL[i].symbol()).collect();
        let fit = ols_fit(&names, &others, &columns[j])?;
        vif.push(if fit.r2 >= 1.0 { f64::INFINITY } else { 1.0 / (1.0 - fit.r2) });
    }
    let tolerance = vif.iter().map(|v| 1.0 / v).collect();

    let durbin_watson = if sse == 0.0 {
        0.0
    } else {
        residuals.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / sse
    };
    Ok(RegressionDiagnostics {
        cooks_distance,
        max_cooks_distance,
        leverage,
        vif,
        tolerance,
        durbin_watson,
    })
}

/// Diagonal of the hat matrix. Predictors are centred first; with an
/// intercept this leaves the hat matrix unchanged and keeps the normal
/// equations well conditioned.
fn hat_diagonal(ds: &Dataset) -> Result<Vec<f64>> {
    let n = ds.len();
    let cols: Vec<Vec<f64>> = Driver::ALL
        .iter()
        .map(|&d| {
            let c = ds.driver_column(d);
            let m = c.iter().sum::<f64>() / n as f64;
            c.into_iter().map(|v| v - m).collect()
        })
        .collect();
    let k = cols.len();
    let xtx = Matrix::from_fn(k, k, |a, b| (0..n).map(|i| cols[a][i] * cols[b][i]).sum::<f64>());
    let inv = xtx.inverse().ok_or_else(|| Error::RankDeficient {
        column: "driver matrix".into(),
    })?;
    Ok((0..n)
        .map(|i| {
            let x: Vec<f64> = cols.iter().map(|c| c[i]).collect();
            let mut q = 0.0;
            for a in 0..k {
                for b in 0..k {
                    q += x[a] * inv[(a, b)] * x[b];
                }
            }
            1.0 / n as f64 + q
        })
        .collect())
}
