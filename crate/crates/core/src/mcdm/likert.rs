//! Likert-scale mean score, standard error and threshold screening.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Scores given by the respondents to one parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LikertResponses {
    parameter_id: String,
    scores: Vec<u8>,
}

impl LikertResponses {
    pub fn new(parameter_id: impl Into<String>, scores: Vec<u8>) -> Result<Self> {
        let parameter_id = parameter_id.into();
        if scores.is_empty() {
            return Err(Error::invalid(format!("`{parameter_id}` has no responses")));
        }
        if let Some(s) = scores.iter().find(|s| !(1..=5).contains(*s)) {
            return Err(Error::invalid(format!("`{parameter_id}`: score {s} outside 1..=5")));
        }
        Ok(LikertResponses { parameter_id, scores })
    }

    pub fn parameter_id(&self) -> &str {
        &self.parameter_id
    }

    pub fn scores(&self) -> &[u8] {
        &self.scores
    }

    /// Frequency of each rating 1..=5.
    pub fn frequencies(&self) -> [usize; 5] {
        let mut f = [0; 5];
        for &s in &self.scores {
            f[usize::from(s) - 1] += 1;
        }
        f
    }
}

/// Mean score `Σ f·s / n`.
pub fn mean_score(r: &LikertResponses) -> f64 {
    let n = r.scores.len() as f64;
    let weighted: usize = r
        .frequencies()
        .iter()
        .enumerate()
        .map(|(i, f)| (i + 1) * f)
        .sum();
    weighted as f64 / n
}

/// Standard error `σ / √n` with σ the sample standard deviation.
pub fn standard_error(r: &LikertResponses) -> Result<f64> {
    let n = r.scores.len();
    if n < 2 {
        return Err(Error::invalid("standard error needs at least two responses"));
    }
    let mean = mean_score(r);
    let ss: f64 = r.scores.iter().map(|&s| (f64::from(s) - mean).powi(2)).sum();
    let sd = (ss / (n - 1) as f64).sqrt();
    Ok(sd / (n as f64).sqrt())
}

/// Ids whose mean score reaches the threshold, in input order.
pub fn screen_by_mean(scored: &[(String, f64)], threshold: f64) -> Vec<String> {
    scored
        .iter()
        .filter(|(_, ms)| *ms >= threshold)
        .map(|(id, _)| id.clone())
        .collect()
}
