//! Request and response bodies shared by the `predict` command and the
//! HTTP server, so both produce the same bytes for the same inputs.

use crate::error::{CliError, Exit};
use fcip_core::data::Driver;
use fcip_core::models::{
    adjust_inflation, sensitivity_scenarios, CostModel, Retrieved, SavedModel, DEFAULT_BAND, DEFAULT_SCENARIOS,
};
use serde::Serialize;
use serde_json::{Map, Value};

pub const MAX_SCENARIOS: usize = 10_000;

/// A rejected or failed request.
#[derive(Debug, Clone, PartialEq)]
pub enum ApiError {
    /// A request field is missing, mistyped or out of range.
    Field { field: String, message: String },
    BadRequest(String),
    NotFound(String),
    /// The model cannot produce a prediction for these drivers.
    Domain(String),
    Internal(String),
}

impl ApiError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        ApiError::Field { field: field.to_string(), message: message.into() }
    }

    pub fn status(&self) -> u16 {
        match self {
            ApiError::Field { .. } | ApiError::BadRequest(_) => 400,
            ApiError::NotFound(_) => 404,
            ApiError::Domain(_) => 422,
            ApiError::Internal(_) => 500,
        }
    }

    pub fn message(&self) -> String {
        match self {
            ApiError::Field { field, message } => format!("{field}: {message}"),
            ApiError::BadRequest(m) | ApiError::NotFound(m) | ApiError::Domain(m) | ApiError::Internal(m) => m.clone(),
        }
    }

    /// `{"error": ..., "field": ...}`.
    pub fn body(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            error: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            field: Option<&'a str>,
        }
        let field = match self {
            ApiError::Field { field, .. } => Some(field.as_str()),
            _ => None,
        };
        serde_json::to_string(&Body { error: self.message(), field }).expect("error body serializes")
    }
}

impl From<fcip_core::Error> for ApiError {
    fn from(e: fcip_core::Error) -> Self {
        match CliError::from(e) {
            CliError { exit: Exit::Domain, message } => ApiError::Domain(message),
            CliError { exit: Exit::Internal, message } => ApiError::Internal(message),
            CliError { message, .. } => ApiError::BadRequest(message),
        }
    }
}

impl From<ApiError> for CliError {
    fn from(e: ApiError) -> Self {
        let message = e.message();
        match e {
            ApiError::Domain(_) => CliError::domain(message),
            ApiError::Internal(_) => CliError::internal(message),
            _ => CliError::usage(message),
        }
    }
}

/// Prediction inputs, minus the model selector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictQuery {
    pub area_ha: f64,
    pub length_m: f64,
    pub valves: f64,
    pub year: f64,
    /// Annual rate in percent.
    pub inflation_rate: Option<f64>,
    pub toggles: Vec<Driver>,
    pub scenarios: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub values: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictResponse {
    pub cost_le: f64,
    pub cost_per_hectare: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<ScenarioSummary>,
}

impl PredictResponse {
    /// Compact JSON, the exact body served over HTTP.
    pub fn render(&self) -> String {
        serde_json::to_string(self).expect("prediction serializes")
    }
}

pub fn parse_toggle(raw: &str) -> Result<Driver, ApiError> {
    Driver::parse(raw).ok_or_else(|| {
        ApiError::field(
            "toggles",
            format!("unknown driver `{raw}` (expected area, length, valves or year)"),
        )
    })
}

impl PredictQuery {
    pub fn validate(&self) -> Result<(), ApiError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ApiError::field(name, format!("must be a positive number, got {v}")))
            }
        };
        positive("area_ha", self.area_ha)?;
        positive("length_m", self.length_m)?;
        if !(self.valves.is_finite() && self.valves >= 1.0) {
            return Err(ApiError::field("valves", format!("must be at least 1, got {}", self.valves)));
        }
        if !(self.year.is_finite() && self.year.fract() == 0.0 && (1990.0..=2100.0).contains(&self.year)) {
            return Err(ApiError::field("year", format!("must be a whole year in 1990..=2100, got {}", self.year)));
        }
        if let Some(r) = self.inflation_rate {
            if !(r.is_finite() && r > -100.0) {
                return Err(ApiError::field("inflation_rate", format!("must be a percentage above -100, got {r}")));
            }
        }
        if let Some(n) = self.scenarios {
            if n == 0 || n > MAX_SCENARIOS {
                return Err(ApiError::field("scenarios", format!("must lie in 1..={MAX_SCENARIOS}, got {n}")));
            }
        }
        Ok(())
    }
}

/// Predicts at the query's drivers. When the target year lies past the
/// model's last training year the cost is predicted at that last year and
/// compounded forward at `inflation_rate`; scenario values are adjusted the
/// same way.
pub fn predict(model: &dyn CostModel, q: &PredictQuery) -> Result<PredictResponse, ApiError> {
    q.validate()?;
    let last = model.domain().last_year;
    let year = q.year as i32;
    let horizon = u32::try_from(year - last).unwrap_or(0);
    let rate = match (horizon, q.inflation_rate) {
        (0, r) => r.unwrap_or(0.0),
        (_, Some(r)) => r,
        (_, None) => {
            return Err(ApiError::field(
                "inflation_rate",
                format!("required when year {year} is after the model's last training year {last}"),
            ))
        }
    };
    let inflate = |c: f64| -> Result<f64, ApiError> {
        if horizon == 0 {
            Ok(c)
        } else {
            Ok(adjust_inflation(c, rate, horizon)?)
        }
    };
    let base_year = if horizon > 0 { f64::from(last) } else { q.year };
    let drivers = [q.area_ha, q.length_m, q.valves, base_year];
    let cost_le = inflate(model.predict(drivers)?)?;

    let scenarios = if q.toggles.is_empty() && q.scenarios.is_none() {
        None
    } else {
        let n = q.scenarios.unwrap_or(DEFAULT_SCENARIOS);
        let set = sensitivity_scenarios(
            model,
            drivers,
            &q.toggles,
            n,
            DEFAULT_BAND,
            model.domain().bounds,
            q.seed.unwrap_or(0),
        )?;
        Some(ScenarioSummary {
            values: set.values.iter().map(|&v| inflate(v)).collect::<Result<_, _>>()?,
            mean: inflate(set.mean)?,
            sd: inflate(set.sd)?,
        })
    };
    Ok(PredictResponse {
        cost_le,
        cost_per_hectare: cost_le / q.area_ha,
        scenarios,
    })
}

// ---- JSON body parsing with field-level errors ------------------------

fn object(body: &[u8]) -> Result<Map<String, Value>, ApiError> {
    match serde_json::from_slice::<Value>(body) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(ApiError::BadRequest("request body must be a JSON object".into())),
        Err(e) => Err(ApiError::BadRequest(format!("malformed JSON: {e}"))),
    }
}

fn reject_unknown(obj: &Map<String, Value>, known: &[&str]) -> Result<(), ApiError> {
    match obj.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(ApiError::field(k, format!("unknown field (expected one of {})", known.join(", ")))),
        None => Ok(()),
    }
}

fn number(obj: &Map<String, Value>, name: &str) -> Result<Option<f64>, ApiError> {
    match obj.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| ApiError::field(name, format!("expected a number, got {v}"))),
    }
}

fn required(obj: &Map<String, Value>, name: &str) -> Result<f64, ApiError> {
    number(obj, name)?.ok_or_else(|| ApiError::field(name, "is required"))
}

fn count(obj: &Map<String, Value>, name: &str) -> Result<Option<u64>, ApiError> {
    match obj.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| ApiError::field(name, format!("expected a non-negative integer, got {v}"))),
    }
}

/// Body of `POST /predict`.
pub fn parse_predict_body(body: &[u8]) -> Result<(String, PredictQuery), ApiError> {
    let obj = object(body)?;
    reject_unknown(
        &obj,
        &["model", "area_ha", "length_m", "valves", "year", "inflation_rate", "toggles", "scenarios", "seed"],
    )?;
    let model = match obj.get("model") {
        Some(Value::String(s)) => s.clone(),
        Some(v) => return Err(ApiError::field("model", format!("expected a string, got {v}"))),
        None => return Err(ApiError::field("model", "is required")),
    };
    let toggles = match obj.get("toggles") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => parse_toggle(s),
                other => Err(ApiError::field("toggles", format!("expected driver names, got {other}"))),
            })
            .collect::<Result<_, _>>()?,
        Some(v) => return Err(ApiError::field("toggles", format!("expected an array, got {v}"))),
    };
    let scenarios = count(&obj, "scenarios")?
        .map(|n| usize::try_from(n).map_err(|_| ApiError::field("scenarios", "too large")))
        .transpose()?;
    let q = PredictQuery {
        area_ha: required(&obj, "area_ha")?,
        length_m: required(&obj, "length_m")?,
        valves: required(&obj, "valves")?,
        year: required(&obj, "year")?,
        inflation_rate: number(&obj, "inflation_rate")?,
        toggles,
        scenarios,
        seed: count(&obj, "seed")?,
    };
    q.validate()?;
    Ok((model, q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrieveQuery {
    pub model: Option<String>,
    pub drivers: [f64; 4],
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrieveResponse {
    /// Cost of the most similar case.
    pub cost_le: f64,
    pub cases: Vec<Retrieved>,
}

/// Body of `POST /cbr/retrieve`.
pub fn parse_retrieve_body(body: &[u8]) -> Result<RetrieveQuery, ApiError> {
    let obj = object(body)?;
    reject_unknown(&obj, &["model", "area_ha", "length_m", "valves", "year", "k"])?;
    let model = match obj.get("model") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(v) => return Err(ApiError::field("model", format!("expected a string, got {v}"))),
    };
    let q = PredictQuery {
        area_ha: required(&obj, "area_ha")?,
        length_m: required(&obj, "length_m")?,
        valves: required(&obj, "valves")?,
        year: required(&obj, "year")?,
        ..PredictQuery::default()
    };
    q.validate()?;
    let k = count(&obj, "k")?.ok_or_else(|| ApiError::field("k", "is required"))?;
    if k == 0 {
        return Err(ApiError::field("k", "must be at least 1"));
    }
    Ok(RetrieveQuery {
        model,
        drivers: [q.area_ha, q.length_m, q.valves, q.year],
        k: usize::try_from(k).unwrap_or(usize::MAX),
    })
}

pub fn retrieve(model: &SavedModel, q: &RetrieveQuery) -> Result<RetrieveResponse, ApiError> {
    match model {
        SavedModel::Cbr(m) => {
            let (cost_le, cases) = m.retrieve(q.drivers, q.k)?;
            Ok(RetrieveResponse { cost_le, cases })
        }
        other => Err(ApiError::BadRequest(format!(
            "model kind `{}` does not support retrieval",
            other.model().kind()
        ))),
    }
}
