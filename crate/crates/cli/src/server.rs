//! JSON-over-HTTP front end. Loaded models are immutable and shared
//! across request handlers.

use crate::api::{self, ApiError};
use crate::commands::load_model;
use crate::error::{CliError, CliResult};
use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use fcip_core::models::{Metrics, SavedModel, Transformation};
use serde::Serialize;
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct NamedModel {
    pub name: String,
    pub model: SavedModel,
}

#[derive(Debug, Clone, Default)]
pub struct AppState {
    pub models: Vec<NamedModel>,
}

impl AppState {
    /// Names each model by its kind, or by file stem when two models share
    /// a kind.
    pub fn from_models(models: Vec<(PathBuf, SavedModel)>) -> CliResult<Self> {
        let kinds: Vec<_> = models.iter().map(|(_, m)| m.model().kind()).collect();
        let mut named: Vec<NamedModel> = Vec::with_capacity(models.len());
        for (i, (path, model)) in models.into_iter().enumerate() {
            let kind = kinds[i];
            let name = if kinds.iter().filter(|k| **k == kind).count() == 1 {
                kind.name().to_string()
            } else {
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            };
            if name.is_empty() || named.iter().any(|n| n.name == name) {
                return Err(CliError::usage(format!("cannot give {} a unique model name", path.display())));
            }
            named.push(NamedModel { name, model });
        }
        Ok(AppState { models: named })
    }

    pub fn load(paths: &[PathBuf]) -> CliResult<Self> {
        let models = paths
            .iter()
            .map(|p| load_model(p).map(|m| (p.clone(), m)))
            .collect::<CliResult<Vec<_>>>()?;
        Self::from_models(models)
    }

    /// By name, or by kind when exactly one model has that kind.
    pub fn find(&self, key: &str) -> Result<&SavedModel, ApiError> {
        if let Some(m) = self.models.iter().find(|m| m.name == key) {
            return Ok(&m.model);
        }
        let by_kind: Vec<_> = self.models.iter().filter(|m| m.model.model().kind().name() == key).collect();
        match by_kind.as_slice() {
            [one] => Ok(&one.model),
            [] => Err(ApiError::field("model", format!("no loaded model named `{key}`"))),
            _ => Err(ApiError::field("model", format!("`{key}` is ambiguous; use a model name from GET /models"))),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ModelEntry<'a> {
    pub name: &'a str,
    pub kind: &'static str,
    pub transformation: Transformation,
    pub metrics: &'a Metrics,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/predict", post(predict))
        .route("/cbr/retrieve", post(retrieve))
        .route("/models", get(models))
        .with_state(Arc::new(state))
}

fn json_response(status: u16, body: String) -> Response {
    let status = StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error_response(e: ApiError) -> Response {
    json_response(e.status(), e.body())
}

async fn predict(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let run = || -> Result<String, ApiError> {
        let (name, q) = api::parse_predict_body(&body)?;
        let model = state.find(&name)?;
        Ok(api::predict(model.model(), &q)?.render())
    };
    match run() {
        Ok(body) => json_response(200, body),
        Err(e) => error_response(e),
    }
}

async fn retrieve(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let run = || -> Result<String, ApiError> {
        let q = api::parse_retrieve_body(&body)?;
        let model = match &q.model {
            Some(name) => state.find(name)?,
            None => state.find("cbr").map_err(|_| ApiError::NotFound("no CBR model is loaded".into()))?,
        };
        let resp = api::retrieve(model, &q)?;
        serde_json::to_string(&resp).map_err(|e| ApiError::Internal(e.to_string()))
    };
    match run() {
        Ok(body) => json_response(200, body),
        Err(e) => error_response(e),
    }
}

async fn models(State(state): State<Arc<AppState>>) -> Response {
    let entries: Vec<ModelEntry> = state
        .models
        .iter()
        .map(|m| {
            let dyn_model = m.model.model();
            ModelEntry {
                name: &m.name,
                kind: dyn_model.kind().name(),
                transformation: dyn_model.transformation(),
                metrics: dyn_model.metrics(),
            }
        })
        .collect();
    match serde_json::to_string(&entries) {
        Ok(body) => json_response(200, body),
        Err(e) => error_response(ApiError::Internal(e.to_string())),
    }
}

/// Binds `host:port` and serves until the process is stopped. A port that
/// cannot be bound is a usage error.
pub fn serve(state: AppState, host: &str, port: u16) -> CliResult<()> {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::internal(format!("runtime: {e}")))?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| CliError::usage(format!("cannot listen on {host}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| CliError::internal(e.to_string()))?;
        eprintln!("serving {} model(s) on http://{addr}", state.models.len());
        axum::serve(listener, router(state))
            .await
            .map_err(|e| CliError::internal(format!("server: {e}")))
    })
}
