//! The HTTP routes, exercised in-process against fitted models.

use axum::body::Body;
use axum::http::{Request, StatusCode};
use fcip_cli::api::{self, PredictQuery};
use fcip_cli::server::{router, AppState};
use fcip_core::fixtures::{Fixtures, CBR_QUERY};
use fcip_core::models::{fit_parametric, record_validation, CbrModel, SavedModel, Transformation};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use std::path::PathBuf;
use tower::ServiceExt;

fn models() -> Vec<(PathBuf, SavedModel)> {
    let fx = Fixtures::bundled().unwrap();
    let mut reg: SavedModel = fit_parametric(&fx.training, Transformation::Sqrt).unwrap().into();
    record_validation(reg.model_mut(), &fx.validation).unwrap();
    let cbr: SavedModel = CbrModel::fit(fx.training.clone(), [0.2, 0.2, 0.2, 0.4]).unwrap().into();
    vec![("reg.json".into(), reg), ("cbr.json".into(), cbr)]
}

fn state() -> AppState {
    AppState::from_models(models()).unwrap()
}

async fn call(state: AppState, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
        .unwrap();
    let resp = router(state).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn case_study_query() -> PredictQuery {
    PredictQuery {
        area_ha: 19.6,
        length_m: 453.0,
        valves: 6.0,
        year: 2020.0,
        inflation_rate: Some(10.3),
        toggles: vec![],
        scenarios: None,
        seed: None,
    }
}

#[tokio::test]
async fn predict_body_matches_the_shared_renderer() {
    let st = state();
    let body = json!({"model": "regression", "area_ha": 19.6, "length_m": 453, "valves": 6, "year": 2020, "inflation_rate": 10.3});
    let (status, text) = call(st.clone(), "POST", "/predict", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    let expected = api::predict(st.find("regression").unwrap().model(), &case_study_query()).unwrap().render();
    assert_eq!(text, expected);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_object().unwrap().len(), 2);
}

#[tokio::test]
async fn predict_with_scenarios_is_seed_stable() {
    let body = json!({
        "model": "regression", "area_ha": 19.6, "length_m": 453, "valves": 6, "year": 2020,
        "inflation_rate": 10.3, "toggles": ["length"], "scenarios": 30, "seed": 7
    });
    let (s1, a) = call(state(), "POST", "/predict", Some(body.clone())).await;
    let (s2, b) = call(state(), "POST", "/predict", Some(body)).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["scenarios"]["values"].as_array().unwrap().len(), 30);

    let mut q = case_study_query();
    q.toggles = vec![api::parse_toggle("length").unwrap()];
    q.scenarios = Some(30);
    q.seed = Some(7);
    let st = state();
    assert_eq!(a, api::predict(st.find("regression").unwrap().model(), &q).unwrap().render());
}

#[tokio::test]
async fn negative_area_is_a_field_level_400() {
    let body = json!({"model": "regression", "area_ha": -5, "length_m": 453, "valves": 6, "year": 2014});
    let (status, text) = call(state(), "POST", "/predict", Some(body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["field"], "area_ha");
    assert!(v["error"].as_str().unwrap().contains("area_ha"));
}

#[tokio::test]
async fn malformed_bodies_are_rejected() {
    for (body, field) in [
        (json!({"area_ha": 19.6, "length_m": 453, "valves": 6, "year": 2014}), "model"),
        (json!({"model": "regression", "length_m": 453, "valves": 6, "year": 2014}), "area_ha"),
        (json!({"model": "regression", "area_ha": "big", "length_m": 453, "valves": 6, "year": 2014}), "area_ha"),
        (json!({"model": "regression", "area_ha": 19.6, "length_m": 453, "valves": 6, "year": 2020}), "inflation_rate"),
        (json!({"model": "nope", "area_ha": 19.6, "length_m": 453, "valves": 6, "year": 2014}), "model"),
    ] {
        let (status, text) = call(state(), "POST", "/predict", Some(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{text}");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["field"], field, "{text}");
    }
    let (status, _) = call(state(), "POST", "/predict", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn out_of_range_prediction_is_unprocessable() {
    let body = json!({"model": "regression", "area_ha": 0.01, "length_m": 1, "valves": 1, "year": 1990});
    let (status, _) = call(state(), "POST", "/predict", Some(body)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn models_lists_kind_transformation_and_metrics() {
    let (status, text) = call(state(), "GET", "/models", None).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&text).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 2);
    assert_eq!(list[0]["kind"], "regression");
    assert_eq!(list[0]["transformation"], "sqrt");
    assert!(list[0]["metrics"]["mape_valid"].as_f64().unwrap() > 0.0);
    assert_eq!(list[1]["kind"], "cbr");
    assert_eq!(list[1]["transformation"], "none");
}

#[tokio::test]
async fn duplicate_kinds_are_named_by_file() {
    let mut ms = models();
    let extra = ms[0].1.clone();
    ms.push(("reg-b.json".into(), extra));
    let st = AppState::from_models(ms).unwrap();
    let names: Vec<_> = st.models.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(names, ["reg", "cbr", "reg-b"]);
    let body = json!({"model": "regression", "area_ha": 19.6, "length_m": 453, "valves": 6, "year": 2014});
    let (status, text) = call(st.clone(), "POST", "/predict", Some(body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{text}");
    let body = json!({"model": "reg-b", "area_ha": 19.6, "length_m": 453, "valves": 6, "year": 2014});
    assert_eq!(call(st, "POST", "/predict", Some(body)).await.0, StatusCode::OK);
}

#[tokio::test]
async fn retrieve_ranks_the_nearest_cases() {
    let fx = Fixtures::bundled().unwrap();
    let [a, l, v, y] = CBR_QUERY;
    let k = fx.training.len();
    let body = json!({"area_ha": a, "length_m": l, "valves": v, "year": y, "k": k});
    let (status, text) = call(state(), "POST", "/cbr/retrieve", Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{text}");
    let out: Value = serde_json::from_str(&text).unwrap();
    let cases = out["cases"].as_array().unwrap();
    assert_eq!(cases.len(), k);
    let sims: Vec<f64> = cases.iter().map(|c| c["case_similarity"].as_f64().unwrap()).collect();
    assert!(sims.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(out["cost_le"], cases[0]["cost_le"]);
    // The query is itself a stored case; the reference listing ranks the
    // remaining neighbours, each of which must come back with its score.
    assert!(sims[1] < 1.0);
    assert_eq!(sims[0], 1.0);
    for row in &fx.cbr_rows {
        let hit = cases
            .iter()
            .find(|c| {
                let id = c["id"].as_str().unwrap();
                fx.training.cases().iter().any(|t| t.id == id && t.drivers() == row.drivers())
            })
            .unwrap_or_else(|| panic!("case {} not retrieved", row.sn));
        assert!((hit["case_similarity"].as_f64().unwrap() - row.cs).abs() <= 0.01, "case {}", row.sn);
    }
}

#[tokio::test]
async fn retrieve_without_a_case_base_is_not_found() {
    let ms: Vec<_> = models().into_iter().filter(|(p, _)| p.to_str() == Some("reg.json")).collect();
    let body = json!({"area_ha": 24, "length_m": 779, "valves": 4, "year": 2014, "k": 1});
    let (status, _) = call(AppState::from_models(ms).unwrap(), "POST", "/cbr/retrieve", Some(body)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let body = json!({"area_ha": 24, "length_m": 779, "valves": 4, "year": 2014, "k": 0});
    let (status, text) = call(state(), "POST", "/cbr/retrieve", Some(body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(text.contains("\"field\":\"k\""), "{text}");
}
