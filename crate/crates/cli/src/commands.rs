//! Subcommand implementations. Each returns the text for stdout together
//! with the run manifest; files are written here, stdout by the caller.

use crate::api::{self, parse_toggle, PredictQuery};
use crate::args::{
    BenchArgs, CbrArgs, FahpArgs, FdmArgs, FitCommand, FuzzyArgs, HybridArgs, MlpArgs, PredictArgs,
    RegressionArgs, ScreenCommand, SelectArgs,
};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use fcip_core::bench;
use fcip_core::data::{parse_dataset, parse_extended, Dataset, ExtendedDataset, Role};
use fcip_core::fixtures::{load_surveys, parse_opinions, Fixtures};
use fcip_core::fuzzy::{fit_fuzzy, FuzzyConfig, GaConfig};
use fcip_core::mcdm::{
    consistency, fahp_aggregate, fahp_weights, fdm_aggregate_scores, fdm_screen, likert_table, mean_score,
    pairwise_matrices, possibility_table, standard_error, synthetic_extents, FuzzyLikertScale, Reciprocity,
    SurveyResponse, TriangularFuzzyNumber,
};
use fcip_core::models::{
    diagnostics, fit_parametric, mlp_train, record_validation, CbrModel, MlpConfig, SavedModel, Transformation,
};
use fcip_core::screening::{adequacy, hybrid_select, select_variables, HybridMode, SelectionConfig};
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Environment variable naming a data directory that replaces the bundled one.
pub const DATA_ENV: &str = "FCIP_DATA";

/// Where default inputs come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataRoot {
    Dir(PathBuf),
    /// The copy compiled into the binary.
    Embedded,
}

impl DataRoot {
    /// `FCIP_DATA` if set, else the source tree's `data/` if present, else
    /// the embedded copy.
    pub fn resolve() -> Self {
        if let Some(dir) = std::env::var_os(DATA_ENV) {
            return DataRoot::Dir(dir.into());
        }
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
        if dir.is_dir() {
            DataRoot::Dir(dir)
        } else {
            DataRoot::Embedded
        }
    }

    fn label(&self, name: &str) -> String {
        match self {
            DataRoot::Dir(d) => d.join(name).display().to_string(),
            DataRoot::Embedded => format!("bundled:{name}"),
        }
    }

    fn fixtures(&self) -> CliResult<Fixtures> {
        Ok(match self {
            DataRoot::Dir(d) => Fixtures::load(d)?,
            DataRoot::Embedded => Fixtures::bundled()?,
        })
    }
}

/// Result of a command: text for stdout and the manifest of the run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub manifest: RunManifest,
    /// Set when the command ran but its verdict is negative.
    pub failure: Option<CliError>,
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::internal(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn load_cases(path: &Path, role: Role) -> CliResult<Dataset> {
    parse_dataset(&read_text(path)?, role).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn training(root: &DataRoot, explicit: Option<&Path>) -> CliResult<(Dataset, String)> {
    match (explicit, root) {
        (Some(p), _) => Ok((load_cases(p, Role::Training)?, p.display().to_string())),
        (None, DataRoot::Dir(d)) => Ok((load_cases(&d.join("training.csv"), Role::Training)?, root.label("training.csv"))),
        (None, DataRoot::Embedded) => Ok((Fixtures::bundled()?.training, root.label("training.csv"))),
    }
}

fn validation(root: &DataRoot, explicit: Option<&Path>) -> CliResult<Option<(Dataset, String)>> {
    match (explicit, root) {
        (Some(p), _) => Ok(Some((load_cases(p, Role::Validation)?, p.display().to_string()))),
        (None, DataRoot::Dir(d)) => {
            let p = d.join("validation.csv");
            if p.is_file() {
                Ok(Some((load_cases(&p, Role::Validation)?, root.label("validation.csv"))))
            } else {
                Ok(None)
            }
        }
        (None, DataRoot::Embedded) => Ok(Some((Fixtures::bundled()?.validation, root.label("validation.csv")))),
    }
}

fn surveys(root: &DataRoot, explicit: Option<&Path>) -> CliResult<(Vec<SurveyResponse>, String)> {
    let from_dir = |d: &Path| load_surveys(d).map_err(|e| CliError::usage(e.to_string()));
    match (explicit, root) {
        (Some(d), _) => Ok((from_dir(d)?, d.display().to_string())),
        (None, DataRoot::Dir(d)) => Ok((from_dir(&d.join("surveys"))?, root.label("surveys"))),
        (None, DataRoot::Embedded) => Ok((Fixtures::bundled()?.surveys, root.label("surveys"))),
    }
}

/// Writes `<out>/<stem>.json` and `<out>/<stem>.txt` when an output
/// directory was given.
fn write_report(out: Option<&Path>, stem: &str, json: &str, text: &str) -> CliResult<()> {
    if let Some(dir) = out {
        write_text(&dir.join(format!("{stem}.json")), json)?;
        write_text(&dir.join(format!("{stem}.txt")), text)?;
    }
    Ok(())
}

// ---- screen -----------------------------------------------------------

pub fn screen(root: &DataRoot, cmd: &ScreenCommand) -> CliResult<Outcome> {
    match cmd {
        ScreenCommand::Fdm(a) => screen_fdm(root, a),
        ScreenCommand::Fahp(a) => screen_fahp(root, a),
        ScreenCommand::Stepwise(a) => screen_stepwise(root, a),
        ScreenCommand::Hybrid(a) => screen_hybrid(root, a),
    }
}

#[derive(Debug, Serialize)]
struct FdmRecord {
    id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    responses: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    standard_error: Option<f64>,
    l: f64,
    m: f64,
    u: f64,
    crisp: f64,
    selected: bool,
    excluded: bool,
}

/// Aggregated opinions either from the Likert surveys or from a table.
fn fdm_opinions(root: &DataRoot, a: &FdmArgs) -> CliResult<(Vec<FdmRecord>, String)> {
    let record = |id: String, w: TriangularFuzzyNumber<f64>| FdmRecord {
        id,
        responses: None,
        mean: None,
        standard_error: None,
        l: w.l(),
        m: w.m(),
        u: w.u(),
        crisp: w.centroid(),
        selected: false,
        excluded: false,
    };
    if let Some(path) = &a.table {
        let rows = parse_opinions(&read_text(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let w = TriangularFuzzyNumber::new(r.l, r.m, r.u)
                .map_err(|e| CliError::usage(format!("{}: {}: {e}", path.display(), r.id)))?;
            out.push(record(r.id, w));
        }
        return Ok((out, path.display().to_string()));
    }
    let (surveys, input) = surveys(root, a.surveys.as_deref())?;
    let table = likert_table(&surveys)?;
    let scale = FuzzyLikertScale::<f64>::default();
    let mut out = Vec::with_capacity(table.len());
    for r in &table {
        let mut rec = record(r.parameter_id().to_string(), fdm_aggregate_scores(r.scores(), &scale)?);
        rec.responses = Some(r.scores().len());
        rec.mean = Some(mean_score(r));
        rec.standard_error = standard_error(r).ok();
        out.push(rec);
    }
    Ok((out, input))
}

fn screen_fdm(root: &DataRoot, a: &FdmArgs) -> CliResult<Outcome> {
    if !(a.alpha.is_finite() && (0.0..=1.0).contains(&a.alpha)) {
        return Err(CliError::usage(format!("--alpha must lie in [0, 1], got {}", a.alpha)));
    }
    let (mut records, input) = fdm_opinions(root, a)?;
    if records.is_empty() {
        return Err(CliError::usage("no opinions to screen"));
    }
    let crisp: Vec<(String, f64)> = records.iter().map(|r| (r.id.clone(), r.crisp)).collect();
    let screened = fdm_screen(&crisp, a.alpha).with_exclusions(&a.exclude);
    for (r, e) in records.iter_mut().zip(&screened.entries) {
        r.selected = e.selected;
        r.excluded = e.excluded;
    }
    let report = json!({
        "alpha": a.alpha,
        "exclusions": a.exclude,
        "retained": screened.retained(),
        "entries": records,
    });
    let json = to_json(&report);
    let fmt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |x| format!("{x:.p$}"));
    let mut text = format!("{:<6} {:>5} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}  result\n", "id", "n", "mean", "se", "L", "M", "U", "S");
    for r in &records {
        let result = match (r.selected, r.excluded) {
            (true, _) => "select",
            (false, true) => "delete (excluded)",
            (false, false) => "delete",
        };
        let n = r.responses.map_or("-".to_string(), |n| n.to_string());
        let _ = writeln!(
            text,
            "{:<6} {n:>5} {:>6} {:>6} {:>6.2} {:>6.2} {:>6.2} {:>6.2}  {result}",
            r.id,
            fmt(r.mean, 2),
            fmt(r.standard_error, 3),
            r.l,
            r.m,
            r.u,
            r.crisp
        );
    }
    let _ = writeln!(text, "retained at alpha {}: {}", a.alpha, screened.retained().join(", "));
    write_report(a.out.as_deref(), "fdm", &json, &text)?;
    let manifest = RunManifest::new("screen fdm")
        .input(input)
        .set("alpha", a.alpha)
        .set("exclude", a.exclude.join(","))
        .digest_of(json.as_bytes());
    Ok(Outcome { stdout: text, manifest, failure: None })
}

fn screen_fahp(root: &DataRoot, a: &FahpArgs) -> CliResult<Outcome> {
    let (surveys, input) = surveys(root, a.surveys.as_deref())?;
    let matrices = pairwise_matrices(&surveys);
    if matrices.is_empty() {
        return Err(CliError::usage("no survey document carries a pairwise matrix"));
    }
    let aggregate = fahp_aggregate(&matrices)?;
    let extents = synthetic_extents(&aggregate)?;
    let weights = fahp_weights(&extents)?;
    let mode: Reciprocity = a.reciprocity.into();
    let cr = consistency(&aggregate, mode)?;
    let possibility: Vec<_> = possibility_table(&extents)
        .into_iter()
        .map(|(b, a, v)| json!({"from": b, "over": a, "degree": v}))
        .collect();
    let weights_json = to_json(&weights);
    let report = json!({
        "experts": matrices.len(),
        "aggregate": aggregate,
        "extents": extents,
        "possibility": possibility,
        "weights": weights,
        "consistency": cr,
        "reciprocity": mode,
    });
    let json = to_json(&report);
    let mut text = format!("{} expert matrices\n{:<10} {:>7} {:>7} {:>7} {:>8} {:>8}\n", matrices.len(), "criterion", "l", "m", "u", "raw", "weight");
    for (i, e) in extents.iter().enumerate() {
        let [l, m, u] = e.value.to_array();
        let _ = writeln!(
            text,
            "{:<10} {l:>7.3} {m:>7.3} {u:>7.3} {:>8.3} {:>8.3}",
            e.criterion, weights.raw[i], weights.normalized[i]
        );
    }
    let _ = writeln!(text, "lambda_max {:.4}  CI {:.4}  RI {:.2}  CR {:.4}", cr.lambda_max, cr.ci, cr.ri, cr.cr);
    write_report(a.out.as_deref(), "fahp", &json, &text)?;
    if let Some(dir) = &a.out {
        write_text(&dir.join("weights.json"), &weights_json)?;
    }
    let manifest = RunManifest::new("screen fahp")
        .input(input)
        .set("reciprocity", format!("{:?}", a.reciprocity).to_lowercase())
        .digest_of(weights_json.as_bytes());
    Ok(Outcome { stdout: text, manifest, failure: None })
}

/// Named complete columns of a screening CSV, key-driver or extended.
fn screening_columns(root: &DataRoot, explicit: Option<&Path>) -> CliResult<(Vec<(String, Vec<f64>)>, Vec<f64>, String)> {
    let (ext, input) = match explicit {
        Some(p) => {
            let text = read_text(p)?;
            let header = text.lines().next().unwrap_or_default().to_ascii_lowercase();
            let ext = if header.contains("area_ha") {
                ExtendedDataset::from_key_drivers(&load_cases(p, Role::Training)?)
            } else {
                parse_extended(&text).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?
            };
            (ext, p.display().to_string())
        }
        None => {
            let (ds, label) = training(root, None)?;
            (ExtendedDataset::from_key_drivers(&ds), label)
        }
    };
    let columns = ext.complete_variables();
    if columns.is_empty() {
        return Err(CliError::usage("no variable has a value in every row"));
    }
    Ok((columns, ext.costs(), input))
}

fn trace_table(trace: &fcip_core::screening::SelectionTrace<f64>) -> String {
    let mut text = format!("{:<5} {:<7} {:<9} {:>9} {:>7} {:>7} {:>7}\n", "step", "action", "variable", "p", "R", "R2", "adj R2");
    for (i, s) in trace.steps.iter().enumerate() {
        let _ = writeln!(
            text,
            "{:<5} {:<7} {:<9} {:>9.2e} {:>7.3} {:>7.3} {:>7.3}",
            i + 1,
            format!("{:?}", s.action).to_lowercase(),
            s.variable,
            s.p_value,
            s.r,
            s.r2,
            s.adj_r2
        );
    }
    let _ = writeln!(text, "selected: {}", trace.selected().join(", "));
    text
}

fn screen_stepwise(root: &DataRoot, a: &SelectArgs) -> CliResult<Outcome> {
    let (columns, y, input) = screening_columns(root, a.data.as_deref())?;
    let names: Vec<&str> = columns.iter().map(|(n, _)| n.as_str()).collect();
    let cols: Vec<Vec<f64>> = columns.iter().map(|(_, c)| c.clone()).collect();
    let trace = select_variables(&names, &cols, &y, a.method.into(), a.p_enter, a.p_remove)?;
    // Adequacy is informative only; a singular set should not sink the trace.
    let adequacy = match adequacy(&names, &cols) {
        Ok(r) => json!(r),
        Err(e) => json!({"error": e.to_string()}),
    };
    let report = json!({
        "trace": trace,
        "selected": trace.selected(),
        "adequacy": adequacy,
    });
    let json = to_json(&report);
    let mut text = trace_table(&trace);
    if let Some(kmo) = adequacy.get("kmo").and_then(|v| v.as_f64()) {
        let _ = writeln!(text, "KMO {kmo:.3}");
    }
    write_report(a.out.as_deref(), "selection", &json, &text)?;
    let manifest = RunManifest::new("screen stepwise")
        .input(input)
        .set("method", format!("{:?}", a.method).to_lowercase())
        .set("p_enter", a.p_enter)
        .set("p_remove", a.p_remove)
        .digest_of(json.as_bytes());
    Ok(Outcome { stdout: text, manifest, failure: None })
}

fn screen_hybrid(root: &DataRoot, a: &HybridArgs) -> CliResult<Outcome> {
    let (columns, y, input) = screening_columns(root, a.data.as_deref())?;
    let names: Vec<&str> = columns.iter().map(|(n, _)| n.as_str()).collect();
    let cols: Vec<Vec<f64>> = columns.iter().map(|(_, c)| c.clone()).collect();
    let mode = HybridMode::from_number(a.mode).ok_or_else(|| CliError::usage("--mode must be 1 or 2"))?;
    let cfg = SelectionConfig { hi: a.hi, lo: a.lo, p_enter: a.p_enter, p_remove: a.p_remove };
    let result = hybrid_select(&names, &cols, &y, mode, &cfg)?;
    let json = to_json(&result);
    let mut text = format!("filter retained: {}\n", result.filter.retained.join(", "));
    text.push_str(&trace_table(&result.trace));
    write_report(a.out.as_deref(), "hybrid", &json, &text)?;
    let manifest = RunManifest::new("screen hybrid")
        .input(input)
        .set("mode", a.mode)
        .set("hi", a.hi)
        .set("lo", a.lo)
        .set("p_enter", a.p_enter)
        .set("p_remove", a.p_remove)
        .digest_of(json.as_bytes());
    Ok(Outcome { stdout: text, manifest, failure: None })
}

// ---- fit --------------------------------------------------------------

pub fn fit(root: &DataRoot, cmd: &FitCommand) -> CliResult<Outcome> {
    let io = match cmd {
        FitCommand::Regression(a) => &a.io,
        FitCommand::Mlp(a) => &a.io,
        FitCommand::Cbr(a) => &a.io,
        FitCommand::Fuzzy(a) => &a.io,
    };
    let (train, train_input) = training(root, io.data.as_deref())?;
    let valid = validation(root, io.validation.as_deref())?;
    let (mut model, mut manifest, extra) = match cmd {
        FitCommand::Regression(a) => fit_regression(&train, a)?,
        FitCommand::Mlp(a) => fit_mlp(&train, a)?,
        FitCommand::Cbr(a) => fit_cbr(&train, a)?,
        FitCommand::Fuzzy(a) => fit_fuzzy_model(&train, a)?,
    };
    manifest = manifest.input(train_input);
    if let Some((v, label)) = &valid {
        record_validation(model.model_mut(), v)?;
        manifest = manifest.input(label.clone());
    }
    let kind = model.model().kind();
    let out = io.out.clone().unwrap_or_else(|| PathBuf::from(format!("{kind}-model.json")));
    let model_json = model.to_json()? + "\n";
    write_text(&out, &model_json)?;
    let m = model.model();
    let mut block = json!({
        "kind": kind,
        "transformation": m.transformation(),
        "model_file": out.display().to_string(),
        "training_cases": train.len(),
        "validation_cases": valid.as_ref().map(|(v, _)| v.len()),
        "metrics": m.metrics(),
    });
    if let (Some(obj), Some(extra)) = (block.as_object_mut(), extra) {
        obj.extend(extra);
    }
    manifest = manifest.set("out", out.display()).digest_of(model_json.as_bytes());
    Ok(Outcome { stdout: to_json(&block), manifest, failure: None })
}

type Fitted = (SavedModel, RunManifest, Option<serde_json::Map<String, serde_json::Value>>);

fn fit_regression(train: &Dataset, a: &RegressionArgs) -> CliResult<Fitted> {
    let t: Transformation = a.transform.into();
    let model = fit_parametric(train, t)?;
    let d = diagnostics(&model, train)?;
    let mut extra = serde_json::Map::new();
    extra.insert(
        "diagnostics".into(),
        json!({
            "durbin_watson": d.durbin_watson,
            "max_cooks_distance": d.max_cooks_distance,
            "vif": d.vif,
            "tolerance": d.tolerance,
        }),
    );
    let manifest = RunManifest::new("fit regression").set("transform", t.name());
    Ok((model.into(), manifest, Some(extra)))
}

fn fit_mlp(train: &Dataset, a: &MlpArgs) -> CliResult<Fitted> {
    let cfg = MlpConfig {
        hidden: a.hidden,
        transformation: a.transform.into(),
        activation: a.activation.into(),
        optimizer: a.optimizer.into(),
        seed: a.seed,
        max_epochs: a.epochs,
        ..MlpConfig::default()
    };
    let model = mlp_train(train, &cfg)?;
    let mut extra = serde_json::Map::new();
    extra.insert("epochs".into(), json!(model.epochs));
    extra.insert("final_loss".into(), json!(model.final_loss));
    let manifest = RunManifest::new("fit mlp")
        .seed(a.seed)
        .set("hidden", a.hidden)
        .set("epochs", a.epochs)
        .set("transform", cfg.transformation.name())
        .set("optimizer", format!("{:?}", a.optimizer).to_lowercase())
        .set("activation", format!("{:?}", a.activation).to_lowercase());
    Ok((model.into(), manifest, Some(extra)))
}

fn fit_cbr(train: &Dataset, a: &CbrArgs) -> CliResult<Fitted> {
    let weights: [f64; 4] = a
        .weights
        .as_slice()
        .try_into()
        .map_err(|_| CliError::usage("--weights takes exactly four values"))?;
    let model = CbrModel::fit(train.clone(), weights)?;
    let manifest = RunManifest::new("fit cbr").set(
        "weights",
        weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","),
    );
    Ok((model.into(), manifest, None))
}

fn fit_fuzzy_model(train: &Dataset, a: &FuzzyArgs) -> CliResult<Fitted> {
    if a.labels < 2 {
        return Err(CliError::usage("--labels must be at least 2"));
    }
    let cfg = FuzzyConfig {
        labels: a.labels,
        shape: a.shape.into(),
        learning: a.learning.into(),
        defuzzifier: a.defuzzifier.into(),
        ga: GaConfig {
            population: a.population,
            generations: a.generations,
            seed: a.seed,
            ..GaConfig::default()
        },
        ..FuzzyConfig::default()
    };
    let model = fit_fuzzy(train, &cfg)?;
    let mut extra = serde_json::Map::new();
    extra.insert("rules".into(), json!(model.rule_base.len()));
    extra.insert("fitness".into(), json!(model.fitness));
    let manifest = RunManifest::new("fit fuzzy")
        .seed(a.seed)
        .set("labels", a.labels)
        .set("shape", format!("{:?}", a.shape).to_lowercase())
        .set("learning", format!("{:?}", a.learning).to_lowercase())
        .set("defuzzifier", format!("{:?}", a.defuzzifier).to_lowercase())
        .set("population", a.population)
        .set("generations", a.generations);
    Ok((model.into(), manifest, Some(extra)))
}

// ---- predict ----------------------------------------------------------

pub fn load_model(path: &Path) -> CliResult<SavedModel> {
    SavedModel::from_json(&read_text(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn predict_query(a: &PredictArgs) -> CliResult<PredictQuery> {
    let toggles = a.toggle.iter().map(|t| parse_toggle(t)).collect::<Result<Vec<_>, _>>()?;
    Ok(PredictQuery {
        area_ha: a.area_ha,
        length_m: a.length_m,
        valves: a.valves,
        year: a.year,
        inflation_rate: a.inflation_rate,
        toggles,
        scenarios: a.scenarios,
        seed: a.seed,
    })
}

pub fn predict(a: &PredictArgs) -> CliResult<Outcome> {
    let model = load_model(&a.model)?;
    let q = predict_query(a)?;
    let body = api::predict(model.model(), &q)?.render();
    let mut manifest = RunManifest::new("predict")
        .input(a.model.display().to_string())
        .seed(q.seed.unwrap_or(0))
        .set("area_ha", q.area_ha)
        .set("length_m", q.length_m)
        .set("valves", q.valves)
        .set("year", q.year);
    if let Some(r) = q.inflation_rate {
        manifest = manifest.set("inflation_rate", r);
    }
    if !a.toggle.is_empty() {
        manifest = manifest.set("toggle", a.toggle.join(","));
    }
    if let Some(n) = q.scenarios {
        manifest = manifest.set("scenarios", n);
    }
    let manifest = manifest.digest_of(body.as_bytes());
    Ok(Outcome { stdout: body + "\n", manifest, failure: None })
}

// ---- bench ------------------------------------------------------------

pub fn bench(root: &DataRoot, a: &BenchArgs) -> CliResult<Outcome> {
    let (fx, input) = match &a.data {
        Some(d) => (Fixtures::load(d)?, d.display().to_string()),
        None => (root.fixtures()?, root.label("")),
    };
    let reports = match a.criterion {
        Some(id) => vec![bench::run_one(&fx, id)],
        None => bench::run(&fx),
    };
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{r}");
    }
    text.push('\n');
    text.push_str(&bench::summary_table(&reports));
    let failed: Vec<String> = reports.iter().filter(|r| !r.pass()).map(|r| r.id.to_string()).collect();
    let mut manifest = RunManifest::new("bench").input(input).digest_of(to_json(&reports).as_bytes());
    if let Some(id) = a.criterion {
        manifest = manifest.set("criterion", id);
    }
    let failure = (!failed.is_empty()).then(|| CliError::domain(format!("criteria not met: {}", failed.join(", "))));
    Ok(Outcome { stdout: text, manifest, failure })
}
