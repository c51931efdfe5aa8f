//! Reproduction checks against the published reference values, run over
//! [`Fixtures`]. Each criterion collects named checks with pinned
//! tolerances; a criterion passes when all of its gating checks do.

use crate::data::{split, Dataset, Driver};
use crate::error::Result;
use crate::fixtures::{Fixtures, CBR_QUERY, FDM_ALPHA, FDM_EXCLUSIONS};
use crate::fuzzy::{
    candidate_pool, fit_fuzzy, fuzzy_partitions, ga_select_rules, generate_rules_wm, uniform_partition,
    FuzzyConfig, FuzzySet, GaConfig, MembershipFunction, PartitionShape, SubsetEvaluator,
};
use crate::linalg::Matrix;
use crate::mcdm::{
    consistency, fahp_weights, fdm_screen, possibility_table, synthetic_extents, Reciprocity, TriangularFuzzyNumber,
};
use crate::models::{
    attribute_similarity, case_similarity, diagnostics, evaluate, fit_parametric, gradient_check, mlp_train,
    record_validation, sensitivity_scenarios, CbrModel, CostModel, MlpConfig, Transformation,
    DEFAULT_ATTRIBUTE_WEIGHTS,
};
use crate::screening::{
    adequacy_from_correlation, communalities, correlate, correlation_matrix, pca, select_variables, varimax, Action,
    CorrelationMethod, SelectionMethod,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
    /// Informational checks are reported but do not gate the criterion.
    pub gating: bool,
}

impl Check {
    pub fn near(label: impl Into<String>, observed: f64, target: f64, tol: f64) -> Self {
        Check {
            label: label.into(),
            observed: format!("{observed:.4}"),
            expected: format!("{target} ± {tol}"),
            pass: (observed - target).abs() <= tol,
            gating: true,
        }
    }

    pub fn at_most(label: impl Into<String>, observed: f64, limit: f64) -> Self {
        Check {
            label: label.into(),
            observed: format!("{observed:.4}"),
            expected: format!("≤ {limit}"),
            pass: observed <= limit,
            gating: true,
        }
    }

    pub fn below(label: impl Into<String>, observed: f64, limit: f64) -> Self {
        Check {
            label: label.into(),
            observed: format!("{observed:.3e}"),
            expected: format!("< {limit}"),
            pass: observed < limit,
            gating: true,
        }
    }

    pub fn holds(label: impl Into<String>, pass: bool, observed: impl Into<String>, expected: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            observed: observed.into(),
            expected: expected.into(),
            pass,
            gating: true,
        }
    }

    pub fn info(label: impl Into<String>, observed: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            observed: observed.into(),
            expected: String::new(),
            pass: true,
            gating: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Set when the criterion could not be evaluated.
    pub error: Option<String>,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.checks.iter().filter(|c| c.gating).all(|c| c.pass)
    }

    /// Gating checks that failed.
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.gating && !c.pass).collect()
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} criterion {}: {}", self.id, self.title)?;
        if let Some(e) = &self.error {
            write!(f, " [error: {e}]")?;
        }
        for c in &self.checks {
            let mark = match (c.gating, c.pass) {
                (false, _) => "info",
                (true, true) => "ok",
                (true, false) => "MISS",
            };
            write!(f, "\n    {mark:<4} {}: {}", c.label, c.observed)?;
            if !c.expected.is_empty() {
                write!(f, " (expected {})", c.expected)?;
            }
        }
        Ok(())
    }
}

pub const TITLES: [&str; 10] = [
    "sqrt-response regression fit, MAPE and runtime",
    "all five response transformations",
    "sqrt-model diagnostics (Durbin-Watson, Cook's distance, tolerance)",
    "stepwise entry order and cumulative R",
    "fuzzy Delphi defuzzification and alpha screening",
    "fuzzy AHP extents, possibility degrees, weights and consistency",
    "CBR similarity listing and validation MAPE",
    "MLP 4-5-1 training MAPE, gradient check and reproducibility",
    "genetic-fuzzy rule selection and Wang-Mendel rule count",
    "invariant checks for content without published numbers",
];

/// Runs criteria 1 to 10 in order.
pub fn run(fx: &Fixtures) -> Vec<CriterionReport> {
    (1..=10).map(|id| run_one(fx, id)).collect()
}

/// Runs one criterion; ids outside 1..=10 yield an error report.
pub fn run_one(fx: &Fixtures, id: u8) -> CriterionReport {
    let outcome = match id {
        1 => regression_fit(fx),
        2 => transformations(fx),
        3 => regression_diagnostics(fx),
        4 => stepwise(fx),
        5 => delphi(fx),
        6 => fahp(fx),
        7 => cbr(fx),
        8 => mlp(fx),
        9 => genetic_fuzzy(fx),
        10 => invariants(fx),
        _ => Err(crate::Error::invalid(format!("no criterion {id}"))),
    };
    let title = TITLES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown");
    match outcome {
        Ok(checks) => CriterionReport { id, title, checks, error: None },
        Err(e) => CriterionReport {
            id,
            title,
            checks: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// One line per criterion.
pub fn summary_table(reports: &[CriterionReport]) -> String {
    let mut out = String::from("criterion  result  title\n");
    for r in reports {
        let verdict = if r.pass() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{:>9}  {verdict:<6}  {}\n", r.id, r.title));
    }
    let passed = reports.iter().filter(|r| r.pass()).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", reports.len()));
    out
}

fn regression_fit(fx: &Fixtures) -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut model = fit_parametric(&fx.training, Transformation::Sqrt)?;
    let valid = record_validation(&mut model, &fx.validation)?;
    let elapsed = start.elapsed().as_secs_f64();
    let m = &model.metrics;
    Ok(vec![
        Check::near("R²", m.r2.unwrap_or(f64::NAN), 0.863, 0.02),
        Check::near("training MAPE %", m.mape_train.unwrap_or(f64::NAN), 9.13, 1.0),
        Check::info("training MAPE % (actual denominator)", format!("{:.4}", m.mape_train_actual.unwrap_or(f64::NAN))),
        Check::near("validation MAPE %", valid.predicted_base, 7.82, 1.5),
        Check::info("validation MAPE % (actual denominator)", format!("{:.4}", valid.actual_base)),
        Check::below("fit + validation seconds", elapsed, 1.0),
    ])
}

/// Published (R², MAPE) per transformation.
pub const TRANSFORMATION_TARGETS: [(Transformation, f64, f64); 5] = [
    (Transformation::None, 0.857, 9.13),
    (Transformation::Sqrt, 0.863, 9.13),
    (Transformation::Reciprocal, 0.803, 11.20),
    (Transformation::Semilog, 0.857, 9.30),
    (Transformation::Power, 0.814, 11.79),
];

fn transformations(fx: &Fixtures) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (t, r2, mape) in TRANSFORMATION_TARGETS {
        let model = fit_parametric(&fx.training, t)?;
        let m = &model.metrics;
        checks.push(Check::near(format!("{} R²", t.name()), m.r2.unwrap_or(f64::NAN), r2, 0.03));
        checks.push(Check::near(
            format!("{} training MAPE % (actual denominator)", t.name()),
            m.mape_train_actual.unwrap_or(f64::NAN),
            mape,
            1.5,
        ));
        checks.push(Check::info(
            format!("{} training MAPE % (prediction denominator)", t.name()),
            format!("{:.4}", m.mape_train.unwrap_or(f64::NAN)),
        ));
    }
    Ok(checks)
}

pub const TOLERANCE_TARGETS: [f64; 4] = [0.576, 0.567, 0.607, 0.977];

fn regression_diagnostics(fx: &Fixtures) -> Result<Vec<Check>> {
    let model = fit_parametric(&fx.training, Transformation::Sqrt)?;
    let d = diagnostics(&model, &fx.training)?;
    let mut checks = vec![
        Check::near("Durbin-Watson", d.durbin_watson, 2.224, 0.15),
        Check::below("max Cook's distance", d.max_cooks_distance, 1.0),
        Check::near("max Cook's distance", d.max_cooks_distance, 0.249, 0.08),
    ];
    for (driver, (&tol, &target)) in Driver::ALL.iter().zip(d.tolerance.iter().zip(&TOLERANCE_TARGETS)) {
        checks.push(Check::near(format!("tolerance {}", driver.symbol()), tol, target, 0.05));
    }
    Ok(checks)
}

pub const STEPWISE_ORDER: [&str; 4] = ["P3", "P14", "P6", "P1"];
pub const STEPWISE_R: [f64; 4] = [0.85, 0.89, 0.92, 0.93];

fn stepwise(fx: &Fixtures) -> Result<Vec<Check>> {
    let drivers = [Driver::Area, Driver::Length, Driver::Valves, Driver::Year];
    let names: Vec<&str> = drivers.iter().map(|d| d.symbol()).collect();
    let columns: Vec<Vec<f64>> = drivers.iter().map(|&d| fx.training.driver_column(d)).collect();
    let y = fx.training.costs();
    let trace = select_variables(&names, &columns, &y, SelectionMethod::Stepwise, 0.05, 0.10)?;
    let entered: Vec<_> = trace.steps.iter().filter(|s| s.action == Action::Enter).collect();
    let order: Vec<&str> = entered.iter().map(|s| s.variable.as_str()).collect();
    let removals = trace.steps.len() - entered.len();
    let mut checks = vec![
        Check::holds("entry order", order == STEPWISE_ORDER, order.join(", "), STEPWISE_ORDER.join(", ")),
        Check::holds("removals", removals == 0, removals.to_string(), "0"),
    ];
    for (i, &target) in STEPWISE_R.iter().enumerate() {
        let r = entered.get(i).map_or(f64::NAN, |s| s.r);
        checks.push(Check::near(format!("cumulative R after step {}", i + 1), r, target, 0.02));
    }
    let r3 = correlate(&fx.training.driver_column(Driver::Length), &y, CorrelationMethod::Pearson)?;
    checks.push(Check::near("r(cost, P3)", r3, 0.85, 0.02));
    Ok(checks)
}

fn delphi(fx: &Fixtures) -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    let mut worst_id = String::new();
    let mut crisp = Vec::with_capacity(fx.fdm_rows.len());
    for row in &fx.fdm_rows {
        let s = TriangularFuzzyNumber::new(row.l, row.m, row.u)?.centroid();
        let err = (s - row.crisp).abs();
        if err > worst {
            worst = err;
            worst_id.clone_from(&row.id);
        }
        crisp.push((row.id.clone(), s));
    }
    let screened = fdm_screen(&crisp, FDM_ALPHA).with_exclusions(&FDM_EXCLUSIONS);
    let mismatched: Vec<&str> = screened
        .entries
        .iter()
        .zip(&fx.fdm_rows)
        .filter(|(e, r)| e.selected != r.selected())
        .map(|(e, _)| e.id.as_str())
        .collect();
    let excluded: Vec<&str> = screened.entries.iter().filter(|e| e.excluded).map(|e| e.id.as_str()).collect();
    Ok(vec![
        Check::holds("rows", fx.fdm_rows.len() == 35, fx.fdm_rows.len().to_string(), "35"),
        Check::at_most(format!("max |centroid − printed| (worst {worst_id})"), worst, 0.01),
        Check::holds(
            "select/delete mismatches at alpha 0.6",
            mismatched.is_empty(),
            if mismatched.is_empty() { "none".to_string() } else { mismatched.join(", ") },
            "none",
        ),
        Check::holds("excluded by policy", excluded == FDM_EXCLUSIONS, excluded.join(", "), FDM_EXCLUSIONS.join(", ")),
        Check::info("retained", screened.retained().join(", ")),
    ])
}

pub const EXTENT_TARGETS: [[f64; 3]; 3] = [[0.29, 0.69, 1.46], [0.10, 0.19, 0.53], [0.06, 0.11, 0.22]];
pub const RAW_WEIGHT_TARGETS: [f64; 3] = [1.00, 0.33, 0.00];
pub const WEIGHT_TARGETS: [f64; 3] = [0.75, 0.25, 0.00];

fn fahp(fx: &Fixtures) -> Result<Vec<Check>> {
    let m = &fx.criteria_matrix;
    let extents = synthetic_extents(m)?;
    let mut checks = Vec::new();
    for (e, target) in extents.iter().zip(EXTENT_TARGETS) {
        for (part, (v, t)) in ["l", "m", "u"].iter().zip(e.value.to_array().into_iter().zip(target)) {
            checks.push(Check::near(format!("extent {} {part}", e.criterion), v, t, 0.02));
        }
    }
    let w = fahp_weights(&extents)?;
    for (i, label) in w.labels.iter().enumerate() {
        checks.push(Check::near(format!("raw weight {label}"), w.raw[i], RAW_WEIGHT_TARGETS[i], 0.01));
        checks.push(Check::near(format!("weight {label}"), w.normalized[i], WEIGHT_TARGETS[i], 0.01));
    }
    for (b, a, v) in possibility_table(&extents) {
        checks.push(Check::info(format!("V(S{b} ≥ S{a})"), format!("{v:.4}")));
    }
    let repaired = consistency(m, Reciprocity::Repair)?;
    let as_is = consistency(m, Reciprocity::AsIs)?;
    checks.push(Check::at_most("consistency ratio", repaired.cr, 0.1));
    checks.push(Check::info("consistency ratio without reciprocity repair", format!("{:.4}", as_is.cr)));
    Ok(checks)
}

fn cbr(fx: &Fixtures) -> Result<Vec<Check>> {
    let weights = DEFAULT_ATTRIBUTE_WEIGHTS;
    let mut worst_as = 0.0f64;
    let mut worst_cs = 0.0f64;
    for row in &fx.cbr_rows {
        let drivers = row.drivers();
        let sims = (0..4)
            .map(|i| attribute_similarity(CBR_QUERY[i], drivers[i]))
            .collect::<Result<Vec<f64>>>()?;
        for (s, printed) in sims.iter().zip(row.similarities()) {
            worst_as = worst_as.max((s - printed).abs());
        }
        let cs = case_similarity(&sims, &weights)?;
        worst_cs = worst_cs.max((cs - row.cs).abs());
    }
    let model = CbrModel::fit(fx.training.clone(), weights)?;
    let valid = evaluate(&model, &fx.validation)?;
    let again = evaluate(&CbrModel::fit(fx.training.clone(), weights)?, &fx.validation)?;
    let loo = model.leave_one_out()?;
    Ok(vec![
        Check::holds("listing rows", fx.cbr_rows.len() == 18, fx.cbr_rows.len().to_string(), "18"),
        Check::at_most("max |attribute similarity − printed|", worst_as, 0.005),
        Check::at_most("max |case similarity − printed|", worst_cs, 0.005),
        Check::near("validation MAPE % (training case base)", valid.predicted_base, 17.3, 3.0),
        Check::info("validation MAPE % (actual denominator)", format!("{:.4}", valid.actual_base)),
        Check::info("leave-one-out MAPE % over training", format!("{:.4}", loo.predicted_base)),
        Check::holds(
            "deterministic",
            valid == again,
            format!("{:.6} / {:.6}", valid.predicted_base, again.predicted_base),
            "identical",
        ),
    ])
}

fn mlp(fx: &Fixtures) -> Result<Vec<Check>> {
    let cfg = MlpConfig::default();
    let model = mlp_train(&fx.training, &cfg)?;
    let twin = mlp_train(&fx.training, &cfg)?;
    let bits = |m: &crate::models::MlpModel| m.weights.to_vec().iter().map(|w| w.to_bits()).collect::<Vec<_>>();
    let grad = gradient_check(&model, &fx.training)?;
    let valid = evaluate(&model, &fx.validation)?;
    Ok(vec![
        Check::at_most("training MAPE %", model.metrics.mape_train.unwrap_or(f64::NAN), 12.0),
        Check::info("validation MAPE %", format!("{:.4}", valid.predicted_base)),
        Check::below("gradient check max relative error", grad, 1e-4),
        Check::holds("bit-reproducible weights", bits(&model) == bits(&twin), format!("{} epochs", model.epochs), "identical"),
    ])
}

fn genetic_fuzzy(fx: &Fixtures) -> Result<Vec<Check>> {
    let cfg = FuzzyConfig::default();
    let model = fit_fuzzy(&fx.training, &cfg)?;
    let valid = evaluate(&model, &fx.validation)?;
    let rules = model.rule_base.len();

    // Small pool: the first ten Wang-Mendel rules, checked against brute force.
    let (inputs, output) = fuzzy_partitions(&fx.training, 7, PartitionShape::Gaussian)?;
    let wm = generate_rules_wm(&fx.training, &inputs, &output)?;
    let pool = wm.with_rules(wm.rules().iter().take(10).cloned().collect())?;
    let exhaustive = exhaustive_best(&pool, &fx.training)?;
    let ga = ga_select_rules(&pool, &fx.training, &GaConfig::default())?;

    let (first80, _) = split(&fx.training, 80)?;
    let (inputs6, output6) = fuzzy_partitions(&first80, 6, PartitionShape::Gaussian)?;
    let wm6 = generate_rules_wm(&first80, &inputs6, &output6)?;
    let (tri_in, tri_out) = fuzzy_partitions(&first80, 6, PartitionShape::Triangular)?;
    let wm6_tri = generate_rules_wm(&first80, &tri_in, &tri_out)?;
    let full_pool = candidate_pool(&fx.training, &inputs, &output, cfg.activation)?;

    Ok(vec![
        Check::at_most("GA rules (7 labels)", rules as f64, 100.0),
        Check::at_most("GA validation MAPE %", valid.predicted_base, 20.0),
        Check::info("GA training MAPE %", format!("{:.4}", model.metrics.mape_train.unwrap_or(f64::NAN))),
        Check::info("candidate pool size", full_pool.len().to_string()),
        Check::holds(
            "GA fitness on 10-rule pool equals exhaustive optimum",
            ga.fitness == exhaustive,
            format!("{:.12}", ga.fitness),
            format!("{exhaustive:.12}"),
        ),
        Check::near("WM rules (6 labels, first 80 cases)", wm6.len() as f64, 63.0, 10.0),
        Check::info("WM rules with triangular labels", wm6_tri.len().to_string()),
    ])
}

/// Best fitness over every non-empty subset of a small pool.
pub fn exhaustive_best(pool: &crate::fuzzy::RuleBase<f64>, data: &Dataset) -> Result<f64> {
    let n = pool.len();
    if n > 20 {
        return Err(crate::Error::invalid("exhaustive search is limited to 20 rules"));
    }
    let eval = SubsetEvaluator::new(pool, data)?;
    let mut best = 0.0f64;
    for bits in 1u32..(1 << n) {
        let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        best = best.max(eval.fitness(&mask));
    }
    Ok(best)
}

fn invariants(fx: &Fixtures) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checks = Vec::new();

    // Factor analysis on random correlated data.
    let (mut eig_err, mut comm_err) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let p = rng.gen_range(3..7);
        let n = 40;
        let latent: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cols: Vec<Vec<f64>> = (0..p)
            .map(|_| {
                let w = rng.gen_range(0.0..1.0);
                latent.iter().map(|l| w * l + rng.gen_range(-1.0..1.0)).collect()
            })
            .collect();
        let names: Vec<String> = (0..p).map(|i| format!("x{i}")).collect();
        let r = correlation_matrix(&names, &cols, CorrelationMethod::Pearson)?;
        let sol = pca(&r.values)?;
        eig_err = eig_err.max((sol.eigenvalues.iter().sum::<f64>() - p as f64).abs());
        let k = 2.min(p);
        let kept = sol.truncate(k);
        let rotated = varimax(&kept.loadings)?;
        for (a, b) in communalities(&rotated).iter().zip(&kept.communalities) {
            comm_err = comm_err.max((a - b).abs());
        }
    }
    checks.push(Check::at_most("|Σ eigenvalues − p|", eig_err, 1e-9));
    checks.push(Check::at_most("varimax communality drift", comm_err, 1e-9));
    let rho = 0.37;
    let two = Matrix::from_rows(&[vec![1.0, rho], vec![rho, 1.0]]).expect("square");
    let kmo2 = adequacy_from_correlation(&["a".to_string(), "b".to_string()], &two, 50)?.kmo;
    checks.push(Check::holds("2-variable KMO", kmo2 == 0.5, format!("{kmo2}"), "0.5 exactly"));
    let names3: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let bart: f64 = adequacy_from_correlation(&names3, &Matrix::identity(3), 50)?.bartlett.statistic;
    checks.push(Check::at_most("Bartlett statistic on identity", bart.abs(), 0.0));

    // Fuzzy algebra.
    let (mut unity_err, mut invol_err, mut cut_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let lo = rng.gen_range(-100.0..100.0);
        let hi = lo + rng.gen_range(1.0..100.0);
        let labels = rng.gen_range(2..10);
        let part = uniform_partition("x", (lo, hi), labels)?;
        for _ in 0..20 {
            let x = rng.gen_range(lo..=hi);
            unity_err = unity_err.max((part.memberships(x).iter().sum::<f64>() - 1.0).abs());
        }
        let a = rng.gen_range(lo..hi);
        let c = rng.gen_range(a..=hi) + 1e-3;
        let b = rng.gen_range(a..c);
        let mf = MembershipFunction::triangular(a, b, c)?;
        let set = FuzzySet::from_mf(&mf, (lo, hi + 1.0), 501)?;
        for (g, h) in set.complement().complement().grades().iter().zip(set.grades()) {
            invol_err = invol_err.max((g - h).abs());
        }
        let (l1, u1) = mf.alpha_cut(1.0)?;
        let (l0, u0) = mf.alpha_cut(1e-12)?;
        cut_err = cut_err.max((l1 - b).abs()).max((u1 - b).abs());
        cut_err = cut_err.max((l0 - a).abs() / (c - a)).max((u0 - c).abs() / (c - a));
    }
    checks.push(Check::at_most("partition of unity error", unity_err, 1e-12));
    checks.push(Check::at_most("complement involution error", invol_err, 1e-15));
    checks.push(Check::at_most("alpha-cut limit error", cut_err, 1e-9));

    // Sensitivity scenarios on the sqrt regression.
    let model = fit_parametric(&fx.training, Transformation::Sqrt)?;
    let bounds = fx.training.driver_bounds();
    let base = fx.training.cases()[0].drivers();
    let none = sensitivity_scenarios(&model, base, &[], 30, 0.25, bounds, 5)?;
    checks.push(Check::holds("no-toggle sd", none.sd == 0.0, format!("{}", none.sd), "0"));
    let mut contained = true;
    let mut repeatable = true;
    for seed in 0..10u64 {
        let toggled = [Driver::Length, Driver::Year];
        let s = sensitivity_scenarios(&model, base, &toggled, 30, 0.25, bounds, seed)?;
        let t = sensitivity_scenarios(&model, base, &toggled, 30, 0.25, bounds, seed)?;
        repeatable &= s == t;
        for x in &s.drivers {
            for d in Driver::ALL {
                let i = d.index();
                let (lo, hi) = if toggled.contains(&d) {
                    let band = (base[i] * 0.75, base[i] * 1.25);
                    (band.0.max(bounds[i].0), band.1.min(bounds[i].1))
                } else {
                    (base[i], base[i])
                };
                // Year is rounded after clamping.
                let slack = if d == Driver::Year { 0.5 } else { 0.0 };
                contained &= x[i] >= lo - slack && x[i] <= hi + slack;
                contained &= x[i] >= bounds[i].0 && x[i] <= bounds[i].1 || !toggled.contains(&d);
            }
        }
    }
    checks.push(Check::holds("scenarios within band and bounds", contained, contained.to_string(), "true"));
    checks.push(Check::holds("seed determinism", repeatable, repeatable.to_string(), "true"));
    let trained = model.predict(base)?;
    checks.push(Check::holds(
        "base prediction unchanged by toggles",
        none.base_prediction == trained,
        format!("{trained:.4}"),
        format!("{:.4}", none.base_prediction),
    ));
    Ok(checks)
}
