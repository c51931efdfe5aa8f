//! Fuzzy cost estimator built from the key-driver dataset.

use super::learn::{candidate_pool, ga_select_rules, generate_rules_wm, rule_base_mape, GaConfig};
use super::partition::{partition, Partition, PartitionShape};
use super::rules::{evaluate, Defuzzifier, RuleBase};
use crate::data::Dataset;
use crate::error::Result;
use crate::models::{validate_drivers, CostModel, Metrics, ModelKind, TrainingDomain, Transformation};
use serde::{Deserialize, Serialize};

pub const INPUT_NAMES: [&str; 4] = ["Area served (P1)", "Total length (P3)", "Irr. valves (P6)", "Year (P14)"];
pub const OUTPUT_NAME: &str = "Total cost (LE/mesqa)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleLearning {
    /// Wang–Mendel rules from the training cases.
    Wm,
    /// GA-selected subset of the activated antecedent grid.
    #[default]
    Ga,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyConfig {
    pub labels: usize,
    pub shape: PartitionShape,
    pub learning: RuleLearning,
    pub defuzzifier: Defuzzifier,
    pub ga: GaConfig,
    /// Membership a case needs on every input to activate a candidate cell.
    pub activation: f64,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        FuzzyConfig {
            labels: 7,
            shape: PartitionShape::Gaussian,
            learning: RuleLearning::Ga,
            defuzzifier: Defuzzifier::Wam,
            ga: GaConfig::default(),
            activation: 1e-3,
        }
    }
}

/// Input partitions over the training driver ranges and an output
/// partition over the training cost range.
pub fn fuzzy_partitions(
    train: &Dataset,
    labels: usize,
    shape: PartitionShape,
) -> Result<(Vec<Partition<f64>>, Partition<f64>)> {
    let inputs = INPUT_NAMES
        .iter()
        .zip(train.driver_bounds())
        .map(|(name, b)| partition(shape, *name, b, labels))
        .collect::<Result<Vec<_>>>()?;
    let costs = train.costs();
    let lo = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let output = partition(shape, OUTPUT_NAME, (lo, hi), labels)?.relabel("c");
    Ok((inputs, output))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyCostModel {
    pub transformation: Transformation,
    pub config: FuzzyConfig,
    pub rule_base: RuleBase<f64>,
    /// GA fitness of the selected base, when GA-trained.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitness: Option<f64>,
    pub metrics: Metrics,
    pub domain: TrainingDomain,
    pub seed: u64,
}

/// Builds partitions, learns rules and records training MAPE and rule count.
pub fn fit_fuzzy(train: &Dataset, cfg: &FuzzyConfig) -> Result<FuzzyCostModel> {
    let (inputs, output) = fuzzy_partitions(train, cfg.labels, cfg.shape)?;
    let (rule_base, fitness) = match cfg.learning {
        RuleLearning::Wm => (generate_rules_wm(train, &inputs, &output)?, None),
        RuleLearning::Ga => {
            let pool = candidate_pool(train, &inputs, &output, cfg.activation)?;
            let out = ga_select_rules(&pool, train, &cfg.ga)?;
            (out.rule_base, Some(out.fitness))
        }
    };
    let mape = rule_base_mape(&rule_base, train, cfg.defuzzifier)?;
    Ok(FuzzyCostModel {
        transformation: Transformation::None,
        config: *cfg,
        metrics: Metrics {
            mape_train: Some(mape),
            rules: Some(rule_base.len()),
            ..Metrics::default()
        },
        rule_base,
        fitness,
        domain: TrainingDomain::of(train),
        seed: cfg.ga.seed,
    })
}

impl CostModel for FuzzyCostModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Fuzzy
    }

    fn transformation(&self) -> Transformation {
        Transformation::None
    }

    fn predict(&self, drivers: [f64; 4]) -> Result<f64> {
        validate_drivers(drivers)?;
        evaluate(&self.rule_base, &drivers, self.config.defuzzifier)
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ProjectCase, Role};

    fn data() -> Dataset {
        let cases = (0..40)
            .map(|i| {
                let t = i as f64;
                let a = 19.0 + (t * 11.0) % 80.0;
                let l = 150.0 + (t * 97.0) % 1600.0;
                let v = 3 + (i * 7 % 20) as u32;
                let y = 2010 + (i % 6) as i32;
                let cost = 2000.0 * a + 150.0 * l + 5000.0 * f64::from(v) + 9000.0 * f64::from(y - 2009);
                ProjectCase::new(format!("F{i}"), a, l, v, y, cost).unwrap()
            })
            .collect();
        Dataset::new(cases, Role::Training).unwrap()
    }

    #[test]
    fn wm_model_predicts_inside_output_range() {
        let ds = data();
        let cfg = FuzzyConfig { learning: RuleLearning::Wm, labels: 5, ..FuzzyConfig::default() };
        let m = fit_fuzzy(&ds, &cfg).unwrap();
        let costs = ds.costs();
        let lo = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for c in ds.cases() {
            let p = m.predict(c.drivers()).unwrap();
            assert!(p >= lo - 1e-6 && p <= hi + 1e-6);
        }
        assert_eq!(m.metrics.rules, Some(m.rule_base.len()));
    }

    #[test]
    fn ga_model_is_deterministic_and_serializable() {
        let ds = data();
        let cfg = FuzzyConfig {
            labels: 4,
            ga: GaConfig { generations: 30, seed: 42, ..GaConfig::default() },
            ..FuzzyConfig::default()
        };
        let a = fit_fuzzy(&ds, &cfg).unwrap();
        let b = fit_fuzzy(&ds, &cfg).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<FuzzyCostModel>(&json).unwrap(), a);
    }

    #[test]
    fn partitions_span_training_ranges() {
        let ds = data();
        let (inputs, output) = fuzzy_partitions(&ds, 7, PartitionShape::Triangular).unwrap();
        assert_eq!(inputs[0].bounds(), ds.driver_bounds()[0]);
        assert_eq!(inputs[1].name(), "Total length (P3)");
        assert_eq!(output.label(0), "c.1");
    }
}
