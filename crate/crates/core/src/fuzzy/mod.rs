//! Fuzzy sets, Mamdani rule bases, Wang–Mendel learning and GA rule selection.

pub mod learn;
pub mod model;
pub mod partition;
pub mod rules;
pub mod set;

pub use learn::{
    candidate_pool, fitness, fitness_value, ga_select_rules, generate_rules_wm, rule_base_mape, GaConfig, GaOutcome,
    SubsetEvaluator, NON_FIRING_PENALTY,
};
pub use model::{fit_fuzzy, fuzzy_partitions, FuzzyConfig, FuzzyCostModel, RuleLearning, INPUT_NAMES, OUTPUT_NAME};
pub use partition::{gaussian_partition, partition, uniform_partition, Partition, PartitionShape, Term};
pub use rules::{defuzzify, evaluate, infer, infer_at, weighted_average, Defuzzifier, FuzzyRule, Inference, RuleBase};
pub use set::{Combine, FuzzySet, LevelSets, MembershipFunction, DEFAULT_RESOLUTION};
