//! Data-driven rule generation and genetic rule-subset selection.

use super::partition::Partition;
use super::rules::{evaluate, Defuzzifier, FuzzyRule, RuleBase};
use crate::data::Dataset;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Percentage points charged for a case on which no rule fires.
pub const NON_FIRING_PENALTY: f64 = 100.0;

fn check_arity(inputs: &[Partition<f64>]) -> Result<()> {
    if inputs.len() != 4 {
        return Err(Error::DimensionMismatch(format!("{} input partitions for 4 drivers", inputs.len())));
    }
    Ok(())
}

/// Wang–Mendel: one rule per case from its best-matching labels, degree =
/// product of those memberships; on a shared antecedent the higher degree
/// wins, the earlier case on ties. Rules keep first-appearance order.
pub fn generate_rules_wm(train: &Dataset, inputs: &[Partition<f64>], output: &Partition<f64>) -> Result<RuleBase<f64>> {
    check_arity(inputs)?;
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut best: HashMap<Vec<usize>, (usize, f64)> = HashMap::new();
    for case in train.cases() {
        let mut antecedent = Vec::with_capacity(4);
        let mut degree = 1.0;
        for (p, x) in inputs.iter().zip(case.drivers()) {
            let (k, m) = p.best_label(x);
            antecedent.push(k);
            degree *= m;
        }
        let (c, m) = output.best_label(case.cost_le);
        degree *= m;
        match best.get_mut(&antecedent) {
            Some(slot) => {
                if degree > slot.1 {
                    *slot = (c, degree);
                }
            }
            None => {
                order.push(antecedent.clone());
                best.insert(antecedent, (c, degree));
            }
        }
    }
    let rules = order
        .into_iter()
        .map(|a| {
            let consequent = best[&a].0;
            FuzzyRule { antecedent: a, consequent }
        })
        .collect();
    RuleBase::new(inputs.to_vec(), output.clone(), rules)
}

/// Every antecedent cell in which some training case has membership above
/// `threshold` on all inputs, with the consequent of the case that fires the
/// cell most strongly (firing strength times output membership).
pub fn candidate_pool(
    train: &Dataset,
    inputs: &[Partition<f64>],
    output: &Partition<f64>,
    threshold: f64,
) -> Result<RuleBase<f64>> {
    check_arity(inputs)?;
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut best: HashMap<Vec<usize>, (usize, f64)> = HashMap::new();
    for case in train.cases() {
        let grades: Vec<Vec<f64>> = inputs.iter().zip(case.drivers()).map(|(p, x)| p.memberships(x)).collect();
        let active: Vec<Vec<usize>> = grades
            .iter()
            .map(|g| (0..g.len()).filter(|&k| g[k] > threshold).collect())
            .collect();
        let (c, mc) = output.best_label(case.cost_le);
        for cell in cartesian(&active) {
            let s = cell.iter().zip(&grades).fold(1.0f64, |s, (&k, g)| s.min(g[k]));
            let degree = s * mc;
            match best.get_mut(&cell) {
                Some(slot) => {
                    if degree > slot.1 {
                        *slot = (c, degree);
                    }
                }
                None => {
                    order.push(cell.clone());
                    best.insert(cell, (c, degree));
                }
            }
        }
    }
    let rules = order
        .into_iter()
        .map(|a| {
            let consequent = best[&a].0;
            FuzzyRule { antecedent: a, consequent }
        })
        .collect();
    RuleBase::new(inputs.to_vec(), output.clone(), rules)
}

fn cartesian(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    sets.iter().fold(vec![Vec::new()], |acc, set| {
        acc.iter()
            .flat_map(|prefix| {
                set.iter().map(move |&k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect()
    })
}

/// MAPE of a rule base (prediction in the denominator); non-firing cases
/// cost [`NON_FIRING_PENALTY`].
pub fn rule_base_mape(base: &RuleBase<f64>, data: &Dataset, method: Defuzzifier) -> Result<f64> {
    if base.is_empty() {
        return Err(Error::NoRules);
    }
    let mut total = 0.0;
    for case in data.cases() {
        total += match evaluate(base, &case.drivers(), method) {
            Ok(p) => ((case.cost_le - p) / p).abs() * 100.0,
            Err(Error::NoFiring) => NON_FIRING_PENALTY,
            Err(e) => return Err(e),
        };
    }
    Ok(total / data.len() as f64)
}

/// `1 / (MAPE + Nr)`.
pub fn fitness(base: &RuleBase<f64>, data: &Dataset) -> Result<f64> {
    let mape = rule_base_mape(base, data, Defuzzifier::Wam)?;
    Ok(fitness_value(mape, base.len()))
}

pub fn fitness_value(mape: f64, rules: usize) -> f64 {
    1.0 / (mape + rules as f64)
}

/// Fitness of rule subsets of a fixed candidate base under WAM
/// defuzzification, with firing strengths precomputed per case.
pub struct SubsetEvaluator {
    /// `strengths[rule][case]`.
    strengths: Vec<Vec<f64>>,
    peaks: Vec<f64>,
    actual: Vec<f64>,
}

impl SubsetEvaluator {
    pub fn new(candidates: &RuleBase<f64>, data: &Dataset) -> Result<Self> {
        let n = candidates.len();
        let mut strengths = vec![Vec::with_capacity(data.len()); n];
        for case in data.cases() {
            for (col, s) in strengths.iter_mut().zip(candidates.firing_strengths(&case.drivers())?) {
                col.push(s);
            }
        }
        let peaks = candidates.rules().iter().map(|r| candidates.output().peak(r.consequent)).collect();
        Ok(SubsetEvaluator {
            strengths,
            peaks,
            actual: data.costs(),
        })
    }

    pub fn candidates(&self) -> usize {
        self.peaks.len()
    }

    /// MAPE of the rules whose bits are set; `None` when no bit is set.
    pub fn mape(&self, mask: &[bool]) -> Option<f64> {
        let selected: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        if selected.is_empty() {
            return None;
        }
        let mut total = 0.0;
        for (i, &y) in self.actual.iter().enumerate() {
            let (mut num, mut den) = (0.0, 0.0);
            for &r in &selected {
                let s = self.strengths[r][i];
                num += s * self.peaks[r];
                den += s;
            }
            total += if den > 0.0 {
                let p = num / den;
                ((y - p) / p).abs() * 100.0
            } else {
                NON_FIRING_PENALTY
            };
        }
        Some(total / self.actual.len() as f64)
    }

    /// `1 / (MAPE + Nr)`, or 0 for the empty subset.
    pub fn fitness(&self, mask: &[bool]) -> f64 {
        match self.mape(mask) {
            Some(m) => fitness_value(m, mask.iter().filter(|&&b| b).count()),
            None => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover: f64,
    /// Per-bit flip probability; `None` means `1 / chromosome length`.
    pub mutation: Option<f64>,
    pub tournament: usize,
    pub seed: u64,
    /// Probability that a bit is set in the initial population.
    pub init_density: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 60,
            generations: 200,
            crossover: 0.8,
            mutation: None,
            tournament: 2,
            seed: 0,
            init_density: 0.05,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.population < 2 {
            return Err(Error::invalid("GA population must be at least 2"));
        }
        if self.tournament == 0 {
            return Err(Error::invalid("tournament size must be at least 1"));
        }
        if !prob(self.crossover) || !prob(self.init_density) || !self.mutation.map_or(true, prob) {
            return Err(Error::invalid("GA probabilities must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub rule_base: RuleBase<f64>,
    pub chromosome: Vec<bool>,
    pub fitness: f64,
    /// Best fitness in the population, initial population first.
    pub history: Vec<f64>,
}

/// Binary-chromosome GA over the candidate rules: tournament selection,
/// one-point crossover, bit-flip mutation, one elite.
pub fn ga_select_rules(candidates: &RuleBase<f64>, train: &Dataset, cfg: &GaConfig) -> Result<GaOutcome> {
    cfg.validate()?;
    if candidates.is_empty() {
        return Err(Error::NoRules);
    }
    let eval = SubsetEvaluator::new(candidates, train)?;
    let len = eval.candidates();
    let pm = cfg.mutation.unwrap_or(1.0 / len as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop: Vec<Vec<bool>> = (0..cfg.population)
        .map(|_| (0..len).map(|_| rng.gen_bool(cfg.init_density)).collect())
        .collect();
    let mut fit: Vec<f64> = pop.iter().map(|c| eval.fitness(c)).collect();
    let argmax = |f: &[f64]| (0..f.len()).fold(0, |b, i| if f[i] > f[b] { i } else { b });
    let mut history = vec![fit[argmax(&fit)]];

    for _ in 0..cfg.generations {
        let elite = argmax(&fit);
        let mut next = Vec::with_capacity(cfg.population);
        next.push(pop[elite].clone());
        while next.len() < cfg.population {
            let mut a = pop[tournament(&fit, cfg.tournament, &mut rng)].clone();
            let mut b = pop[tournament(&fit, cfg.tournament, &mut rng)].clone();
            if len > 1 && rng.gen_bool(cfg.crossover) {
                let cut = rng.gen_range(1..len);
                for i in cut..len {
                    std::mem::swap(&mut a[i], &mut b[i]);
                }
            }
            for child in [&mut a, &mut b] {
                for bit in child.iter_mut() {
                    if rng.gen_bool(pm) {
                        *bit = !*bit;
                    }
                }
            }
            next.push(a);
            if next.len() < cfg.population {
                next.push(b);
            }
        }
        pop = next;
        fit = pop.iter().map(|c| eval.fitness(c)).collect();
        history.push(fit[argmax(&fit)]);
    }

    let best = argmax(&fit);
    let chromosome = pop[best].clone();
    if !chromosome.iter().any(|&b| b) {
        return Err(Error::EmptySelection);
    }
    let rules = candidates
        .rules()
        .iter()
        .zip(&chromosome)
        .filter(|(_, &keep)| keep)
        .map(|(r, _)| r.clone())
        .collect();
    Ok(GaOutcome {
        rule_base: candidates.with_rules(rules)?,
        chromosome,
        fitness: fit[best],
        history,
    })
}

fn tournament(fit: &[f64], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut best = rng.gen_range(0..fit.len());
    for _ in 1..size {
        let i = rng.gen_range(0..fit.len());
        if fit[i] > fit[best] {
            best = i;
        }
    }
    best
}
