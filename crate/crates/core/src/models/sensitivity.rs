//! Inflation adjustment, random what-if scenarios and driver importance.

use super::CostModel;
use crate::data::{Dataset, Driver};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SCENARIOS: usize = 30;
pub const DEFAULT_BAND: f64 = 0.25;

/// Compounds `cost` over `years` at `rate_percent` per year.
pub fn adjust_inflation(cost: f64, rate_percent: f64, years: u32) -> Result<f64> {
    if !(rate_percent.is_finite() && rate_percent > -100.0) {
        return Err(Error::invalid(format!("inflation rate must exceed -100%, got {rate_percent}")));
    }
    Ok(cost * (1.0 + rate_percent / 100.0).powi(years as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSet {
    pub base_drivers: [f64; 4],
    pub base_prediction: f64,
    pub drivers: Vec<[f64; 4]>,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single scenario.
    pub sd: f64,
    pub seed: u64,
    pub toggled: Vec<Driver>,
    pub band: f64,
}

/// Draws `n` driver vectors, perturbing only the `toggled` drivers uniformly
/// within `value · (1 ± band)` clamped to `bounds` (year rounded), and
/// predicts each.
pub fn sensitivity_scenarios(
    model: &dyn CostModel,
    base: [f64; 4],
    toggled: &[Driver],
    n: usize,
    band: f64,
    bounds: [(f64, f64); 4],
    seed: u64,
) -> Result<ScenarioSet> {
    if n == 0 {
        return Err(Error::invalid("at least one scenario is required"));
    }
    if !(band > 0.0 && band <= 1.0) {
        return Err(Error::invalid(format!("band must lie in (0, 1], got {band}")));
    }
    let base_prediction = model.predict(base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drivers = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let mut x = base;
        for d in Driver::ALL {
            if !toggled.contains(&d) {
                continue;
            }
            let i = d.index();
            let v = base[i];
            let (lo, hi) = (v * (1.0 - band), v * (1.0 + band));
            let mut s = rng.gen_range(lo.min(hi)..=lo.max(hi)).clamp(bounds[i].0, bounds[i].1);
            if d == Driver::Year {
                s = s.round();
            }
            x[i] = s;
        }
        values.push(model.predict(x)?);
        drivers.push(x);
    }
    let constant = values.iter().all(|&v| v == values[0]);
    let mean = if constant { values[0] } else { values.iter().sum::<f64>() / n as f64 };
    let sd = if !constant {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut toggled: Vec<Driver> = Driver::ALL.into_iter().filter(|d| toggled.contains(d)).collect();
    toggled.dedup();
    Ok(ScenarioSet {
        base_drivers: base,
        base_prediction,
        drivers,
        values,
        mean,
        sd,
        seed,
        toggled,
        band,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Importance {
    pub driver: Driver,
    pub score: f64,
}

/// One-at-a-time sensitivity over the training cases: each driver is moved
/// by ±25% of its training span (clamped to the span, year rounded) and the
/// mean absolute change in prediction is taken. Scores sum to 1 and are
/// returned in descending order.
pub fn importance_ranking(model: &dyn CostModel, train: &Dataset) -> Result<Vec<Importance>> {
    let bounds = train.driver_bounds();
    let mut raw = [0.0; 4];
    for case in train.cases() {
        let x = case.drivers();
        let base = model.predict(x)?;
        for d in Driver::ALL {
            let i = d.index();
            let (lo, hi) = bounds[i];
            let step = DEFAULT_BAND * (hi - lo);
            for sign in [-1.0, 1.0] {
                let mut y = x;
                let mut v = (x[i] + sign * step).clamp(lo, hi);
                if d == Driver::Year {
                    v = v.round();
                }
                y[i] = v;
                raw[i] += (model.predict(y)? - base).abs();
            }
        }
    }
    let total: f64 = raw.iter().sum();
    let mut out: Vec<Importance> = Driver::ALL
        .iter()
        .map(|&driver| Importance {
            driver,
            score: if total > 0.0 { raw[driver.index()] / total } else { 0.0 },
        })
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ProjectCase, Role};
    use crate::models::{fit_parametric, FittedCostModel, Transformation};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn train() -> Dataset {
        let cases = (0..12)
            .map(|i| {
                let a = 19.0 + 7.0 * f64::from(i);
                let l = 119.0 + 140.0 * f64::from((i * 5) % 12);
                let v = 3 + ((i * 7) % 11) as u32;
                let y = 2010 + i % 6;
                let cost = 3000.0 * a + 180.0 * l + 6000.0 * f64::from(v) + 5000.0 * f64::from(y - 2009);
                ProjectCase::new(format!("S{i}"), a, l, v, y, cost * (1.0 + 0.01 * f64::from(i % 3))).unwrap()
            })
            .collect();
        Dataset::new(cases, Role::Training).unwrap()
    }

    fn model() -> FittedCostModel {
        fit_parametric(&train(), Transformation::Sqrt).unwrap()
    }

    #[test]
    fn inflation_examples() {
        assert_eq!(adjust_inflation(5.0e5, 12.0, 0).unwrap(), 5.0e5);
        assert_eq!(adjust_inflation(5.0e5, 0.0, 4).unwrap(), 5.0e5);
        assert_relative_eq!(adjust_inflation(100000.0, 10.0, 2).unwrap(), 121000.0, max_relative = 1e-12);
        assert!(adjust_inflation(1.0, -100.0, 1).is_err());
    }

    #[test]
    fn no_toggles_repeat_base() {
        let m = model();
        let b = train().driver_bounds();
        let s = sensitivity_scenarios(&m, [40.0, 600.0, 6.0, 2013.0], &[], 30, 0.25, b, 1).unwrap();
        assert_eq!(s.values.len(), 30);
        assert!(s.values.iter().all(|&v| v == s.base_prediction));
        assert_eq!(s.sd, 0.0);
    }

    #[test]
    fn length_band_containment() {
        let m = model();
        let b = train().driver_bounds();
        let base = [19.6, 453.0, 6.0, 2014.0];
        let s = sensitivity_scenarios(&m, base, &[Driver::Length], 30, 0.25, b, 7).unwrap();
        for x in &s.drivers {
            assert!(x[1] >= 339.75 && x[1] <= 566.25);
            assert!(x[1] >= b[1].0 && x[1] <= b[1].1);
            assert_eq!([x[0], x[2], x[3]], [base[0], base[2], base[3]]);
        }
        assert!(s.sd > 0.0);
    }

    #[test]
    fn year_is_rounded_and_clamped() {
        let m = model();
        let b = train().driver_bounds();
        let s = sensitivity_scenarios(&m, [40.0, 600.0, 6.0, 2013.0], &[Driver::Year], 20, 0.25, b, 3).unwrap();
        for x in &s.drivers {
            assert_eq!(x[3], x[3].round());
            assert!((2010.0..=2015.0).contains(&x[3]));
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let m = model();
        let b = train().driver_bounds();
        let all = Driver::ALL;
        let base = [40.0, 600.0, 6.0, 2013.0];
        let a = sensitivity_scenarios(&m, base, &all, 30, 0.25, b, 42).unwrap();
        let c = sensitivity_scenarios(&m, base, &all, 30, 0.25, b, 42).unwrap();
        let d = sensitivity_scenarios(&m, base, &all, 30, 0.25, b, 43).unwrap();
        assert_eq!(a, c);
        assert_ne!(a.values, d.values);
        assert_eq!(a.base_prediction, d.base_prediction);
    }

    #[test]
    fn bad_arguments() {
        let m = model();
        let b = train().driver_bounds();
        let base = [40.0, 600.0, 6.0, 2013.0];
        assert!(sensitivity_scenarios(&m, base, &[], 0, 0.25, b, 0).is_err());
        assert!(sensitivity_scenarios(&m, base, &[], 5, 0.0, b, 0).is_err());
    }

    #[test]
    fn ignored_driver_scores_zero() {
        let mut m = model();
        m.coefficients[3] = 0.0;
        let ranking = importance_ranking(&m, &train()).unwrap();
        let valves = ranking.iter().find(|r| r.driver == Driver::Valves).unwrap();
        assert_eq!(valves.score, 0.0);
        assert_relative_eq!(ranking.iter().map(|r| r.score).sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(ranking.windows(2).all(|w| w[0].score >= w[1].score));
    }

    #[test]
    fn symmetric_drivers_score_equal() {
        // Area and length take the same values and get the same coefficient.
        let cases = (0..10)
            .map(|i| {
                let x = 20.0 + 9.0 * f64::from(i);
                ProjectCase::new(format!("E{i}"), x, x, 3 + i as u32, 2010 + i % 5, 1e5 + 10.0 * x).unwrap()
            })
            .collect();
        let ds = Dataset::new(cases, Role::Training).unwrap();
        let mut m = fit_parametric(&train(), Transformation::None).unwrap();
        m.coefficients = [1000.0, 5.0, 5.0, 2.0, 1.0];
        let r = importance_ranking(&m, &ds).unwrap();
        let score = |d| r.iter().find(|x| x.driver == d).unwrap().score;
        assert!((score(Driver::Area) - score(Driver::Length)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn inflation_composes(c in 1.0f64..1e7, r in -50.0f64..50.0, n1 in 0u32..20, n2 in 0u32..20) {
            let two = adjust_inflation(adjust_inflation(c, r, n1).unwrap(), r, n2).unwrap();
            let one = adjust_inflation(c, r, n1 + n2).unwrap();
            prop_assert!((two - one).abs() <= 1e-9 * one.abs());
        }

        #[test]
        fn scenario_summary_invariants(seed in any::<u64>(), n in 1usize..40, mask in 0u8..16) {
            let m = model();
            let b = train().driver_bounds();
            let toggled: Vec<Driver> = Driver::ALL.into_iter().filter(|d| mask & (1 << d.index()) != 0).collect();
            let s = sensitivity_scenarios(&m, [45.0, 700.0, 7.0, 2012.0], &toggled, n, 0.25, b, seed).unwrap();
            let lo = s.values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(s.mean >= lo - 1e-9 * hi.abs() && s.mean <= hi + 1e-9 * hi.abs());
            prop_assert_eq!(s.sd == 0.0, lo == hi);
            prop_assert_eq!(s.values.len(), n);
            for x in &s.drivers {
                for d in Driver::ALL {
                    let i = d.index();
                    if toggled.contains(&d) {
                        prop_assert!(x[i] >= b[i].0 && x[i] <= b[i].1);
                    } else {
                        prop_assert_eq!(x[i], [45.0, 700.0, 7.0, 2012.0][i]);
                    }
                }
            }
        }
    }
}
