//! Forward, backward and stepwise variable selection by partial F tests,
//! plus the hybrid correlation-filter pipelines.

use super::correlation::{correlation_filter, FilterMode, FilterOutcome};
use super::ols::{ols_fit, OlsFit};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::f_sf;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMethod {
    Forward,
    Backward,
    Stepwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Enter,
    Remove,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep<T> {
    pub action: Action,
    pub variable: String,
    /// Partial F p-value that justified the step.
    pub p_value: T,
    pub r: T,
    pub r2: T,
    pub adj_r2: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace<T> {
    pub method: SelectionMethod,
    pub p_enter: T,
    pub p_remove: T,
    pub steps: Vec<SelectionStep<T>>,
}

impl<T: Real> SelectionTrace<T> {
    /// Variables in the final model, in order of entry.
    pub fn selected(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.steps {
            match s.action {
                Action::Enter => out.push(s.variable.clone()),
                Action::Remove => out.retain(|v| v != &s.variable),
            }
        }
        out
    }
}

struct Problem<'a, T> {
    names: Vec<String>,
    columns: &'a [Vec<T>],
    y: &'a [T],
}

impl<T: Real> Problem<'_, T> {
    fn fit(&self, set: &[usize]) -> Result<OlsFit<T>> {
        let names: Vec<&str> = set.iter().map(|&i| self.names[i].as_str()).collect();
        let cols: Vec<Vec<T>> = set.iter().map(|&i| self.columns[i].clone()).collect();
        ols_fit(&names, &cols, self.y)
    }

    fn sst(&self) -> T {
        let n = T::from_count(self.y.len());
        let mean = self.y.iter().fold(T::zero(), |a, &b| a + b) / n;
        self.y.iter().fold(T::zero(), |a, &v| a + (v - mean) * (v - mean))
    }

    fn step(&self, action: Action, var: usize, p: T, fit: &OlsFit<T>) -> SelectionStep<T> {
        SelectionStep {
            action,
            variable: self.names[var].clone(),
            p_value: p,
            r: fit.r,
            r2: fit.r2,
            adj_r2: fit.adj_r2,
        }
    }
}

/// Partial F p-value for adding/removing one variable: the larger model has
/// `sse_full` with `df_full` residual degrees of freedom.
fn partial_p<T: Real>(sse_reduced: T, sse_full: T, df_full: usize) -> T {
    if df_full == 0 {
        return T::one();
    }
    let diff = (sse_reduced - sse_full).max(T::zero());
    if sse_full <= T::zero() {
        return if diff > T::zero() { T::zero() } else { T::one() };
    }
    let f = diff / (sse_full / T::from_count(df_full));
    f_sf(f, T::one(), T::from_count(df_full))
}

/// Best candidate to enter `current`, as `(index, p-value, fit)`.
fn best_entry<T: Real>(pb: &Problem<'_, T>, current: &[usize], sse_now: T) -> Result<Option<(usize, T, OlsFit<T>)>> {
    let mut best: Option<(usize, T, OlsFit<T>)> = None;
    for cand in 0..pb.names.len() {
        if current.contains(&cand) {
            continue;
        }
        let mut set = current.to_vec();
        set.push(cand);
        let fit = match pb.fit(&set) {
            Ok(f) => f,
            Err(Error::RankDeficient { .. }) => continue,
            Err(Error::InvalidInput(_)) => continue,
            Err(e) => return Err(e),
        };
        let p = partial_p(sse_now, fit.sse, fit.df_resid());
        if best.as_ref().map_or(true, |(_, bp, bf)| p < *bp || (p == *bp && fit.sse < bf.sse)) {
            best = Some((cand, p, fit));
        }
    }
    Ok(best)
}

/// Worst variable in `current`, as `(position, p-value, reduced fit)`.
fn worst_member<T: Real>(pb: &Problem<'_, T>, current: &[usize], full: &OlsFit<T>) -> Result<Option<(usize, T, Option<OlsFit<T>>)>> {
    let mut worst: Option<(usize, T, Option<OlsFit<T>>)> = None;
    for pos in 0..current.len() {
        let reduced: Vec<usize> = current.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, &v)| v).collect();
        let (sse_red, fit) = if reduced.is_empty() {
            (pb.sst(), None)
        } else {
            let f = pb.fit(&reduced)?;
            (f.sse, Some(f))
        };
        let p = partial_p(sse_red, full.sse, full.df_resid());
        if worst.as_ref().map_or(true, |(_, wp, _)| p > *wp) {
            worst = Some((pos, p, fit));
        }
    }
    Ok(worst)
}

/// Runs regression-based variable selection.
pub fn select_variables<T: Real, S: AsRef<str>>(
    names: &[S],
    columns: &[Vec<T>],
    y: &[T],
    method: SelectionMethod,
    p_enter: T,
    p_remove: T,
) -> Result<SelectionTrace<T>> {
    if !(p_enter <= p_remove) {
        return Err(Error::invalid(format!(
            "p_enter ({p_enter}) must not exceed p_remove ({p_remove})"
        )));
    }
    if names.len() != columns.len() {
        return Err(Error::DimensionMismatch("names and columns differ in count".into()));
    }
    let pb = Problem {
        names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        columns,
        y,
    };
    let mut trace = SelectionTrace {
        method,
        p_enter,
        p_remove,
        steps: Vec::new(),
    };
    match method {
        SelectionMethod::Forward => forward(&pb, &mut trace, false)?,
        SelectionMethod::Stepwise => forward(&pb, &mut trace, true)?,
        SelectionMethod::Backward => backward(&pb, &mut trace)?,
    }
    Ok(trace)
}

fn forward<T: Real>(pb: &Problem<'_, T>, trace: &mut SelectionTrace<T>, stepwise: bool) -> Result<()> {
    let mut current: Vec<usize> = Vec::new();
    let mut sse_now = pb.sst();
    // Each variable can enter and leave a bounded number of times.
    let cap = 4 * pb.names.len() + 4;
    for _ in 0..cap {
        let Some((cand, p, fit)) = best_entry(pb, &current, sse_now)? else {
            break;
        };
        if p > trace.p_enter {
            break;
        }
        current.push(cand);
        sse_now = fit.sse;
        trace.steps.push(pb.step(Action::Enter, cand, p, &fit));
        if !stepwise {
            continue;
        }
        let mut full = fit;
        loop {
            let Some((pos, p, reduced)) = worst_member(pb, &current, &full)? else {
                break;
            };
            if p < trace.p_remove {
                break;
            }
            let var = current.remove(pos);
            match reduced {
                Some(f) => {
                    sse_now = f.sse;
                    trace.steps.push(pb.step(Action::Remove, var, p, &f));
                    full = f;
                }
                None => {
                    sse_now = pb.sst();
                    trace.steps.push(SelectionStep {
                        action: Action::Remove,
                        variable: pb.names[var].clone(),
                        p_value: p,
                        r: T::zero(),
                        r2: T::zero(),
                        adj_r2: T::zero(),
                    });
                    break;
                }
            }
        }
    }
    Ok(())
}

fn backward<T: Real>(pb: &Problem<'_, T>, trace: &mut SelectionTrace<T>) -> Result<()> {
    let mut current: Vec<usize> = Vec::new();
    let mut sse_prev = pb.sst();
    let mut full = None;
    for v in 0..pb.names.len() {
        current.push(v);
        let fit = pb.fit(&current)?;
        let p = partial_p(sse_prev, fit.sse, fit.df_resid());
        sse_prev = fit.sse;
        trace.steps.push(pb.step(Action::Enter, v, p, &fit));
        full = Some(fit);
    }
    let Some(mut full) = full else {
        return Ok(());
    };
    while !current.is_empty() {
        let Some((pos, p, reduced)) = worst_member(pb, &current, &full)? else {
            break;
        };
        if p < trace.p_remove {
            break;
        }
        let var = current.remove(pos);
        match reduced {
            Some(f) => {
                trace.steps.push(pb.step(Action::Remove, var, p, &f));
                full = f;
            }
            None => {
                trace.steps.push(SelectionStep {
                    action: Action::Remove,
                    variable: pb.names[var].clone(),
                    p_value: p,
                    r: T::zero(),
                    r2: T::zero(),
                    adj_r2: T::zero(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HybridMode {
    /// Correlation filter with both rules, then stepwise.
    #[serde(rename = "1")]
    One,
    /// Correlation filter with the collinearity rule only, then stepwise.
    #[serde(rename = "2")]
    Two,
}

impl HybridMode {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(HybridMode::One),
            2 => Some(HybridMode::Two),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridResult<T> {
    pub filter: FilterOutcome<T>,
    pub trace: SelectionTrace<T>,
    pub selected: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig<T> {
    pub hi: T,
    pub lo: T,
    pub p_enter: T,
    pub p_remove: T,
}

impl<T: Real> Default for SelectionConfig<T> {
    fn default() -> Self {
        SelectionConfig {
            hi: T::lit(0.8),
            lo: T::lit(0.3),
            p_enter: T::lit(0.05),
            p_remove: T::lit(0.10),
        }
    }
}

/// Correlation filter followed by stepwise selection over the survivors.
pub fn hybrid_select<T: Real, S: AsRef<str>>(
    names: &[S],
    columns: &[Vec<T>],
    y: &[T],
    mode: HybridMode,
    cfg: &SelectionConfig<T>,
) -> Result<HybridResult<T>> {
    let fmode = match mode {
        HybridMode::One => FilterMode::HiAndLo,
        HybridMode::Two => FilterMode::HiOnly,
    };
    let filter = correlation_filter(names, columns, y, cfg.hi, cfg.lo, fmode)?;
    let kept: Vec<usize> = filter
        .retained
        .iter()
        .map(|r| names.iter().position(|n| n.as_ref() == r).expect("retained name exists"))
        .collect();
    let kept_names: Vec<&str> = kept.iter().map(|&i| names[i].as_ref()).collect();
    let kept_cols: Vec<Vec<T>> = kept.iter().map(|&i| columns[i].clone()).collect();
    let trace = select_variables(&kept_names, &kept_cols, y, SelectionMethod::Stepwise, cfg.p_enter, cfg.p_remove)?;
    let selected = trace.selected();
    Ok(HybridResult { filter, trace, selected })
}
