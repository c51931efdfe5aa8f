//! Single-hidden-layer perceptron trained by full-batch line-search descent.

use super::metrics::MapePair;
use super::transform::Transformation;
use super::{validate_drivers, CostModel, Metrics, ModelKind, TrainingDomain};
use crate::data::Dataset;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const INPUTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Tanh,
    Linear,
}

impl Activation {
    fn eval(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => a.tanh(),
            Activation::Linear => a,
        }
    }

    /// Derivative expressed through the activation output `h`.
    fn slope(self, h: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - h * h,
            Activation::Linear => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    /// Full-batch steepest descent with backtracking line search.
    #[default]
    GradientDescent,
    /// Polak–Ribière conjugate gradient with restarts.
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub hidden: usize,
    pub transformation: Transformation,
    pub activation: Activation,
    pub optimizer: Optimizer,
    pub seed: u64,
    pub max_epochs: usize,
    /// Training stops once the normalised MSE falls to this value.
    pub tolerance: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: 5,
            transformation: Transformation::Sqrt,
            activation: Activation::Tanh,
            optimizer: Optimizer::GradientDescent,
            seed: 0,
            max_epochs: 5000,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpWeights {
    /// Hidden × input.
    pub w1: Vec<[f64; INPUTS]>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl MlpWeights {
    fn zeros(hidden: usize) -> Self {
        MlpWeights {
            w1: vec![[0.0; INPUTS]; hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    fn hidden(&self) -> usize {
        self.b1.len()
    }

    /// Flattened as w1 (row-major), b1, w2, b2.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.w1.iter().flatten().copied().collect();
        v.extend(&self.b1);
        v.extend(&self.w2);
        v.push(self.b2);
        v
    }

    pub fn from_slice(hidden: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), hidden * (INPUTS + 2) + 1, "parameter count");
        let mut w = MlpWeights::zeros(hidden);
        for (j, row) in w.w1.iter_mut().enumerate() {
            row.copy_from_slice(&v[j * INPUTS..(j + 1) * INPUTS]);
        }
        let o = hidden * INPUTS;
        w.b1.copy_from_slice(&v[o..o + hidden]);
        w.w2.copy_from_slice(&v[o + hidden..o + 2 * hidden]);
        w.b2 = v[o + 2 * hidden];
        w
    }
}

/// Linear map of `[min, max]` onto `[-1, 1]`; a degenerate range maps to 0.
fn normalize(x: f64, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        2.0 * (x - lo) / (hi - lo) - 1.0
    } else {
        0.0
    }
}

fn denormalize(z: f64, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        (z + 1.0) / 2.0 * (hi - lo) + lo
    } else {
        lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub transformation: Transformation,
    pub activation: Activation,
    pub weights: MlpWeights,
    pub input_bounds: [(f64, f64); INPUTS],
    /// Bounds of the transformed target.
    pub target_bounds: (f64, f64),
    pub metrics: Metrics,
    pub domain: TrainingDomain,
    pub seed: u64,
    pub epochs: usize,
    pub final_loss: f64,
}

impl MlpModel {
    /// Untrained network with normalisation fitted to `train` and weights
    /// drawn uniformly from `[-0.5, 0.5]`.
    pub fn initialize(train: &Dataset, cfg: &MlpConfig) -> Result<Self> {
        if cfg.hidden == 0 {
            return Err(Error::invalid("hidden layer needs at least one unit"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let n = cfg.hidden * (INPUTS + 2) + 1;
        let params: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..=0.5)).collect();
        let t: Vec<f64> = train.costs().iter().map(|&c| cfg.transformation.apply(c)).collect();
        let target_bounds = (
            t.iter().copied().fold(f64::INFINITY, f64::min),
            t.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        );
        let domain = TrainingDomain::of(train);
        Ok(MlpModel {
            transformation: cfg.transformation,
            activation: cfg.activation,
            weights: MlpWeights::from_slice(cfg.hidden, &params),
            input_bounds: domain.bounds,
            target_bounds,
            metrics: Metrics::default(),
            domain,
            seed: cfg.seed,
            epochs: 0,
            final_loss: f64::NAN,
        })
    }

    pub fn hidden(&self) -> usize {
        self.weights.hidden()
    }

    fn normalized_inputs(&self, drivers: [f64; INPUTS]) -> [f64; INPUTS] {
        let mut x = [0.0; INPUTS];
        for k in 0..INPUTS {
            x[k] = normalize(drivers[k], self.input_bounds[k]);
        }
        x
    }

    /// Network output in normalised target units.
    pub fn forward_normalized(&self, x: &[f64; INPUTS]) -> f64 {
        forward(&self.weights, self.activation, x, None)
    }
}

fn forward(w: &MlpWeights, act: Activation, x: &[f64; INPUTS], mut hidden_out: Option<&mut Vec<f64>>) -> f64 {
    let mut y = w.b2;
    for j in 0..w.hidden() {
        let a = w.w1[j].iter().zip(x).fold(w.b1[j], |s, (wi, xi)| s + wi * xi);
        let h = act.eval(a);
        if let Some(buf) = hidden_out.as_deref_mut() {
            buf[j] = h;
        }
        y += w.w2[j] * h;
    }
    y
}

/// Normalised training set: inputs and targets in [-1, 1].
struct Batch {
    x: Vec<[f64; INPUTS]>,
    t: Vec<f64>,
}

impl Batch {
    fn of(model: &MlpModel, data: &Dataset) -> Self {
        Batch {
            x: data.cases().iter().map(|c| model.normalized_inputs(c.drivers())).collect(),
            t: data
                .cases()
                .iter()
                .map(|c| normalize(model.transformation.apply(c.cost_le), model.target_bounds))
                .collect(),
        }
    }

    /// Mean squared error and, when requested, its gradient.
    fn loss(&self, hidden: usize, act: Activation, params: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let w = MlpWeights::from_slice(hidden, params);
        let n = self.x.len() as f64;
        let mut h = vec![0.0; hidden];
        let mut loss = 0.0;
        let mut g = grad.map(|g| {
            g.iter_mut().for_each(|v| *v = 0.0);
            g
        });
        for (x, &t) in self.x.iter().zip(&self.t) {
            let y = forward(&w, act, x, Some(&mut h));
            let e = y - t;
            loss += e * e / n;
            if let Some(g) = g.as_deref_mut() {
                let d = 2.0 * e / n;
                let o = hidden * INPUTS;
                for j in 0..hidden {
                    let da = d * w.w2[j] * act.slope(h[j]);
                    for k in 0..INPUTS {
                        g[j * INPUTS + k] += da * x[k];
                    }
                    g[o + j] += da;
                    g[o + hidden + j] += d * h[j];
                }
                g[o + 2 * hidden] += d;
            }
        }
        loss
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Trains a network on `train`; deterministic for a given configuration.
pub fn mlp_train(train: &Dataset, cfg: &MlpConfig) -> Result<MlpModel> {
    let mut model = MlpModel::initialize(train, cfg)?;
    let batch = Batch::of(&model, train);
    let hidden = cfg.hidden;
    let act = cfg.activation;
    let mut theta = model.weights.to_vec();
    let np = theta.len();
    let mut g = vec![0.0; np];
    let mut loss = batch.loss(hidden, act, &theta, Some(&mut g));
    let mut dir: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut step: f64 = 1.0;
    let mut epochs = 0;
    let mut trial = vec![0.0; np];
    let mut g_new = vec![0.0; np];

    while epochs < cfg.max_epochs && loss > cfg.tolerance {
        if !loss.is_finite() {
            return Err(Error::Diverged(format!("loss became {loss} at epoch {epochs}")));
        }
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            dir.iter_mut().zip(&g).for_each(|(d, gi)| *d = -gi);
            slope = -dot(&g, &g);
        }
        if slope == 0.0 {
            break;
        }
        // Backtracking line search under the Armijo condition.
        let mut alpha = (step * 2.0).min(1e3);
        let mut accepted = None;
        for _ in 0..60 {
            for i in 0..np {
                trial[i] = theta[i] + alpha * dir[i];
            }
            let l = batch.loss(hidden, act, &trial, Some(&mut g_new));
            if l.is_finite() && l <= loss + 1e-4 * alpha * slope {
                accepted = Some(l);
                break;
            }
            alpha *= 0.5;
        }
        let Some(new_loss) = accepted else {
            // No descent along this direction: restart from steepest descent once.
            if dot(&dir, &g) == -dot(&g, &g) {
                break;
            }
            dir.iter_mut().zip(&g).for_each(|(d, gi)| *d = -gi);
            epochs += 1;
            continue;
        };
        step = alpha;
        std::mem::swap(&mut theta, &mut trial);
        let beta = match cfg.optimizer {
            Optimizer::GradientDescent => 0.0,
            Optimizer::ConjugateGradient => {
                let num: f64 = g_new.iter().zip(&g).map(|(a, b)| a * (a - b)).sum();
                (num / dot(&g, &g)).max(0.0)
            }
        };
        for i in 0..np {
            dir[i] = -g_new[i] + beta * dir[i];
        }
        std::mem::swap(&mut g, &mut g_new);
        loss = new_loss;
        epochs += 1;
    }
    if !loss.is_finite() {
        return Err(Error::Diverged(format!("loss became {loss}")));
    }
    model.weights = MlpWeights::from_slice(hidden, &theta);
    model.epochs = epochs;
    model.final_loss = loss;
    let preds = train
        .cases()
        .iter()
        .map(|c| mlp_predict(&model, c.drivers()))
        .collect::<Result<Vec<_>>>()?;
    let m = MapePair::compute(&preds, &train.costs())?;
    model.metrics.mape_train = Some(m.predicted_base);
    model.metrics.mape_train_actual = Some(m.actual_base);
    Ok(model)
}

/// Forward pass in normalised units, denormalised and inverse-transformed.
pub fn mlp_predict(model: &MlpModel, drivers: [f64; INPUTS]) -> Result<f64> {
    validate_drivers(drivers)?;
    let y = model.forward_normalized(&model.normalized_inputs(drivers));
    model.transformation.invert(denormalize(y, model.target_bounds))
}

/// Loss gradient by back-propagation over `sample`, in flattened parameter order.
pub fn analytic_gradient(model: &MlpModel, sample: &Dataset) -> Vec<f64> {
    let batch = Batch::of(model, sample);
    let theta = model.weights.to_vec();
    let mut g = vec![0.0; theta.len()];
    batch.loss(model.hidden(), model.activation, &theta, Some(&mut g));
    g
}

/// Loss gradient by central finite differences with step `h`.
pub fn numeric_gradient(model: &MlpModel, sample: &Dataset, h: f64) -> Vec<f64> {
    let batch = Batch::of(model, sample);
    let mut theta = model.weights.to_vec();
    (0..theta.len())
        .map(|i| {
            let orig = theta[i];
            theta[i] = orig + h;
            let up = batch.loss(model.hidden(), model.activation, &theta, None);
            theta[i] = orig - h;
            let down = batch.loss(model.hidden(), model.activation, &theta, None);
            theta[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Largest `|a - b| / max(|a|, |b|)` over components, with the denominator
/// floored at `1e-7` so vanishing gradients do not dominate.
pub fn max_relative_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-7))
        .fold(0.0, f64::max)
}

/// Compares back-propagated gradients with central differences (h = 1e-5).
pub fn gradient_check(model: &MlpModel, sample: &Dataset) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(max_relative_error(
        &analytic_gradient(model, sample),
        &numeric_gradient(model, sample, 1e-5),
    ))
}

impl CostModel for MlpModel {
    fn kind(&self) -> ModelKind {
        ModelKind::Mlp
    }

    fn transformation(&self) -> Transformation {
        self.transformation
    }

    fn predict(&self, drivers: [f64; 4]) -> Result<f64> {
        mlp_predict(self, drivers)
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
