use clap::{Args, Parser, Subcommand, ValueEnum};
use fcip_core::fuzzy::{Defuzzifier, PartitionShape, RuleLearning};
use fcip_core::mcdm::Reciprocity;
use fcip_core::models::{Activation, Optimizer, Transformation};
use fcip_core::screening::SelectionMethod;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "fcip", version, about = "Conceptual cost estimation for field canal improvement projects")]
pub struct Cli {
    /// Write a run manifest (inputs, seed, parameters, output digest) here.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expert-survey and statistical driver screening.
    #[command(subcommand)]
    Screen(ScreenCommand),
    /// Fit a cost model and write it as JSON.
    #[command(subcommand)]
    Fit(FitCommand),
    /// Predict the cost of one project with a fitted model.
    Predict(PredictArgs),
    /// Serve fitted models over HTTP.
    Serve(ServeArgs),
    /// Run the reproduction criteria against the bundled data.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
pub enum ScreenCommand {
    /// Fuzzy Delphi aggregation of Likert responses with alpha screening.
    Fdm(FdmArgs),
    /// Fuzzy AHP weights of the criteria from pairwise judgements.
    Fahp(FahpArgs),
    /// Regression-based selection over a case CSV.
    Stepwise(SelectArgs),
    /// Correlation filter followed by stepwise selection.
    Hybrid(HybridArgs),
}

#[derive(Debug, Args)]
pub struct FdmArgs {
    /// Directory of survey JSON documents.
    #[arg(long, value_name = "DIR", conflicts_with = "table")]
    pub surveys: Option<PathBuf>,
    /// CSV of already aggregated opinions (`id,l,m,u`) to screen instead.
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
    #[arg(long, default_value_t = 0.6)]
    pub alpha: f64,
    /// Parameter ids to delete regardless of score.
    #[arg(long, value_delimiter = ',', value_name = "ID")]
    pub exclude: Vec<String>,
    /// Directory for the JSON and text reports.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FahpArgs {
    #[arg(long, value_name = "DIR")]
    pub surveys: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReciprocityArg::Repair)]
    pub reciprocity: ReciprocityArg,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Key-driver CSV or extended `id,p1..p17,cost_le` CSV.
    #[arg(long, value_name = "CSV")]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Stepwise)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0.05)]
    pub p_enter: f64,
    #[arg(long, default_value_t = 0.10)]
    pub p_remove: f64,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HybridArgs {
    #[arg(long, value_name = "CSV")]
    pub data: Option<PathBuf>,
    /// 1: drop weak and collinear predictors; 2: drop collinear only.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
    pub mode: u8,
    #[arg(long, default_value_t = 0.8)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.3)]
    pub lo: f64,
    #[arg(long, default_value_t = 0.05)]
    pub p_enter: f64,
    #[arg(long, default_value_t = 0.10)]
    pub p_remove: f64,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FitCommand {
    /// Transformed multiple regression.
    Regression(RegressionArgs),
    /// 4-h-1 multilayer perceptron.
    Mlp(MlpArgs),
    /// Case-based reasoning over the training cases.
    Cbr(CbrArgs),
    /// Mamdani fuzzy rule base.
    Fuzzy(FuzzyArgs),
}

#[derive(Debug, Args)]
pub struct FitData {
    /// Training CSV.
    #[arg(long, value_name = "CSV")]
    pub data: Option<PathBuf>,
    /// Validation CSV; by default the bundled validation cases when present.
    #[arg(long, value_name = "CSV")]
    pub validation: Option<PathBuf>,
    /// Model output path; defaults to `<kind>-model.json`.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegressionArgs {
    #[command(flatten)]
    pub io: FitData,
    #[arg(long, value_enum, default_value_t = TransformArg::Sqrt)]
    pub transform: TransformArg,
}

#[derive(Debug, Args)]
pub struct MlpArgs {
    #[command(flatten)]
    pub io: FitData,
    #[arg(long, value_enum, default_value_t = TransformArg::Sqrt)]
    pub transform: TransformArg,
    #[arg(long, default_value_t = 5)]
    pub hidden: usize,
    #[arg(long, default_value_t = 5000)]
    pub epochs: usize,
    #[arg(long, value_enum, default_value_t = OptimizerArg::GradientDescent)]
    pub optimizer: OptimizerArg,
    #[arg(long, value_enum, default_value_t = ActivationArg::Tanh)]
    pub activation: ActivationArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CbrArgs {
    #[command(flatten)]
    pub io: FitData,
    /// Attribute weights for area, length, valves and year.
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [0.2, 0.2, 0.2, 0.4])]
    pub weights: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct FuzzyArgs {
    #[command(flatten)]
    pub io: FitData,
    #[arg(long, default_value_t = 7)]
    pub labels: usize,
    #[arg(long, value_enum, default_value_t = ShapeArg::Gaussian)]
    pub shape: ShapeArg,
    #[arg(long, value_enum, default_value_t = LearningArg::Ga)]
    pub learning: LearningArg,
    #[arg(long, value_enum, default_value_t = DefuzzArg::Wam)]
    pub defuzzifier: DefuzzArg,
    #[arg(long, default_value_t = 60)]
    pub population: usize,
    #[arg(long, default_value_t = 200)]
    pub generations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Fitted model JSON.
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub area_ha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub length_m: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub valves: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub year: f64,
    /// Annual inflation in percent, applied past the last training year.
    #[arg(long, allow_negative_numbers = true)]
    pub inflation_rate: Option<f64>,
    /// Driver to vary in the scenarios (area, length, valves, year); repeatable.
    #[arg(long, value_delimiter = ',', value_name = "DRIVER")]
    pub toggle: Vec<String>,
    #[arg(long)]
    pub scenarios: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Fitted model JSON; repeatable.
    #[arg(long, value_name = "PATH", required = true)]
    pub model: Vec<PathBuf>,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Run a single criterion.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub criterion: Option<u8>,
    /// Data directory laid out like the bundled `data/`.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    None,
    Sqrt,
    Reciprocal,
    Semilog,
    Power,
}

impl From<TransformArg> for Transformation {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::None => Transformation::None,
            TransformArg::Sqrt => Transformation::Sqrt,
            TransformArg::Reciprocal => Transformation::Reciprocal,
            TransformArg::Semilog => Transformation::Semilog,
            TransformArg::Power => Transformation::Power,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    GradientDescent,
    ConjugateGradient,
}

impl From<OptimizerArg> for Optimizer {
    fn from(o: OptimizerArg) -> Self {
        match o {
            OptimizerArg::GradientDescent => Optimizer::GradientDescent,
            OptimizerArg::ConjugateGradient => Optimizer::ConjugateGradient,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActivationArg {
    Tanh,
    Linear,
}

impl From<ActivationArg> for Activation {
    fn from(a: ActivationArg) -> Self {
        match a {
            ActivationArg::Tanh => Activation::Tanh,
            ActivationArg::Linear => Activation::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Gaussian,
    Triangular,
}

impl From<ShapeArg> for PartitionShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Gaussian => PartitionShape::Gaussian,
            ShapeArg::Triangular => PartitionShape::Triangular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearningArg {
    Ga,
    Wm,
}

impl From<LearningArg> for RuleLearning {
    fn from(l: LearningArg) -> Self {
        match l {
            LearningArg::Ga => RuleLearning::Ga,
            LearningArg::Wm => RuleLearning::Wm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DefuzzArg {
    Wam,
    Cog,
}

impl From<DefuzzArg> for Defuzzifier {
    fn from(d: DefuzzArg) -> Self {
        match d {
            DefuzzArg::Wam => Defuzzifier::Wam,
            DefuzzArg::Cog => Defuzzifier::Cog,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReciprocityArg {
    Repair,
    AsIs,
}

impl From<ReciprocityArg> for Reciprocity {
    fn from(r: ReciprocityArg) -> Self {
        match r {
            ReciprocityArg::Repair => Reciprocity::Repair,
            ReciprocityArg::AsIs => Reciprocity::AsIs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Forward,
    Backward,
    Stepwise,
}

impl From<MethodArg> for SelectionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Forward => SelectionMethod::Forward,
            MethodArg::Backward => SelectionMethod::Backward,
            MethodArg::Stepwise => SelectionMethod::Stepwise,
        }
    }
}
