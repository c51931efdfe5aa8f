//! Data-driven cost-driver identification.

pub mod correlation;
pub mod factor;
pub mod ols;
pub mod selection;

pub use correlation::{
    correlate, correlation_filter, correlation_matrix, ranks, CorrelationMatrix, CorrelationMethod, DropReason,
    FilterMode, FilterOutcome,
};
pub use factor::{
    adequacy, adequacy_from_correlation, communalities, pca, retain_components, varimax, varimax_criterion,
    AdequacyReport, Bartlett, FactorSolution, RetentionRule,
};
pub use ols::{design_matrix, ols_fit, OlsFit};
pub use selection::{
    hybrid_select, select_variables, Action, HybridMode, HybridResult, SelectionConfig, SelectionMethod,
    SelectionStep, SelectionTrace,
};
