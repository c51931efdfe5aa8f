//! Expert-survey screening: Likert statistics, fuzzy Delphi and fuzzy AHP.

pub mod ahp;
pub mod delphi;
pub mod likert;
pub mod survey;
pub mod tfn;

pub use ahp::{
    consistency, consistency_ratio, crisp_consistency, degree_of_possibility, fahp_aggregate, fahp_weights,
    final_priorities, possibility_table, random_index, synthetic_extents, ConsistencyReport, FuzzyPairwiseMatrix,
    Reciprocity, SyntheticExtent, WeightVector,
};
pub use delphi::{defuzzify_centroid, fdm_aggregate, fdm_aggregate_scores, fdm_screen, FdmEntry, FdmPartition};
pub use likert::{mean_score, screen_by_mean, standard_error, LikertResponses};
pub use survey::{likert_table, pairwise_matrices, parse_survey, SurveyResponse};
pub use tfn::{pairwise_scale, FuzzyLikertScale, TriangularFuzzyNumber};
