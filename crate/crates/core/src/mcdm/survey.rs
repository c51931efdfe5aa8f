//! Per-expert survey documents.
//!
//! ```json
//! {"expert": "A", "likert": {"P1": 5, "P2": 4},
//!  "pairwise": {"criteria": ["C", "M"], "entries": [[[1,1,1],[1,3,5]], [[0.2,0.333,1],[1,1,1]]]}}
//! ```

use super::ahp::FuzzyPairwiseMatrix;
use super::likert::LikertResponses;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyResponse {
    pub expert: String,
    #[serde(default)]
    pub likert: BTreeMap<String, u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairwise: Option<FuzzyPairwiseMatrix<f64>>,
}

pub fn parse_survey(text: &str) -> Result<SurveyResponse> {
    let s: SurveyResponse = serde_json::from_str(text)?;
    if s.expert.trim().is_empty() {
        return Err(Error::invalid("survey has an empty `expert` field"));
    }
    if let Some((id, v)) = s.likert.iter().find(|(_, v)| !(1..=5).contains(*v)) {
        return Err(Error::invalid(format!(
            "expert `{}`: score {v} for `{id}` outside 1..=5",
            s.expert
        )));
    }
    Ok(s)
}

/// Orders parameter ids like `P2` before `P10`.
pub fn natural_key(id: &str) -> (String, u64, String) {
    let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
    let (head, rest) = id.split_at(split);
    let digits_end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let num = rest[..digits_end].parse().unwrap_or(0);
    (head.to_string(), num, rest[digits_end..].to_string())
}

/// Collects the Likert scores of every parameter across experts, in
/// natural id order and expert order.
pub fn likert_table(surveys: &[SurveyResponse]) -> Result<Vec<LikertResponses>> {
    let mut by_param: BTreeMap<(String, u64, String), (String, Vec<u8>)> = BTreeMap::new();
    for s in surveys {
        for (id, &score) in &s.likert {
            by_param
                .entry(natural_key(id))
                .or_insert_with(|| (id.clone(), Vec::new()))
                .1
                .push(score);
        }
    }
    by_param
        .into_values()
        .map(|(id, scores)| LikertResponses::new(id, scores))
        .collect()
}

/// Pairwise matrices of the experts that supplied one.
pub fn pairwise_matrices(surveys: &[SurveyResponse]) -> Vec<FuzzyPairwiseMatrix<f64>> {
    surveys.iter().filter_map(|s| s.pairwise.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_document() {
        let s = parse_survey(
            r#"{"expert":"A","likert":{"P1":5,"P10":2,"P2":4},
                "pairwise":{"criteria":["C","M"],"entries":[[[1,1,1],[1,3,5]],[[0.2,0.3333,1],[1,1,1]]]}}"#,
        )
        .unwrap();
        assert_eq!(s.expert, "A");
        assert_eq!(s.likert["P10"], 2);
        assert_eq!(s.pairwise.unwrap().size(), 2);
    }

    #[test]
    fn likert_only_document() {
        let s = parse_survey(r#"{"expert":"B","likert":{"P1":3}}"#).unwrap();
        assert!(s.pairwise.is_none());
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_survey(r#"{"expert":"A","likert":{"P1":7}}"#).is_err());
        assert!(parse_survey(r#"{"expert":"","likert":{}}"#).is_err());
        assert!(parse_survey(r#"{"likert":{}}"#).is_err());
        assert!(parse_survey(
            r#"{"expert":"A","pairwise":{"criteria":["C","M"],"entries":[[[1,1,1],[1,3,5]]]}}"#
        )
        .is_err());
    }

    #[test]
    fn table_uses_natural_order() {
        let a = parse_survey(r#"{"expert":"A","likert":{"P1":5,"P10":2,"P2":4}}"#).unwrap();
        let b = parse_survey(r#"{"expert":"B","likert":{"P1":4,"P2":4}}"#).unwrap();
        let t = likert_table(&[a, b]).unwrap();
        let ids: Vec<_> = t.iter().map(|r| r.parameter_id()).collect();
        assert_eq!(ids, ["P1", "P2", "P10"]);
        assert_eq!(t[0].scores(), &[5, 4]);
    }
}
