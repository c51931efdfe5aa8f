//! The bundled project data and reference tables, either compiled in or
//! read from a directory laid out like the repository's `data/`.
//!
//! ```text
//! data/training.csv            key-driver cases used for fitting
//! data/validation.csv          held-out cases
//! data/surveys/*.json          one survey document per expert
//! data/reference/criteria_matrix.json
//! data/reference/fdm_rows.csv  id,l,m,u,crisp,result
//! data/reference/cbr_rows.csv  a ranked retrieval listing for CBR_QUERY
//! ```

use crate::data::{parse_dataset, Dataset, Role};
use crate::error::{Error, Result};
use crate::mcdm::{parse_survey, FuzzyPairwiseMatrix, SurveyResponse};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

/// Drivers of the query behind the CBR reference listing.
pub const CBR_QUERY: [f64; 4] = [24.0, 779.0, 4.0, 2014.0];

/// Parameters dropped from the Delphi shortlist by policy despite scoring
/// above the threshold.
pub const FDM_EXCLUSIONS: [&str; 1] = ["P22"];

pub const FDM_ALPHA: f64 = 0.6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdmRow {
    pub id: String,
    pub l: f64,
    pub m: f64,
    pub u: f64,
    pub crisp: f64,
    /// `select` or `delete`.
    pub result: String,
}

impl FdmRow {
    pub fn selected(&self) -> bool {
        self.result == "select"
    }
}

/// An aggregated opinion `(l, m, u)` for one parameter. Extra columns in
/// the source table are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyOpinion {
    pub id: String,
    pub l: f64,
    pub m: f64,
    pub u: f64,
}

/// Reads an `id,l,m,u` table such as `reference/fdm_rows.csv`.
pub fn parse_opinions(text: &str) -> Result<Vec<FuzzyOpinion>> {
    parse_rows(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbrRow {
    pub sn: String,
    pub area_ha: f64,
    pub length_m: f64,
    pub valves: f64,
    pub year: f64,
    pub cost_le: f64,
    pub as_area: f64,
    pub as_length: f64,
    pub as_valves: f64,
    pub as_year: f64,
    pub cs: f64,
}

impl CbrRow {
    pub fn drivers(&self) -> [f64; 4] {
        [self.area_ha, self.length_m, self.valves, self.year]
    }

    pub fn similarities(&self) -> [f64; 4] {
        [self.as_area, self.as_length, self.as_valves, self.as_year]
    }
}

#[derive(Debug, Clone)]
pub struct Fixtures {
    pub training: Dataset,
    pub validation: Dataset,
    pub surveys: Vec<SurveyResponse>,
    pub criteria_matrix: FuzzyPairwiseMatrix<f64>,
    pub fdm_rows: Vec<FdmRow>,
    pub cbr_rows: Vec<CbrRow>,
}

macro_rules! bundled {
    ($path:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/", $path))
    };
}

const BUNDLED_SURVEYS: [&str; 15] = [
    bundled!("surveys/expert_01.json"),
    bundled!("surveys/expert_02.json"),
    bundled!("surveys/expert_03.json"),
    bundled!("surveys/expert_04.json"),
    bundled!("surveys/expert_05.json"),
    bundled!("surveys/expert_06.json"),
    bundled!("surveys/expert_07.json"),
    bundled!("surveys/expert_08.json"),
    bundled!("surveys/expert_09.json"),
    bundled!("surveys/expert_10.json"),
    bundled!("surveys/expert_11.json"),
    bundled!("surveys/expert_12.json"),
    bundled!("surveys/expert_13.json"),
    bundled!("surveys/expert_14.json"),
    bundled!("surveys/expert_15.json"),
];

impl Fixtures {
    /// The copy compiled into the library.
    pub fn bundled() -> Result<Self> {
        Ok(Fixtures {
            training: parse_dataset(bundled!("training.csv"), Role::Training)?,
            validation: parse_dataset(bundled!("validation.csv"), Role::Validation)?,
            surveys: BUNDLED_SURVEYS.iter().map(|t| parse_survey(t)).collect::<Result<_>>()?,
            criteria_matrix: serde_json::from_str(bundled!("reference/criteria_matrix.json"))?,
            fdm_rows: parse_rows(bundled!("reference/fdm_rows.csv"))?,
            cbr_rows: parse_rows(bundled!("reference/cbr_rows.csv"))?,
        })
    }

    /// Reads the same layout from `dir`.
    pub fn load(dir: &Path) -> Result<Self> {
        Ok(Fixtures {
            training: load_dataset(&dir.join("training.csv"), Role::Training)?,
            validation: load_dataset(&dir.join("validation.csv"), Role::Validation)?,
            surveys: load_surveys(&dir.join("surveys"))?,
            criteria_matrix: serde_json::from_str(&read(&dir.join("reference/criteria_matrix.json"))?)?,
            fdm_rows: parse_rows(&read(&dir.join("reference/fdm_rows.csv"))?)?,
            cbr_rows: parse_rows(&read(&dir.join("reference/cbr_rows.csv"))?)?,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

pub fn load_dataset(path: &Path, role: Role) -> Result<Dataset> {
    parse_dataset(&read(path)?, role)
}

/// Every `*.json` survey in `dir`, in file-name order.
pub fn load_surveys(dir: &Path) -> Result<Vec<SurveyResponse>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::invalid(format!("no survey documents in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            parse_survey(&read(p)?).map_err(|e| Error::invalid(format!("{}: {e}", p.display())))
        })
        .collect()
}

fn parse_rows<R: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<R>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::Parse {
                row: i + 1,
                field: String::new(),
                message: e.to_string(),
            })
        })
        .collect()
}
