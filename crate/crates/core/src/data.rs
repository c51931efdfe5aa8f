//! Project records, CSV ingestion, descriptive statistics and the
//! positional training/validation split.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Header of the key-driver CSV schema.
pub const KEY_DRIVER_HEADER: [&str; 6] = ["id", "area_ha", "length_m", "valves", "year", "cost_le"];

/// Number of screening variables in the extended schema (`p1..p17`).
pub const EXTENDED_VARIABLES: usize = 17;

/// The four key cost drivers, in model input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Driver {
    Area,
    Length,
    Valves,
    Year,
}

impl Driver {
    pub const ALL: [Driver; 4] = [Driver::Area, Driver::Length, Driver::Valves, Driver::Year];

    pub fn index(self) -> usize {
        match self {
            Driver::Area => 0,
            Driver::Length => 1,
            Driver::Valves => 2,
            Driver::Year => 3,
        }
    }

    /// Screening symbol used in the survey and selection tables.
    pub fn symbol(self) -> &'static str {
        match self {
            Driver::Area => "P1",
            Driver::Length => "P3",
            Driver::Valves => "P6",
            Driver::Year => "P14",
        }
    }

    /// CSV column name.
    pub fn column(self) -> &'static str {
        KEY_DRIVER_HEADER[self.index() + 1]
    }

    /// Accepts a column name, a symbol, or a short alias.
    pub fn parse(s: &str) -> Option<Driver> {
        let s = s.trim().to_ascii_lowercase();
        Driver::ALL.into_iter().find(|d| {
            s == d.column() || s == d.symbol().to_ascii_lowercase() || s == d.alias()
        })
    }

    fn alias(self) -> &'static str {
        match self {
            Driver::Area => "area",
            Driver::Length => "length",
            Driver::Valves => "valves",
            Driver::Year => "year",
        }
    }
}

impl fmt::Display for Driver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// One historical project: four cost drivers and the observed cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectCase {
    pub id: String,
    pub area_ha: f64,
    pub length_m: f64,
    pub valves: u32,
    pub year: i32,
    pub cost_le: f64,
}

impl ProjectCase {
    pub fn new(
        id: impl Into<String>,
        area_ha: f64,
        length_m: f64,
        valves: u32,
        year: i32,
        cost_le: f64,
    ) -> Result<Self> {
        let case = ProjectCase {
            id: id.into(),
            area_ha,
            length_m,
            valves,
            year,
            cost_le,
        };
        case.validate().map_err(|(field, message)| Error::Parse {
            row: 0,
            field: field.to_string(),
            message,
        })?;
        Ok(case)
    }

    fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        if self.id.trim().is_empty() {
            return Err(("id", "empty id".into()));
        }
        if !(self.area_ha.is_finite() && self.area_ha > 0.0) {
            return Err(("area_ha", format!("must be > 0, got {}", self.area_ha)));
        }
        if !(self.length_m.is_finite() && self.length_m > 0.0) {
            return Err(("length_m", format!("must be > 0, got {}", self.length_m)));
        }
        if self.valves < 1 {
            return Err(("valves", "must be >= 1".into()));
        }
        if !(1990..=2100).contains(&self.year) {
            return Err(("year", format!("must lie in 1990..=2100, got {}", self.year)));
        }
        if !(self.cost_le.is_finite() && self.cost_le > 0.0) {
            return Err(("cost_le", format!("must be > 0, got {}", self.cost_le)));
        }
        Ok(())
    }

    /// Driver vector in [`Driver::ALL`] order.
    pub fn drivers(&self) -> [f64; 4] {
        [
            self.area_ha,
            self.length_m,
            f64::from(self.valves),
            f64::from(self.year),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Training,
    Validation,
    Combined,
}

/// Ordered, non-empty collection of cases with unique ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    cases: Vec<ProjectCase>,
    role: Role,
}

impl Dataset {
    pub fn new(cases: Vec<ProjectCase>, role: Role) -> Result<Self> {
        if cases.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut seen = HashSet::new();
        for (i, c) in cases.iter().enumerate() {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::Parse {
                    row: i + 1,
                    field: "id".into(),
                    message: format!("duplicate id `{}`", c.id),
                });
            }
        }
        Ok(Dataset { cases, role })
    }

    pub fn cases(&self) -> &[ProjectCase] {
        &self.cases
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    /// Values of one driver across all cases.
    pub fn driver_column(&self, driver: Driver) -> Vec<f64> {
        self.cases.iter().map(|c| c.drivers()[driver.index()]).collect()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.cases.iter().map(|c| c.cost_le).collect()
    }

    /// Training-range (min, max) per driver.
    pub fn driver_bounds(&self) -> [(f64, f64); 4] {
        let mut out = [(f64::INFINITY, f64::NEG_INFINITY); 4];
        for c in &self.cases {
            for (b, v) in out.iter_mut().zip(c.drivers()) {
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
        out
    }

    /// Concatenates two datasets; ids must stay unique.
    pub fn concat(&self, other: &Dataset, role: Role) -> Result<Dataset> {
        let mut cases = self.cases.clone();
        cases.extend(other.cases.iter().cloned());
        Dataset::new(cases, role)
    }

    /// Serializes back to the key-driver CSV schema.
    pub fn to_csv(&self) -> String {
        let mut out = KEY_DRIVER_HEADER.join(",");
        out.push('\n');
        for c in &self.cases {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.id, c.area_ha, c.length_m, c.valves, c.year, c.cost_le
            ));
        }
        out
    }
}

/// Parses the key-driver CSV schema `id,area_ha,length_m,valves,year,cost_le`.
pub fn parse_dataset(text: &str, role: Role) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse {
        row: 0,
        field: "header".into(),
        message: e.to_string(),
    })?;
    if header.iter().ne(KEY_DRIVER_HEADER.iter().copied()) {
        return Err(Error::Parse {
            row: 0,
            field: "header".into(),
            message: format!("expected `{}`", KEY_DRIVER_HEADER.join(",")),
        });
    }

    let mut cases = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            field: "record".into(),
            message: e.to_string(),
        })?;
        if record.len() != KEY_DRIVER_HEADER.len() {
            return Err(Error::Parse {
                row,
                field: "record".into(),
                message: format!("expected 6 fields, found {}", record.len()),
            });
        }
        let field = |k: usize| record.get(k).unwrap_or("");
        let case = ProjectCase {
            id: field(0).to_string(),
            area_ha: parse_field(row, "area_ha", field(1))?,
            length_m: parse_field(row, "length_m", field(2))?,
            valves: parse_field(row, "valves", field(3))?,
            year: parse_field(row, "year", field(4))?,
            cost_le: parse_field(row, "cost_le", field(5))?,
        };
        case.validate().map_err(|(field, message)| Error::Parse {
            row,
            field: field.into(),
            message,
        })?;
        cases.push(case);
    }
    if cases.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Dataset::new(cases, role)
}

fn parse_field<V: std::str::FromStr>(row: usize, field: &str, raw: &str) -> Result<V>
where
    V::Err: fmt::Display,
{
    raw.parse::<V>().map_err(|e| Error::Parse {
        row,
        field: field.into(),
        message: format!("cannot parse `{raw}`: {e}"),
    })
}

/// One row of the 17-variable screening schema; absent cells are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedRecord {
    pub id: String,
    pub values: Vec<Option<f64>>,
    pub cost_le: f64,
}

/// Screening dataset over the extended `id,p1..p17,cost_le` schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedDataset {
    pub records: Vec<ExtendedRecord>,
}

impl ExtendedDataset {
    /// Variables with a value in every record, as `(name, column)` pairs in schema order.
    pub fn complete_variables(&self) -> Vec<(String, Vec<f64>)> {
        (0..EXTENDED_VARIABLES)
            .filter_map(|j| {
                let col: Option<Vec<f64>> = self.records.iter().map(|r| r.values[j]).collect();
                col.map(|c| (format!("P{}", j + 1), c))
            })
            .collect()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.cost_le).collect()
    }

    /// Projects a key-driver dataset onto the extended schema (P1, P3, P6, P14).
    pub fn from_key_drivers(ds: &Dataset) -> Self {
        let records = ds
            .cases()
            .iter()
            .map(|c| {
                let mut values = vec![None; EXTENDED_VARIABLES];
                for d in Driver::ALL {
                    let k: usize = d.symbol()[1..].parse().expect("symbol is P<n>");
                    values[k - 1] = Some(c.drivers()[d.index()]);
                }
                ExtendedRecord {
                    id: c.id.clone(),
                    values,
                    cost_le: c.cost_le,
                }
            })
            .collect();
        ExtendedDataset { records }
    }
}

/// Parses the extended schema. Any `p<k>` column may be missing from the
/// header or empty in a row.
pub fn parse_extended(text: &str) -> Result<ExtendedDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse {
            row: 0,
            field: "header".into(),
            message: e.to_string(),
        })?
        .iter()
        .map(|h| h.to_ascii_lowercase())
        .collect();
    if header.first().map(String::as_str) != Some("id") || !header.iter().any(|h| h == "cost_le") {
        return Err(Error::Parse {
            row: 0,
            field: "header".into(),
            message: "extended schema needs `id`, `p1..p17` and `cost_le` columns".into(),
        });
    }
    let mut slots = Vec::with_capacity(header.len());
    for h in &header {
        let slot = match h.as_str() {
            "id" => Slot::Id,
            "cost_le" => Slot::Cost,
            other => match other.strip_prefix('p').and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if (1..=EXTENDED_VARIABLES).contains(&k) => Slot::Var(k - 1),
                _ => {
                    return Err(Error::Parse {
                        row: 0,
                        field: h.clone(),
                        message: "unknown column".into(),
                    })
                }
            },
        };
        slots.push(slot);
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            field: "record".into(),
            message: e.to_string(),
        })?;
        let mut out = ExtendedRecord {
            id: String::new(),
            values: vec![None; EXTENDED_VARIABLES],
            cost_le: f64::NAN,
        };
        for (slot, raw) in slots.iter().zip(rec.iter()) {
            match *slot {
                Slot::Id => out.id = raw.to_string(),
                Slot::Cost => out.cost_le = parse_field(row, "cost_le", raw)?,
                Slot::Var(k) if raw.is_empty() => out.values[k] = None,
                Slot::Var(k) => {
                    let v: f64 = parse_field(row, &format!("p{}", k + 1), raw)?;
                    if !v.is_finite() {
                        return Err(Error::Parse {
                            row,
                            field: format!("p{}", k + 1),
                            message: "non-finite value".into(),
                        });
                    }
                    out.values[k] = Some(v);
                }
            }
        }
        if out.id.is_empty() {
            return Err(Error::Parse {
                row,
                field: "id".into(),
                message: "empty id".into(),
            });
        }
        if !(out.cost_le.is_finite() && out.cost_le > 0.0) {
            return Err(Error::Parse {
                row,
                field: "cost_le".into(),
                message: "must be > 0".into(),
            });
        }
        if !seen.insert(out.id.clone()) {
            return Err(Error::Parse {
                row,
                field: "id".into(),
                message: format!("duplicate id `{}`", out.id),
            });
        }
        records.push(out);
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(ExtendedDataset { records })
}

#[derive(Clone, Copy)]
enum Slot {
    Id,
    Cost,
    Var(usize),
}

/// A run of pipe of one diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipeSegment<T> {
    pub diameter_mm: T,
    pub length_m: T,
}

/// Length-weighted mean diameter of a pipeline.
pub fn equivalent_diameter<T: Real>(segments: &[PipeSegment<T>]) -> Result<T> {
    if segments.is_empty() {
        return Err(Error::invalid("equivalent diameter needs at least one segment"));
    }
    let mut weighted = T::zero();
    let mut total = T::zero();
    for s in segments {
        if !(s.diameter_mm > T::zero() && s.length_m > T::zero()) {
            return Err(Error::invalid("pipe segments must have positive diameter and length"));
        }
        weighted += s.diameter_mm * s.length_m;
        total += s.length_m;
    }
    Ok(weighted / total)
}

/// Splits positionally: the first `boundary` cases train, the rest validate.
pub fn split(dataset: &Dataset, boundary: usize) -> Result<(Dataset, Dataset)> {
    if boundary == 0 || boundary >= dataset.len() {
        return Err(Error::invalid(format!(
            "split boundary {boundary} must lie in 1..{}",
            dataset.len()
        )));
    }
    let (a, b) = dataset.cases.split_at(boundary);
    Ok((
        Dataset::new(a.to_vec(), Role::Training)?,
        Dataset::new(b.to_vec(), Role::Validation)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableStats {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single case.
    pub sd: f64,
}

impl VariableStats {
    pub fn from_values(name: impl Into<String>, values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        VariableStats {
            name: name.into(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean,
            sd,
        }
    }
}

/// Per-variable summary: the four drivers followed by cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub variables: Vec<VariableStats>,
}

impl DescriptiveStats {
    pub fn get(&self, name: &str) -> Option<&VariableStats> {
        self.variables.iter().find(|v| v.name == name)
    }
}

pub fn describe(dataset: &Dataset) -> DescriptiveStats {
    let mut variables: Vec<VariableStats> = Driver::ALL
        .iter()
        .map(|&d| VariableStats::from_values(d.column(), &dataset.driver_column(d)))
        .collect();
    variables.push(VariableStats::from_values("cost_le", &dataset.costs()));
    DescriptiveStats { variables }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const HEADER: &str = "id,area_ha,length_m,valves,year,cost_le\n";

    #[test]
    fn parses_appendix_rows() {
        let ds = parse_dataset(
            &format!("{HEADER}M1,19,366,5,2014,247632\nM2,20,390,5,2014,226870\n"),
            Role::Training,
        )
        .unwrap();
        assert_eq!(ds.len(), 2);
        let m1 = &ds.cases()[0];
        assert_eq!((m1.area_ha, m1.length_m, m1.valves, m1.year, m1.cost_le), (19.0, 366.0, 5, 2014, 247632.0));
        let m2 = &ds.cases()[1];
        assert_eq!((m2.area_ha, m2.length_m, m2.valves, m2.year, m2.cost_le), (20.0, 390.0, 5, 2014, 226870.0));
        assert_eq!(ds.role(), Role::Training);
    }

    #[test]
    fn empty_body_is_rejected() {
        assert_eq!(parse_dataset(HEADER, Role::Training), Err(Error::EmptyDataset));
    }

    #[test]
    fn bad_rows_name_row_and_field() {
        let err = parse_dataset(&format!("{HEADER}M1,19,366,5,2014,247632\nM2,-3,390,5,2014,1\n"), Role::Training)
            .unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, ref field, .. } if field == "area_ha"));

        let err = parse_dataset(&format!("{HEADER}M1,19,abc,5,2014,247632\n"), Role::Training).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, ref field, .. } if field == "length_m"));

        let err = parse_dataset(&format!("{HEADER}M1,19,366,0,2014,247632\n"), Role::Training).unwrap_err();
        assert!(matches!(err, Error::Parse { ref field, .. } if field == "valves"));

        let err = parse_dataset(&format!("{HEADER}M1,19,366,5,1980,247632\n"), Role::Training).unwrap_err();
        assert!(matches!(err, Error::Parse { ref field, .. } if field == "year"));

        let err = parse_dataset(&format!("{HEADER}M1,19,366,5\n"), Role::Training).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = parse_dataset(&format!("{HEADER}M1,19,366,5,2014,1\nM1,20,390,5,2014,2\n"), Role::Training)
            .unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, ref field, .. } if field == "id"));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let err = parse_dataset("id,area,length_m,valves,year,cost_le\nM1,1,1,1,2014,1\n", Role::Training).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 0, .. }));
    }

    #[test]
    fn equivalent_diameter_examples() {
        let seg = |d, l| PipeSegment { diameter_mm: d, length_m: l };
        assert_relative_eq!(equivalent_diameter(&[seg(225.0, 500.0)]).unwrap(), 225.0);
        assert_relative_eq!(equivalent_diameter(&[seg(225.0, 100.0), seg(315.0, 100.0)]).unwrap(), 270.0);
        // (225*300 + 313.4*100) / 400
        assert_relative_eq!(
            equivalent_diameter(&[seg(225.0, 300.0), seg(313.4, 100.0)]).unwrap(),
            247.1,
            epsilon = 1e-9
        );
        assert!(equivalent_diameter::<f64>(&[]).is_err());
    }

    fn tiny(n: usize) -> Dataset {
        let cases = (0..n)
            .map(|i| ProjectCase::new(format!("C{i}"), 10.0 + i as f64, 100.0, 3, 2014, 1000.0).unwrap())
            .collect();
        Dataset::new(cases, Role::Combined).unwrap()
    }

    #[test]
    fn split_bounds() {
        let (a, b) = split(&tiny(2), 1).unwrap();
        assert_eq!((a.len(), b.len()), (1, 1));
        assert_eq!(a.role(), Role::Training);
        assert_eq!(b.role(), Role::Validation);
        assert!(split(&tiny(2), 0).is_err());
        assert!(split(&tiny(2), 2).is_err());
    }

    #[test]
    fn describe_single_case() {
        let s = describe(&tiny(1));
        let area = s.get("area_ha").unwrap();
        assert_eq!((area.min, area.max, area.mean, area.sd), (10.0, 10.0, 10.0, 0.0));
    }

    #[test]
    fn extended_schema_allows_missing_columns() {
        let text = "id,p1,p3,p6,p14,p15,cost_le\nA,19,366,5,2014,,247632\nB,20,390,5,2014,1,226870\n";
        let ds = parse_extended(text).unwrap();
        assert_eq!(ds.records.len(), 2);
        assert_eq!(ds.records[0].values[0], Some(19.0));
        assert_eq!(ds.records[0].values[14], None);
        assert_eq!(ds.records[1].values[14], Some(1.0));
        let names: Vec<_> = ds.complete_variables().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["P1", "P3", "P6", "P14"]);
    }

    #[test]
    fn extended_schema_rejects_unknown_columns() {
        assert!(parse_extended("id,p18,cost_le\nA,1,2\n").is_err());
        assert!(parse_extended("id,p1\nA,1\n").is_err());
    }

    #[test]
    fn driver_names() {
        assert_eq!(Driver::parse("length"), Some(Driver::Length));
        assert_eq!(Driver::parse("P14"), Some(Driver::Year));
        assert_eq!(Driver::parse("area_ha"), Some(Driver::Area));
        assert_eq!(Driver::parse("cost"), None);
    }
}
