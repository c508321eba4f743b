//! Column-oriented dataset model.
//!
//! Text-like columns are dictionary encoded; numeric columns store `f64` with
//! NaN as the missing marker (NaN never survives ingestion as a value).

mod csv;
mod infer;
mod overview;

use std::borrow::Cow;
use std::collections::{HashMap, HashSet};
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::number_text;

pub use self::csv::{read_csv, read_csv_path, write_csv, CsvOptions};
pub use self::infer::{
    infer_kinds, infer_kinds_with, parse_date, parse_logical, parse_number, KindManifest,
    NumberToken, DEFAULT_MAX_CATEGORICAL_LEVELS,
};
pub use self::overview::{overview, OverviewSummary};

/// Level text used for missing values in frequency and contingency tables.
pub const NA_LEVEL: &str = "NA";

const MISSING_CODE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub enum CellValue {
    Number(f64),
    Logical(bool),
    Text(String),
    Date(NaiveDate),
    Missing,
}

impl CellValue {
    pub fn is_missing(&self) -> bool {
        matches!(self, CellValue::Missing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Text,
    Logical,
    Date,
}

impl ColumnKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ColumnKind::Numeric => "numeric",
            ColumnKind::Categorical => "categorical",
            ColumnKind::Text => "text",
            ColumnKind::Logical => "logical",
            ColumnKind::Date => "date",
        }
    }

    /// Kinds whose values are treated as unordered levels.
    pub fn is_categorical_like(self) -> bool {
        matches!(
            self,
            ColumnKind::Categorical | ColumnKind::Text | ColumnKind::Logical
        )
    }
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dictionary-encoded text values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TextData {
    dict: Vec<String>,
    codes: Vec<u32>,
}

impl TextData {
    pub fn from_options<S: AsRef<str>>(values: impl IntoIterator<Item = Option<S>>) -> Self {
        let mut builder = TextBuilder::default();
        for v in values {
            match v {
                Some(s) => builder.push(s.as_ref()),
                None => builder.push_missing(),
            }
        }
        builder.finish()
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&str> {
        match self.codes[i] {
            MISSING_CODE => None,
            c => Some(&self.dict[c as usize]),
        }
    }

    pub fn dictionary(&self) -> &[String] {
        &self.dict
    }

    /// Per-row dictionary index, `None` when missing.
    pub fn code(&self, i: usize) -> Option<u32> {
        match self.codes[i] {
            MISSING_CODE => None,
            c => Some(c),
        }
    }

    fn take(&self, rows: &[usize]) -> Self {
        TextData::from_options(rows.iter().map(|&r| self.get(r)))
    }
}

#[derive(Debug, Default)]
pub(crate) struct TextBuilder {
    index: HashMap<String, u32>,
    dict: Vec<String>,
    codes: Vec<u32>,
}

impl TextBuilder {
    pub(crate) fn push(&mut self, s: &str) {
        let code = match self.index.get(s) {
            Some(&c) => c,
            None => {
                let c = self.dict.len() as u32;
                self.dict.push(s.to_string());
                self.index.insert(s.to_string(), c);
                c
            }
        };
        self.codes.push(code);
    }

    pub(crate) fn push_missing(&mut self) {
        self.codes.push(MISSING_CODE);
    }

    pub(crate) fn finish(self) -> TextData {
        TextData {
            dict: self.dict,
            codes: self.codes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    /// NaN marks a missing cell.
    Number(Vec<f64>),
    Logical(Vec<Option<bool>>),
    Date(Vec<Option<NaiveDate>>),
    Text(TextData),
}

impl ColumnData {
    fn len(&self) -> usize {
        match self {
            ColumnData::Number(v) => v.len(),
            ColumnData::Logical(v) => v.len(),
            ColumnData::Date(v) => v.len(),
            ColumnData::Text(t) => t.len(),
        }
    }

    fn take(&self, rows: &[usize]) -> Self {
        match self {
            ColumnData::Number(v) => ColumnData::Number(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Logical(v) => ColumnData::Logical(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Date(v) => ColumnData::Date(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Text(t) => ColumnData::Text(t.take(rows)),
        }
    }
}

/// Level labels and per-row level indices for a column viewed categorically.
#[derive(Debug, Clone, PartialEq)]
pub struct Levels {
    /// Distinct non-missing level texts in first-appearance order.
    pub labels: Vec<String>,
    /// Per-row index into `labels`; `None` for missing cells.
    pub codes: Vec<Option<u32>>,
}

impl Levels {
    pub fn has_missing(&self) -> bool {
        self.codes.iter().any(Option::is_none)
    }

    /// Distinct levels counting the missing pseudo-level.
    pub fn count_with_missing(&self) -> usize {
        self.labels.len() + usize::from(self.has_missing())
    }

    /// Level text for row `i`, with missing rendered as [`NA_LEVEL`].
    pub fn text(&self, i: usize) -> &str {
        match self.codes[i] {
            Some(c) => &self.labels[c as usize],
            None => NA_LEVEL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    kind: ColumnKind,
    data: ColumnData,
    zero_variance: bool,
}

impl Column {
    /// Build a column, checking that `data` can carry `kind`.
    pub fn new(name: impl Into<String>, kind: ColumnKind, data: ColumnData) -> Result<Self> {
        let name = name.into();
        let ok = matches!(
            (&data, kind),
            (ColumnData::Number(_), ColumnKind::Numeric)
                | (ColumnData::Logical(_), ColumnKind::Logical)
                | (ColumnData::Date(_), ColumnKind::Date)
                | (ColumnData::Text(_), ColumnKind::Text | ColumnKind::Categorical)
        );
        if !ok {
            return Err(Error::TypeMismatch {
                column: name,
                message: format!("storage does not match kind {kind}"),
            });
        }
        let mut col = Column {
            name,
            kind,
            data,
            zero_variance: false,
        };
        col.zero_variance = col.distinct_count() == 1;
        Ok(col)
    }

    /// Numeric column; `None` and NaN become missing.
    pub fn numeric(name: impl Into<String>, values: impl IntoIterator<Item = Option<f64>>) -> Self {
        let data = values
            .into_iter()
            .map(|v| v.unwrap_or(f64::NAN))
            .collect();
        Column::new(name, ColumnKind::Numeric, ColumnData::Number(data)).expect("numeric storage")
    }

    pub fn categorical<S: AsRef<str>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = Option<S>>,
    ) -> Self {
        Column::new(
            name,
            ColumnKind::Categorical,
            ColumnData::Text(TextData::from_options(values)),
        )
        .expect("text storage")
    }

    pub fn text<S: AsRef<str>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = Option<S>>,
    ) -> Self {
        Column::new(
            name,
            ColumnKind::Text,
            ColumnData::Text(TextData::from_options(values)),
        )
        .expect("text storage")
    }

    pub fn logical(name: impl Into<String>, values: impl IntoIterator<Item = Option<bool>>) -> Self {
        Column::new(
            name,
            ColumnKind::Logical,
            ColumnData::Logical(values.into_iter().collect()),
        )
        .expect("logical storage")
    }

    pub fn date(
        name: impl Into<String>,
        values: impl IntoIterator<Item = Option<NaiveDate>>,
    ) -> Self {
        Column::new(
            name,
            ColumnKind::Date,
            ColumnData::Date(values.into_iter().collect()),
        )
        .expect("date storage")
    }

    /// Build from cell values of a declared kind.
    pub fn from_cells(name: impl Into<String>, kind: ColumnKind, cells: Vec<CellValue>) -> Result<Self> {
        let name = name.into();
        let mismatch = |i: usize, v: &CellValue| Error::TypeMismatch {
            column: name.clone(),
            message: format!("row {i}: {v:?} is not {kind}"),
        };
        let data = match kind {
            ColumnKind::Numeric => {
                let mut out = Vec::with_capacity(cells.len());
                for (i, c) in cells.iter().enumerate() {
                    out.push(match c {
                        CellValue::Number(x) => *x,
                        CellValue::Missing => f64::NAN,
                        v => return Err(mismatch(i, v)),
                    });
                }
                ColumnData::Number(out)
            }
            ColumnKind::Logical => {
                let mut out = Vec::with_capacity(cells.len());
                for (i, c) in cells.iter().enumerate() {
                    out.push(match c {
                        CellValue::Logical(b) => Some(*b),
                        CellValue::Missing => None,
                        v => return Err(mismatch(i, v)),
                    });
                }
                ColumnData::Logical(out)
            }
            ColumnKind::Date => {
                let mut out = Vec::with_capacity(cells.len());
                for (i, c) in cells.iter().enumerate() {
                    out.push(match c {
                        CellValue::Date(d) => Some(*d),
                        CellValue::Missing => None,
                        v => return Err(mismatch(i, v)),
                    });
                }
                ColumnData::Date(out)
            }
            ColumnKind::Categorical | ColumnKind::Text => {
                let mut b = TextBuilder::default();
                for (i, c) in cells.iter().enumerate() {
                    match c {
                        CellValue::Text(s) => b.push(s),
                        CellValue::Missing => b.push_missing(),
                        v => return Err(mismatch(i, v)),
                    }
                }
                ColumnData::Text(b.finish())
            }
        };
        Column::new(name, kind, data)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ColumnKind {
        self.kind
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn zero_variance(&self) -> bool {
        self.zero_variance
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Raw numeric storage (NaN = missing) for numeric columns.
    pub fn numbers(&self) -> Option<&[f64]> {
        match &self.data {
            ColumnData::Number(v) => Some(v),
            _ => None,
        }
    }

    pub fn get(&self, i: usize) -> CellValue {
        match &self.data {
            ColumnData::Number(v) if v[i].is_nan() => CellValue::Missing,
            ColumnData::Number(v) => CellValue::Number(v[i]),
            ColumnData::Logical(v) => v[i].map_or(CellValue::Missing, CellValue::Logical),
            ColumnData::Date(v) => v[i].map_or(CellValue::Missing, CellValue::Date),
            ColumnData::Text(t) => t
                .get(i)
                .map_or(CellValue::Missing, |s| CellValue::Text(s.to_string())),
        }
    }

    pub fn is_missing(&self, i: usize) -> bool {
        match &self.data {
            ColumnData::Number(v) => v[i].is_nan(),
            ColumnData::Logical(v) => v[i].is_none(),
            ColumnData::Date(v) => v[i].is_none(),
            ColumnData::Text(t) => t.code(i).is_none(),
        }
    }

    pub fn missing_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_missing(i)).count()
    }

    /// Text rendering of a cell as it appears in level labels and CSV output.
    pub fn cell_text(&self, i: usize) -> Option<Cow<'_, str>> {
        match &self.data {
            ColumnData::Number(v) if v[i].is_nan() => None,
            ColumnData::Number(v) => Some(Cow::Owned(number_text(v[i]))),
            ColumnData::Logical(v) => v[i].map(|b| Cow::Borrowed(logical_text(b))),
            ColumnData::Date(v) => v[i].map(|d| Cow::Owned(d.format("%Y-%m-%d").to_string())),
            ColumnData::Text(t) => t.get(i).map(Cow::Borrowed),
        }
    }

    /// Number of distinct non-missing values.
    pub fn distinct_count(&self) -> usize {
        match &self.data {
            ColumnData::Number(v) => v
                .iter()
                .filter(|x| !x.is_nan())
                .map(|x| canonical_bits(*x))
                .collect::<HashSet<_>>()
                .len(),
            ColumnData::Logical(v) => v.iter().flatten().collect::<HashSet<_>>().len(),
            ColumnData::Date(v) => v.iter().flatten().collect::<HashSet<_>>().len(),
            ColumnData::Text(t) => {
                let mut seen = vec![false; t.dict.len()];
                for &c in &t.codes {
                    if c != MISSING_CODE {
                        seen[c as usize] = true;
                    }
                }
                seen.into_iter().filter(|s| *s).count()
            }
        }
    }

    /// The column's values as levels.
    pub fn levels(&self) -> Levels {
        match &self.data {
            ColumnData::Text(t) => {
                // compact the dictionary to codes actually used
                let mut remap = vec![MISSING_CODE; t.dict.len()];
                let mut labels = Vec::new();
                let codes = t
                    .codes
                    .iter()
                    .map(|&c| {
                        if c == MISSING_CODE {
                            return None;
                        }
                        let slot = &mut remap[c as usize];
                        if *slot == MISSING_CODE {
                            *slot = labels.len() as u32;
                            labels.push(t.dict[c as usize].clone());
                        }
                        Some(*slot)
                    })
                    .collect();
                Levels { labels, codes }
            }
            ColumnData::Number(v) => {
                let mut index: HashMap<u64, u32> = HashMap::new();
                let mut labels = Vec::new();
                let codes = v
                    .iter()
                    .map(|&x| {
                        if x.is_nan() {
                            return None;
                        }
                        Some(*index.entry(canonical_bits(x)).or_insert_with(|| {
                            labels.push(number_text(x));
                            (labels.len() - 1) as u32
                        }))
                    })
                    .collect();
                Levels { labels, codes }
            }
            _ => {
                let mut index: HashMap<String, u32> = HashMap::new();
                let mut labels = Vec::new();
                let codes = (0..self.len())
                    .map(|i| {
                        let text = self.cell_text(i)?;
                        Some(match index.get(text.as_ref()) {
                            Some(&c) => c,
                            None => {
                                let c = labels.len() as u32;
                                labels.push(text.to_string());
                                index.insert(text.into_owned(), c);
                                c
                            }
                        })
                    })
                    .collect();
                Levels { labels, codes }
            }
        }
    }

    /// Kind used for profiling: numeric columns with fewer than `nlim`
    /// distinct values are treated as categorical.
    pub fn profiled_kind(&self, nlim: usize) -> ColumnKind {
        if self.kind == ColumnKind::Numeric && self.distinct_count() < nlim {
            ColumnKind::Categorical
        } else {
            self.kind
        }
    }

    fn take(&self, rows: &[usize]) -> Column {
        Column::new(self.name.clone(), self.kind, self.data.take(rows)).expect("same storage")
    }
}

pub(crate) fn logical_text(b: bool) -> &'static str {
    if b {
        "TRUE"
    } else {
        "FALSE"
    }
}

fn canonical_bits(x: f64) -> u64 {
    // +0 and -0 are one value
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

/// An ordered set of equal-length, uniquely named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    columns: Vec<Column>,
    n_rows: usize,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let n_rows = columns.first().map_or(0, Column::len);
        let mut names = HashSet::new();
        for c in &columns {
            if !names.insert(c.name()) {
                return Err(Error::DuplicateColumn(c.name().to_string()));
            }
            if c.len() != n_rows {
                return Err(Error::TypeMismatch {
                    column: c.name().to_string(),
                    message: format!("length {} differs from {}", c.len(), n_rows),
                });
            }
        }
        Ok(Table { columns, n_rows })
    }

    pub fn empty() -> Self {
        Table::default()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<Column> {
        self.columns
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name() == name)
    }

    /// Sub-table of the given rows, in the given order.
    pub fn take_rows(&self, rows: &[usize]) -> Table {
        Table {
            columns: self.columns.iter().map(|c| c.take(rows)).collect(),
            n_rows: rows.len(),
        }
    }

    /// Sub-table of rows where `mask` is true.
    pub fn filter_rows(&self, mask: &[bool]) -> Table {
        let rows: Vec<usize> = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        self.take_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_tracks_distinct_count() {
        let c = Column::numeric("x", [Some(5.0), None, Some(5.0)]);
        assert!(c.zero_variance());
        let c = Column::numeric("x", [Some(0.0), Some(-0.0)]);
        assert!(c.zero_variance());
        let c = Column::categorical("c", [Some("a"), Some("b"), None]);
        assert!(!c.zero_variance());
        let c = Column::numeric("x", [None, None]);
        assert!(!c.zero_variance());
    }

    #[test]
    fn rejects_bad_tables() {
        let a = Column::numeric("a", [Some(1.0)]);
        let b = Column::numeric("a", [Some(2.0)]);
        assert!(matches!(
            Table::new(vec![a.clone(), b]),
            Err(Error::DuplicateColumn(_))
        ));
        let c = Column::numeric("c", [Some(1.0), Some(2.0)]);
        assert!(Table::new(vec![a, c]).is_err());
    }

    #[test]
    fn kind_must_match_storage() {
        assert!(Column::new("x", ColumnKind::Numeric, ColumnData::Logical(vec![])).is_err());
        let err = Column::from_cells(
            "x",
            ColumnKind::Numeric,
            vec![CellValue::Number(1.0), CellValue::Text("a".into())],
        );
        assert!(err.is_err());
    }

    #[test]
    fn levels_render_numbers_shortest() {
        let c = Column::numeric("lat", [Some(40.639751), Some(40.6925), None, Some(40.6925)]);
        let l = c.levels();
        assert_eq!(l.labels, vec!["40.639751", "40.6925"]);
        assert_eq!(l.count_with_missing(), 3);
        assert_eq!(l.text(2), NA_LEVEL);
    }

    #[test]
    fn profiled_kind_demotes_low_cardinality_numerics() {
        let c = Column::numeric("x", [Some(1.0), Some(2.0), Some(3.0)]);
        assert_eq!(c.kind(), ColumnKind::Numeric);
        assert_eq!(c.profiled_kind(10), ColumnKind::Categorical);
        assert_eq!(c.profiled_kind(3), ColumnKind::Numeric);
    }

    #[test]
    fn filter_rows_keeps_masked() {
        let t = Table::new(vec![
            Column::numeric("x", [Some(1.0), Some(2.0), Some(3.0)]),
            Column::text("s", [Some("a"), None, Some("c")]),
        ])
        .unwrap();
        let f = t.filter_rows(&[true, false, true]);
        assert_eq!(f.n_rows(), 2);
        assert_eq!(f.column("s").unwrap().get(1), CellValue::Text("c".into()));
    }
}
