//! Grouped statistics over a filtered table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{csv_line, number_text, round_half_even};
use crate::stats::{quantile_sorted, sorted_finite, Moments};
use crate::table::{Column, ColumnKind, Table};

/// Grouping columns with more distinct values than this are refused.
pub const MAX_GROUP_LEVELS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AggSpec {
    Count,
    Proportion,
    Mean,
    Median,
    Mode,
    Sum,
    Min,
    Max,
    Sd,
    Variance,
    Iqr,
    Quantile(f64),
    Ps,
}

impl AggSpec {
    fn needs_numbers(self) -> bool {
        !matches!(self, AggSpec::Count | AggSpec::Proportion | AggSpec::Mode)
    }
}

impl fmt::Display for AggSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggSpec::Count => f.write_str("Count"),
            AggSpec::Proportion => f.write_str("Proportion"),
            AggSpec::Mean => f.write_str("Mean"),
            AggSpec::Median => f.write_str("Median"),
            AggSpec::Mode => f.write_str("Mode"),
            AggSpec::Sum => f.write_str("Sum"),
            AggSpec::Min => f.write_str("Min"),
            AggSpec::Max => f.write_str("Max"),
            AggSpec::Sd => f.write_str("SD"),
            AggSpec::Variance => f.write_str("Variance"),
            AggSpec::Iqr => f.write_str("IQR"),
            AggSpec::Quantile(p) => write!(f, "Q{}", number_text(*p)),
            AggSpec::Ps => f.write_str("PS"),
        }
    }
}

impl FromStr for AggSpec {
    type Err = Error;

    /// Case-insensitive names; quantiles as `q0.9`, `quantile(0.9)` or `p90`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let spec = match lower.as_str() {
            "count" | "n" => AggSpec::Count,
            "proportion" | "prop" => AggSpec::Proportion,
            "mean" => AggSpec::Mean,
            "median" => AggSpec::Median,
            "mode" => AggSpec::Mode,
            "sum" => AggSpec::Sum,
            "min" => AggSpec::Min,
            "max" => AggSpec::Max,
            "sd" => AggSpec::Sd,
            "variance" | "var" => AggSpec::Variance,
            "iqr" => AggSpec::Iqr,
            "ps" => AggSpec::Ps,
            other => {
                let p = if let Some(rest) = other.strip_prefix("quantile(").and_then(|r| r.strip_suffix(')')) {
                    rest.parse::<f64>().ok()
                } else if let Some(rest) = other.strip_prefix('q') {
                    rest.parse::<f64>().ok()
                } else if let Some(rest) = other.strip_prefix('p') {
                    rest.parse::<f64>().ok().map(|x| x / 100.0)
                } else {
                    None
                };
                match p {
                    Some(p) if (0.0..=1.0).contains(&p) => AggSpec::Quantile(p),
                    Some(_) => return Err(Error::Domain(format!("quantile probability out of [0, 1] in {s:?}"))),
                    None => return Err(Error::Config(format!("unknown statistic {s:?}"))),
                }
            }
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AggValue {
    Number(f64),
    Text(String),
    Missing,
}

impl AggValue {
    fn from_option(x: Option<f64>) -> Self {
        x.map_or(AggValue::Missing, AggValue::Number)
    }

    fn text(&self) -> String {
        match self {
            AggValue::Number(x) => number_text(*x),
            AggValue::Text(s) => s.clone(),
            AggValue::Missing => "NA".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRow {
    pub group: Vec<String>,
    pub variable: String,
    pub stat: String,
    pub value: AggValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub group_keys: Vec<String>,
    pub rows: Vec<QueryRow>,
    /// Decimals applied by the exporters.
    pub round: u32,
}

impl QueryResult {
    /// Copy with numeric values rounded half-to-even.
    pub fn rounded(&self, digits: u32) -> Self {
        let mut out = self.clone();
        for r in &mut out.rows {
            if let AggValue::Number(x) = r.value {
                r.value = AggValue::Number(round_half_even(x, digits));
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv_line(
            self.group_keys
                .iter()
                .map(String::as_str)
                .chain(["Variable", "Stat", "Value"]),
        );
        for r in &self.rounded(self.round).rows {
            let value = r.value.text();
            out.push_str(&csv_line(
                r.group
                    .iter()
                    .map(String::as_str)
                    .chain([r.variable.as_str(), r.stat.as_str(), value.as_str()]),
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rounded(self.round)).expect("query result serializes")
    }
}

fn group_labels(col: &Column) -> Result<Vec<String>> {
    let levels = col.levels();
    if levels.labels.len() > MAX_GROUP_LEVELS {
        return Err(Error::Refused(format!(
            "column {:?} has {} distinct values; group by a column with at most {MAX_GROUP_LEVELS} levels or filter it first",
            col.name(),
            levels.labels.len()
        )));
    }
    Ok((0..col.len()).map(|i| levels.text(i).to_string()).collect())
}

fn mode_number(values: &[f64]) -> Option<f64> {
    let sorted = sorted_finite(values);
    let mut best: Option<(f64, usize)> = None;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().position(|&x| x != sorted[i]).map_or(sorted.len(), |k| i + k);
        if best.is_none_or(|(_, c)| j - i > c) {
            best = Some((sorted[i], j - i));
        }
        i = j;
    }
    best.map(|(x, _)| x)
}

fn mode_text<'a>(values: impl Iterator<Item = &'a str>) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    let max = counts.values().copied().max()?;
    counts.into_iter().find(|&(_, c)| c == max).map(|(s, _)| s.to_string())
}

fn non_missing_text(col: &Column, rows: &[usize]) -> Vec<String> {
    rows.iter()
        .filter_map(|&i| col.cell_text(i).map(|c| c.into_owned()))
        .collect()
}

fn numeric_stat(spec: AggSpec, sorted: &[f64], group_sum: f64, total_sum: f64) -> Option<f64> {
    let q = |p: f64| quantile_sorted(sorted, p).ok();
    match spec {
        AggSpec::Mean => Moments::of(sorted).map(|m| m.mean),
        AggSpec::Median => q(0.5),
        AggSpec::Sum => Some(group_sum),
        AggSpec::Min => sorted.first().copied(),
        AggSpec::Max => sorted.last().copied(),
        AggSpec::Sd => Moments::of(sorted).and_then(|m| m.sample_variance()).map(f64::sqrt),
        AggSpec::Variance => Moments::of(sorted).and_then(|m| m.sample_variance()),
        AggSpec::Iqr => Some(q(0.75)? - q(0.25)?),
        AggSpec::Quantile(p) => q(p),
        AggSpec::Ps => (total_sum != 0.0).then(|| 100.0 * group_sum / total_sum),
        AggSpec::Count | AggSpec::Proportion | AggSpec::Mode => unreachable!("not a numeric-only statistic"),
    }
}

/// Grouped statistics over the rows selected by `mask` (all rows when
/// `None`). Count is the number of rows in the group cell; every other
/// statistic uses the non-missing values of the value variable, and
/// infinities are dropped from numeric statistics. Values are kept exact;
/// `round` is applied by the exporters.
pub fn aggregate(
    table: &Table,
    mask: Option<&[bool]>,
    group_vars: &[String],
    value_vars: &[String],
    stats: &[AggSpec],
    round: u32,
) -> Result<QueryResult> {
    if let Some(m) = mask {
        if m.len() != table.n_rows() {
            return Err(Error::Config(format!(
                "mask has {} entries for {} rows",
                m.len(),
                table.n_rows()
            )));
        }
    }
    for s in stats {
        if let AggSpec::Quantile(p) = s {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Domain(format!("quantile probability {p} outside [0, 1]")));
            }
        }
    }
    let group_cols = group_vars
        .iter()
        .map(|g| table.column(g))
        .collect::<Result<Vec<_>>>()?;
    let value_cols = value_vars
        .iter()
        .map(|v| table.column(v))
        .collect::<Result<Vec<_>>>()?;
    for col in &value_cols {
        if col.kind() != ColumnKind::Numeric {
            if let Some(s) = stats.iter().find(|s| s.needs_numbers()) {
                return Err(Error::TypeMismatch {
                    column: col.name().to_string(),
                    message: format!("{s} needs a numeric column, found {}", col.kind()),
                });
            }
        }
    }
    let labels = group_cols
        .iter()
        .map(|c| group_labels(c))
        .collect::<Result<Vec<_>>>()?;

    let selected: Vec<usize> = (0..table.n_rows())
        .filter(|&i| mask.is_none_or(|m| m[i]))
        .collect();
    let mut cells: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
    for &i in &selected {
        let key = labels.iter().map(|l| l[i].clone()).collect();
        cells.entry(key).or_default().push(i);
    }

    let mut totals: HashMap<&str, f64> = HashMap::new();
    for col in &value_cols {
        if let Some(v) = col.numbers() {
            let s = selected.iter().map(|&i| v[i]).filter(|x| x.is_finite()).sum();
            totals.insert(col.name(), s);
        }
    }

    let mut rows = Vec::with_capacity(cells.len() * value_cols.len() * stats.len());
    for (key, members) in &cells {
        for col in &value_cols {
            let numbers = col
                .numbers()
                .map(|v| sorted_finite(&members.iter().map(|&i| v[i]).collect::<Vec<_>>()));
            let group_sum = numbers.as_ref().map_or(0.0, |s| s.iter().sum());
            for &spec in stats {
                let value = match spec {
                    AggSpec::Count => AggValue::Number(members.len() as f64),
                    AggSpec::Proportion => AggValue::Number(members.len() as f64 / selected.len() as f64),
                    AggSpec::Mode => match &numbers {
                        Some(s) => AggValue::from_option(mode_number(s)),
                        None => {
                            let texts = non_missing_text(col, members);
                            mode_text(texts.iter().map(String::as_str)).map_or(AggValue::Missing, AggValue::Text)
                        }
                    },
                    _ => {
                        let sorted = numbers.as_deref().unwrap_or_default();
                        AggValue::from_option(numeric_stat(spec, sorted, group_sum, totals[col.name()]))
                    }
                };
                rows.push(QueryRow {
                    group: key.clone(),
                    variable: col.name().to_string(),
                    stat: spec.to_string(),
                    value,
                });
            }
        }
    }
    Ok(QueryResult {
        group_keys: group_vars.to_vec(),
        rows,
        round,
    })
}
