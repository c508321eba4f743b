//! Frequency tables for categorical-like variables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ProfileConfig;
use crate::format::{fixed_text, round_half_even, Grid};
use crate::table::{Column, ColumnKind, Table};

pub const TOTAL_LEVEL: &str = "TOTAL";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub variable: String,
    /// Level text; `NA` for missing, `TOTAL` for the closing row.
    pub level: String,
    pub frequency: usize,
    /// Absent on `TOTAL` rows.
    pub percent: Option<f64>,
    pub cum_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub rows: Vec<FrequencyRow>,
}

/// `(level, count)` pairs, missing as `NA`, in ascending lexicographic order.
pub fn level_counts(col: &Column) -> Vec<(String, usize)> {
    let levels = col.levels();
    let mut counts = vec![0usize; levels.labels.len()];
    let mut missing = 0usize;
    for c in &levels.codes {
        match c {
            Some(c) => counts[*c as usize] += 1,
            None => missing += 1,
        }
    }
    let mut map: BTreeMap<String, usize> = levels.labels.into_iter().zip(counts).collect();
    if missing > 0 {
        *map.entry(crate::table::NA_LEVEL.to_string()).or_default() += missing;
    }
    map.into_iter().collect()
}

/// Variables eligible for tabulation: categorical-like columns, then
/// numeric columns with fewer than `freq_nlim` distinct values, each with at
/// most `clim` levels counting the missing pseudo-level.
pub fn tabulated_columns<'a>(table: &'a Table, config: &ProfileConfig) -> Vec<&'a Column> {
    let fits = |c: &Column| c.levels().count_with_missing() <= config.clim;
    let cats = table
        .columns()
        .iter()
        .filter(|c| c.kind().is_categorical_like() && fits(c));
    let nums = table.columns().iter().filter(|c| {
        c.kind() == ColumnKind::Numeric && c.distinct_count() < config.freq_nlim && fits(c)
    });
    cats.chain(nums).collect()
}

/// Frequencies of every tabulated variable with percents over all rows
/// (missing included) and a closing `TOTAL` row.
pub fn frequency_table(table: &Table, config: &ProfileConfig) -> FrequencyTable {
    let n = table.n_rows();
    let mut rows = Vec::new();
    for col in tabulated_columns(table, config) {
        let mut cum = 0usize;
        for (level, frequency) in level_counts(col) {
            cum += frequency;
            let pct = |k: usize| if n == 0 { 0.0 } else { 100.0 * k as f64 / n as f64 };
            rows.push(FrequencyRow {
                variable: col.name().to_string(),
                level,
                frequency,
                percent: Some(pct(frequency)),
                cum_percent: Some(pct(cum)),
            });
        }
        rows.push(FrequencyRow {
            variable: col.name().to_string(),
            level: TOTAL_LEVEL.to_string(),
            frequency: n,
            percent: None,
            cum_percent: None,
        });
    }
    FrequencyTable { rows }
}

impl FrequencyTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rounded(&self, digits: u32) -> Self {
        let r = |x: Option<f64>| x.map(|v| round_half_even(v, digits));
        FrequencyTable {
            rows: self
                .rows
                .iter()
                .map(|row| FrequencyRow {
                    percent: r(row.percent),
                    cum_percent: r(row.cum_percent),
                    ..row.clone()
                })
                .collect(),
        }
    }

    /// CSV with columns Variable, Valid, Frequency, Percent, CumPercent.
    pub fn to_csv(&self, round: u32) -> String {
        self.to_grid(round).to_csv()
    }

    pub fn to_grid(&self, round: u32) -> Grid {
        Grid {
            header: ["Variable", "Valid", "Frequency", "Percent", "CumPercent"]
                .map(String::from)
                .to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.variable.clone(),
                        r.level.clone(),
                        r.frequency.to_string(),
                        fixed_text(r.percent, round),
                        fixed_text(r.cum_percent, round),
                    ]
                })
                .collect(),
        }
    }
}
