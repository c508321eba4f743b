//! Bivariate screens of each variable against a target: Pearson chi-squared,
//! Cramér's V, and information value via weight of evidence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ProfileConfig;
use crate::error::{Error, Result};
use crate::format::{rounded_text, Grid};
use crate::stats::{gamma_q, quantile_sorted, sorted_finite};
use crate::table::{Column, ColumnKind, Table};

/// Default number of equal-frequency bins for continuous IV predictors.
pub const DEFAULT_IV_BINS: usize = 10;

/// Observed counts of row levels × column levels, without all-zero margins.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    pub row_levels: Vec<String>,
    pub col_levels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub n: u64,
}

impl ContingencyTable {
    /// Build from a count matrix, dropping all-zero rows and columns.
    pub fn new(row_levels: Vec<String>, col_levels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != row_levels.len() || counts.iter().any(|r| r.len() != col_levels.len()) {
            return Err(Error::Domain("count matrix shape does not match level labels".into()));
        }
        let keep_rows: Vec<usize> = (0..row_levels.len())
            .filter(|&i| counts[i].iter().any(|&c| c > 0))
            .collect();
        let keep_cols: Vec<usize> = (0..col_levels.len())
            .filter(|&j| counts.iter().any(|r| r[j] > 0))
            .collect();
        let counts: Vec<Vec<u64>> = keep_rows
            .iter()
            .map(|&i| keep_cols.iter().map(|&j| counts[i][j]).collect())
            .collect();
        let n = counts.iter().flatten().sum();
        Ok(ContingencyTable {
            row_levels: keep_rows.iter().map(|&i| row_levels[i].clone()).collect(),
            col_levels: keep_cols.iter().map(|&j| col_levels[j].clone()).collect(),
            counts,
            n,
        })
    }

    /// Cross-tabulate two columns over pairwise-complete rows; levels sorted
    /// lexicographically.
    pub fn from_columns(rows: &Column, cols: &Column) -> Self {
        let (rl, rc) = sorted_levels(rows);
        let (cl, cc) = sorted_levels(cols);
        let mut counts = vec![vec![0u64; cl.len()]; rl.len()];
        for (r, c) in rc.iter().zip(&cc) {
            if let (Some(r), Some(c)) = (r, c) {
                counts[*r][*c] += 1;
            }
        }
        ContingencyTable::new(rl, cl, counts).expect("consistent shape")
    }

    pub fn n_rows(&self) -> usize {
        self.row_levels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_levels.len()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.n_cols())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }
}

/// Level labels sorted ascending and per-row indices into them.
fn sorted_levels(col: &Column) -> (Vec<String>, Vec<Option<usize>>) {
    let levels = col.levels();
    let mut order: Vec<usize> = (0..levels.labels.len()).collect();
    order.sort_by(|&a, &b| levels.labels[a].cmp(&levels.labels[b]));
    let mut rank = vec![0usize; order.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let labels = order.iter().map(|&i| levels.labels[i].clone()).collect();
    let codes = levels.codes.iter().map(|c| c.map(|c| rank[c as usize])).collect();
    (labels, codes)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquared {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson chi-squared test of independence, no continuity correction.
pub fn chi_squared_test(ct: &ContingencyTable) -> Result<ChiSquared> {
    let (r, c) = (ct.n_rows(), ct.n_cols());
    if r < 2 || c < 2 {
        return Err(Error::Degenerate { rows: r, cols: c });
    }
    let rt = ct.row_totals();
    let colt = ct.col_totals();
    let n = ct.n as f64;
    let mut stat = 0.0;
    for (i, row) in ct.counts.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let e = rt[i] as f64 * colt[j] as f64 / n;
            let d = o as f64 - e;
            stat += d * d / e;
        }
    }
    let df = (r - 1) * (c - 1);
    let p_value = gamma_q(df as f64 / 2.0, stat / 2.0)?;
    Ok(ChiSquared {
        statistic: stat,
        df,
        p_value,
    })
}

/// `sqrt(χ² / (n · min(r-1, c-1)))`, clamped to [0, 1].
pub fn cramers_v(chi_squared: f64, n: u64, r: usize, c: usize) -> f64 {
    let k = r.min(c).saturating_sub(1);
    if n == 0 || k == 0 {
        return 0.0;
    }
    (chi_squared / (n as f64 * k as f64)).sqrt().clamp(0.0, 1.0)
}

pub fn classify_association(v: f64) -> &'static str {
    if v < 0.05 {
        "Very Weak"
    } else if v < 0.15 {
        "Weak"
    } else if v < 0.25 {
        "Moderate"
    } else {
        "Strong"
    }
}

pub fn classify_predictive_power(iv: f64) -> &'static str {
    if iv < 0.02 {
        "Not Predictive"
    } else if iv < 0.1 {
        "Somewhat Predictive"
    } else if iv < 0.3 {
        "Medium Predictive"
    } else {
        "Highly Predictive"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InformationValue {
    /// Weight of evidence per predictor level, in level order.
    pub woe: Vec<(String, f64)>,
    pub iv: f64,
}

/// WoE/IV from per-level positive and negative counts. Levels with a zero
/// cell get 0.5 added to both counts; if either class total is zero, IV and
/// every WoE are 0.
pub fn woe_iv(levels: &[String], positives: &[f64], negatives: &[f64]) -> InformationValue {
    let g_total: f64 = positives.iter().sum();
    let b_total: f64 = negatives.iter().sum();
    if g_total == 0.0 || b_total == 0.0 {
        return InformationValue {
            woe: levels.iter().map(|l| (l.clone(), 0.0)).collect(),
            iv: 0.0,
        };
    }
    let mut iv = 0.0;
    let woe = levels
        .iter()
        .zip(positives.iter().zip(negatives))
        .map(|(l, (&g, &b))| {
            let (g, b) = if g == 0.0 || b == 0.0 { (g + 0.5, b + 0.5) } else { (g, b) };
            let (pg, pb) = (g / g_total, b / b_total);
            // cross-multiplied so equal shares of integer counts give exactly 0
            let w = ((g * b_total) / (b * g_total)).ln();
            iv += (pg - pb) * w;
            (l.clone(), w)
        })
        .collect();
    InformationValue { woe, iv }
}

/// Information value of `predictor` for the binary event `target == pclass`.
///
/// Rows missing either value are dropped. Numeric predictors with at least
/// `config.nlim` distinct values are cut into `n_bins` equal-frequency bins.
pub fn information_value(
    table: &Table,
    predictor: &str,
    target: &str,
    pclass: &str,
    config: &ProfileConfig,
    n_bins: usize,
) -> Result<InformationValue> {
    let pred = table.column(predictor)?;
    let tgt = table.column(target)?;
    let is_pos: Vec<Option<bool>> = (0..table.n_rows())
        .map(|i| tgt.cell_text(i).map(|t| t == pclass))
        .collect();
    let (labels, codes) = if pred.kind() == ColumnKind::Numeric && pred.distinct_count() >= config.nlim {
        equal_frequency_bins(pred.numbers().expect("numeric"), n_bins.max(1))
    } else {
        sorted_levels(pred)
    };
    let mut pos = vec![0.0; labels.len()];
    let mut neg = vec![0.0; labels.len()];
    for (code, p) in codes.iter().zip(&is_pos) {
        if let (Some(c), Some(p)) = (code, p) {
            if *p {
                pos[*c] += 1.0;
            } else {
                neg[*c] += 1.0;
            }
        }
    }
    // drop levels unseen among complete rows
    let keep: Vec<usize> = (0..labels.len()).filter(|&i| pos[i] + neg[i] > 0.0).collect();
    let labels: Vec<String> = keep.iter().map(|&i| labels[i].clone()).collect();
    let pos: Vec<f64> = keep.iter().map(|&i| pos[i]).collect();
    let neg: Vec<f64> = keep.iter().map(|&i| neg[i]).collect();
    Ok(woe_iv(&labels, &pos, &neg))
}

/// Equal-frequency bins from sample quantiles; finite values only.
fn equal_frequency_bins(values: &[f64], n_bins: usize) -> (Vec<String>, Vec<Option<usize>>) {
    let sorted = sorted_finite(values);
    let mut cuts: Vec<f64> = (1..n_bins)
        .filter_map(|k| quantile_sorted(&sorted, k as f64 / n_bins as f64).ok())
        .collect();
    cuts.dedup();
    let lo = sorted.first().copied().unwrap_or(0.0);
    let hi = sorted.last().copied().unwrap_or(0.0);
    let mut edges = vec![lo];
    edges.extend(cuts.iter().copied().filter(|&c| c > lo && c < hi));
    edges.push(hi);
    edges.dedup();
    let n_labels = edges.len().saturating_sub(1).max(1);
    let labels = (0..n_labels)
        .map(|i| {
            let a = edges[i];
            let b = *edges.get(i + 1).unwrap_or(&a);
            let open = if i == 0 { '[' } else { '(' };
            format!("{open}{},{}]", crate::format::number_text(a), crate::format::number_text(b))
        })
        .collect();
    let inner = &edges[1..edges.len().saturating_sub(1).max(1)];
    let codes = values
        .iter()
        .map(|&x| x.is_finite().then(|| inner.iter().filter(|&&c| x > c).count()))
        .collect();
    (labels, codes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationStat {
    pub variable: String,
    pub target: String,
    /// Distinct levels of the variable, missing counted, before row dropping.
    pub unique: usize,
    pub chi_squared: f64,
    pub p_value: f64,
    pub df: usize,
    pub iv_value: f64,
    pub cramers_v: f64,
    pub degree_label: String,
    pub predictive_label: String,
}

impl AssociationStat {
    pub fn rounded(&self, digits: u32) -> Self {
        let r = |x: f64| crate::format::round_half_even(x, digits);
        AssociationStat {
            chi_squared: crate::format::round_half_even(self.chi_squared, digits.max(3)),
            p_value: r(self.p_value),
            iv_value: r(self.iv_value),
            cramers_v: r(self.cramers_v),
            ..self.clone()
        }
    }
}

/// Columns screened against `target`: categorical-like columns, then numeric
/// columns with fewer than `nlim` distinct values; at most `clim` levels
/// (missing counted), excluding the target and zero-variance columns.
pub fn associated_columns<'a>(table: &'a Table, target: &str, config: &ProfileConfig) -> Vec<&'a Column> {
    let eligible = |c: &&Column| {
        c.name() != target && !c.zero_variance() && c.levels().count_with_missing() <= config.clim
    };
    let cats = table
        .columns()
        .iter()
        .filter(|c| c.kind().is_categorical_like())
        .filter(eligible);
    let nums = table
        .columns()
        .iter()
        .filter(|c| c.kind() == ColumnKind::Numeric && c.distinct_count() < config.nlim)
        .filter(eligible);
    cats.chain(nums).collect()
}

/// Screen every qualifying variable against `target`.
pub fn associate_all(table: &Table, target: &str, config: &ProfileConfig) -> Result<Vec<AssociationStat>> {
    config.validate()?;
    let tgt = table.column(target)?;
    let pclass = match &config.pclass {
        Some(p) => p.clone(),
        None => {
            let mut labels = tgt.levels().labels;
            labels.sort();
            labels.pop().unwrap_or_default()
        }
    };
    let (t_labels, _) = sorted_levels(tgt);
    let positive: Vec<bool> = t_labels.iter().map(|l| *l == pclass).collect();

    let mut out = Vec::new();
    for col in associated_columns(table, target, config) {
        let unique = col.levels().count_with_missing();
        let ct = ContingencyTable::from_columns(col, tgt);
        let (chi, df, p) = match chi_squared_test(&ct) {
            Ok(c) => (c.statistic, c.df, c.p_value),
            Err(Error::Degenerate { .. }) => (0.0, 0, 1.0),
            Err(e) => return Err(e),
        };
        let v = if df == 0 {
            0.0
        } else {
            cramers_v(chi, ct.n, ct.n_rows(), ct.n_cols())
        };
        // IV over the same pairwise-complete cross-tab
        let mut pos = vec![0.0; ct.n_rows()];
        let mut neg = vec![0.0; ct.n_rows()];
        let col_index: BTreeMap<&str, usize> = t_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        for (i, row) in ct.counts.iter().enumerate() {
            for (j, &cnt) in row.iter().enumerate() {
                if positive[col_index[ct.col_levels[j].as_str()]] {
                    pos[i] += cnt as f64;
                } else {
                    neg[i] += cnt as f64;
                }
            }
        }
        let iv = woe_iv(&ct.row_levels, &pos, &neg).iv;
        out.push(AssociationStat {
            variable: col.name().to_string(),
            target: target.to_string(),
            unique,
            chi_squared: chi,
            p_value: p,
            df,
            iv_value: iv,
            cramers_v: v,
            degree_label: classify_association(v).to_string(),
            predictive_label: classify_predictive_power(iv).to_string(),
        });
    }
    Ok(out)
}

/// CSV with columns Variable, Target, Unique, Chi-squared, p-value, df,
/// IV Value, Cramers V, Degree of Association, Predictive Power.
pub fn to_csv(rows: &[AssociationStat], round: u32) -> String {
    to_grid(rows, round).to_csv()
}

/// Header and text cells in the CSV column order.
pub fn to_grid(rows: &[AssociationStat], round: u32) -> Grid {
    let header = [
        "Variable",
        "Target",
        "Unique",
        "Chi-squared",
        "p-value",
        "df",
        "IV Value",
        "Cramers V",
        "Degree of Association",
        "Predictive Power",
    ]
    .map(String::from)
    .to_vec();
    let mut cells = Vec::with_capacity(rows.len());
    for r in rows {
        cells.push(vec![
            r.variable.clone(),
            r.target.clone(),
            r.unique.to_string(),
            rounded_text(Some(r.chi_squared), round.max(3)),
            rounded_text(Some(r.p_value), round),
            r.df.to_string(),
            rounded_text(Some(r.iv_value), round),
            rounded_text(Some(r.cramers_v), round),
            r.degree_label.clone(),
            r.predictive_label.clone(),
        ]);
    }
    Grid { header, rows: cells }
}
