//! Per-variable numeric summaries (optionally per group).

use serde::{Deserialize, Serialize};

use crate::config::ProfileConfig;
use crate::error::{Error, Result};
use crate::format::{number_text, round_half_even, rounded_text, Grid};
use crate::stats::{compensated_sum, quantile_sorted, sorted_finite, Moments};
use crate::table::{ColumnKind, Table};

/// Label of the ungrouped summary row.
pub const ALL_GROUP: &str = "All";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupBy {
    Overall,
    Group(String),
    /// Overall rows followed by per-group rows.
    Both(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileValue {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSummary {
    pub vname: String,
    pub group: String,
    pub tn: usize,
    pub n_neg: usize,
    pub n_zero: usize,
    pub n_pos: usize,
    pub n_neginf: usize,
    pub n_posinf: usize,
    pub n_missing: usize,
    pub pct_missing: f64,
    pub sum: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub sd: Option<f64>,
    pub cv: Option<f64>,
    pub iqr: Option<f64>,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub quantiles: Option<Vec<QuantileValue>>,
    pub n_outlier_low: Option<usize>,
    pub n_outlier_high: Option<usize>,
}

impl NumericSummary {
    /// Summarize one variable. NaN marks missing; infinities are counted but
    /// excluded from every moment and order statistic.
    pub fn of(vname: &str, group: &str, values: &[f64], config: &ProfileConfig) -> Self {
        let mut s = NumericSummary {
            vname: vname.to_string(),
            group: group.to_string(),
            tn: values.len(),
            n_neg: 0,
            n_zero: 0,
            n_pos: 0,
            n_neginf: 0,
            n_posinf: 0,
            n_missing: 0,
            pct_missing: 0.0,
            sum: 0.0,
            min: None,
            max: None,
            mean: None,
            median: None,
            sd: None,
            cv: None,
            iqr: None,
            skewness: None,
            kurtosis: None,
            quantiles: None,
            n_outlier_low: None,
            n_outlier_high: None,
        };
        for &x in values {
            if x.is_nan() {
                s.n_missing += 1;
            } else if x == f64::INFINITY {
                s.n_posinf += 1;
            } else if x == f64::NEG_INFINITY {
                s.n_neginf += 1;
            } else if x < 0.0 {
                s.n_neg += 1;
            } else if x == 0.0 {
                s.n_zero += 1;
            } else {
                s.n_pos += 1;
            }
        }
        if s.tn > 0 {
            s.pct_missing = 100.0 * s.n_missing as f64 / s.tn as f64;
        }
        let sorted = sorted_finite(values);
        s.sum = compensated_sum(&sorted);
        let Some(m) = Moments::of(&sorted) else {
            return s;
        };
        let q = |p: f64| quantile_sorted(&sorted, p).expect("non-empty finite sample");
        s.min = sorted.first().copied();
        s.max = sorted.last().copied();
        s.mean = Some(m.mean);
        s.median = Some(q(0.5));
        s.sd = m.sample_variance().map(f64::sqrt);
        s.cv = match s.sd {
            Some(sd) if m.mean != 0.0 => Some(sd / m.mean),
            _ => None,
        };
        let (q1, q3) = (q(0.25), q(0.75));
        s.iqr = Some(q3 - q1);
        if config.mes_of_shape {
            s.skewness = m.skewness();
            s.kurtosis = m.excess_kurtosis();
        }
        if let Some(ps) = &config.qnt {
            s.quantiles = Some(
                ps.iter()
                    .map(|&p| QuantileValue { p, value: q(p) })
                    .collect(),
            );
        }
        if config.outlier {
            let k = 1.5 * (q3 - q1);
            s.n_outlier_low = Some(sorted.iter().filter(|&&x| x < q1 - k).count());
            s.n_outlier_high = Some(sorted.iter().filter(|&&x| x > q3 + k).count());
        }
        s
    }

    /// Copy with every real-valued statistic rounded half-to-even.
    pub fn rounded(&self, digits: u32) -> Self {
        let r = |x: f64| round_half_even(x, digits);
        let ro = |x: Option<f64>| x.map(r);
        NumericSummary {
            pct_missing: r(self.pct_missing),
            sum: r(self.sum),
            min: ro(self.min),
            max: ro(self.max),
            mean: ro(self.mean),
            median: ro(self.median),
            sd: ro(self.sd),
            cv: ro(self.cv),
            iqr: ro(self.iqr),
            skewness: ro(self.skewness),
            kurtosis: ro(self.kurtosis),
            quantiles: self.quantiles.as_ref().map(|qs| {
                qs.iter()
                    .map(|q| QuantileValue {
                        p: q.p,
                        value: r(q.value),
                    })
                    .collect()
            }),
            ..self.clone()
        }
    }
}

/// Numeric columns profiled as continuous: kind Numeric with at least `nlim`
/// distinct values.
pub fn continuous_columns(table: &Table, nlim: usize) -> impl Iterator<Item = &crate::table::Column> {
    table
        .columns()
        .iter()
        .filter(move |c| c.kind() == ColumnKind::Numeric && c.distinct_count() >= nlim)
}

/// One summary per (continuous numeric variable × group cell), ordered by
/// variable name, then `All`, then group level.
pub fn numeric_summary(table: &Table, by: &GroupBy, config: &ProfileConfig) -> Result<Vec<NumericSummary>> {
    config.validate()?;
    let group = match by {
        GroupBy::Overall => None,
        GroupBy::Group(g) | GroupBy::Both(g) => {
            let col = table.column(g)?;
            if !col.profiled_kind(config.nlim).is_categorical_like() {
                return Err(Error::TypeMismatch {
                    column: g.clone(),
                    message: format!("group variable must be categorical, found {}", col.kind()),
                });
            }
            let levels = col.levels();
            let mut order: Vec<(String, Vec<usize>)> = Vec::new();
            let mut by_label: std::collections::BTreeMap<String, Vec<usize>> = Default::default();
            for i in 0..table.n_rows() {
                by_label.entry(levels.text(i).to_string()).or_default().push(i);
            }
            order.extend(by_label);
            Some((g.as_str(), order))
        }
    };
    let with_overall = !matches!(by, GroupBy::Group(_));
    let mut cols: Vec<_> = continuous_columns(table, config.nlim)
        .filter(|c| group.as_ref().is_none_or(|(g, _)| c.name() != *g))
        .collect();
    cols.sort_by(|a, b| a.name().cmp(b.name()));

    let mut out = Vec::new();
    for col in cols {
        let values = col.numbers().expect("numeric column");
        if with_overall {
            out.push(NumericSummary::of(col.name(), ALL_GROUP, values, config));
        }
        if let Some((_, cells)) = &group {
            for (label, rows) in cells {
                let sub: Vec<f64> = rows.iter().map(|&i| values[i]).collect();
                out.push(NumericSummary::of(col.name(), label, &sub, config));
            }
        }
    }
    Ok(out)
}

/// CSV in the conventional column order, values rounded at `round`.
pub fn to_csv(rows: &[NumericSummary], round: u32) -> String {
    to_grid(rows, round).to_csv()
}

/// Header and text cells in the CSV column order.
pub fn to_grid(rows: &[NumericSummary], round: u32) -> Grid {
    let with_shape = rows.iter().any(|r| r.skewness.is_some() || r.kurtosis.is_some());
    let qnt: Vec<f64> = rows
        .iter()
        .find_map(|r| r.quantiles.as_ref())
        .map(|qs| qs.iter().map(|q| q.p).collect())
        .unwrap_or_default();
    let with_outliers = rows.iter().any(|r| r.n_outlier_low.is_some());

    let mut header: Vec<String> = [
        "Vname", "Group", "TN", "nNeg", "nZero", "nPos", "NegInf", "PosInf", "NA_Value",
        "Per_of_Missing", "sum", "min", "max", "mean", "median", "SD", "CV", "IQR",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if with_shape {
        header.push("Skewness".into());
        header.push("Kurtosis".into());
    }
    header.extend(qnt.iter().map(|p| format!("{}%", number_text(p * 100.0))));
    if with_outliers {
        header.push("nOutlierLow".into());
        header.push("nOutlierHigh".into());
    }
    let mut cells = Vec::with_capacity(rows.len());
    for r in rows {
        let rt = |x: Option<f64>| rounded_text(x, round);
        let mut f = vec![
            r.vname.clone(),
            r.group.clone(),
            r.tn.to_string(),
            r.n_neg.to_string(),
            r.n_zero.to_string(),
            r.n_pos.to_string(),
            r.n_neginf.to_string(),
            r.n_posinf.to_string(),
            r.n_missing.to_string(),
            rt(Some(r.pct_missing)),
            rt(Some(r.sum)),
            rt(r.min),
            rt(r.max),
            rt(r.mean),
            rt(r.median),
            rt(r.sd),
            rt(r.cv),
            rt(r.iqr),
        ];
        if with_shape {
            f.push(rt(r.skewness));
            f.push(rt(r.kurtosis));
        }
        for p in &qnt {
            let v = r
                .quantiles
                .as_ref()
                .and_then(|qs| qs.iter().find(|q| q.p == *p))
                .map(|q| q.value);
            f.push(rt(v));
        }
        if with_outliers {
            let c = |x: Option<usize>| x.map_or_else(|| "NA".to_string(), |v| v.to_string());
            f.push(c(r.n_outlier_low));
            f.push(c(r.n_outlier_high));
        }
        cells.push(f);
    }
    Grid { header, rows: cells }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Column;

    fn cfg() -> ProfileConfig {
        ProfileConfig {
            nlim: 1,
            ..Default::default()
        }
    }

    #[test]
    fn constant_column() {
        let s = NumericSummary::of("x", ALL_GROUP, &[5.0, 5.0, 5.0], &cfg());
        assert_eq!(s.sd, Some(0.0));
        assert_eq!(s.cv, Some(0.0));
        assert_eq!(s.skewness, None);
        assert_eq!(s.kurtosis, None);
        assert_eq!(s.iqr, Some(0.0));
    }

    #[test]
    fn counts_and_infinities() {
        let v = [-2.0, 0.0, 3.0, f64::INFINITY, f64::NEG_INFINITY, f64::NAN, 5.0];
        let s = NumericSummary::of("x", ALL_GROUP, &v, &cfg());
        assert_eq!(
            (s.n_neg, s.n_zero, s.n_pos, s.n_neginf, s.n_posinf, s.n_missing),
            (1, 1, 2, 1, 1, 1)
        );
        assert_eq!(s.sum, 6.0);
        assert_eq!(s.max, Some(5.0));
        assert!((s.pct_missing - 100.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn all_missing_is_undefined_not_error() {
        let s = NumericSummary::of("x", ALL_GROUP, &[f64::NAN, f64::NAN], &cfg());
        assert_eq!(s.mean, None);
        assert_eq!(s.sum, 0.0);
        assert_eq!(s.pct_missing, 100.0);
        let csv = to_csv(&[s], 2);
        assert!(csv.lines().nth(1).unwrap().contains(",NA,"));
    }

    #[test]
    fn cv_undefined_at_zero_mean() {
        let s = NumericSummary::of("x", ALL_GROUP, &[-1.0, 1.0], &cfg());
        assert_eq!(s.cv, None);
    }

    #[test]
    fn optional_sections() {
        let config = ProfileConfig {
            nlim: 1,
            qnt: Some(vec![0.1, 0.9]),
            outlier: true,
            mes_of_shape: false,
            ..Default::default()
        };
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0];
        let s = NumericSummary::of("x", ALL_GROUP, &v, &config);
        assert_eq!(s.n_outlier_high, Some(1));
        assert_eq!(s.n_outlier_low, Some(0));
        assert_eq!(s.skewness, None);
        let qs = s.quantiles.as_ref().unwrap();
        assert!((qs[0].value - 1.8).abs() < 1e-12);
        let csv = to_csv(&[s], 2);
        let header = csv.lines().next().unwrap();
        assert!(header.ends_with("IQR,10%,90%,nOutlierLow,nOutlierHigh"));
    }

    #[test]
    fn grouping() {
        let t = Table::new(vec![
            Column::numeric("v", [Some(1.0), Some(2.0), Some(3.0), None, Some(5.0)]),
            Column::categorical("g", [Some("b"), Some("a"), Some("b"), Some("a"), None]),
        ])
        .unwrap();
        let rows = numeric_summary(&t, &GroupBy::Both("g".into()), &cfg()).unwrap();
        let groups: Vec<_> = rows.iter().map(|r| r.group.as_str()).collect();
        assert_eq!(groups, ["All", "NA", "a", "b"]);
        let tn: usize = rows[1..].iter().map(|r| r.tn).sum();
        assert_eq!(tn, rows[0].tn);

        assert!(matches!(
            numeric_summary(&t, &GroupBy::Group("nope".into()), &cfg()),
            Err(Error::UnknownColumn(_))
        ));
        assert!(numeric_summary(&t, &GroupBy::Group("v".into()), &cfg()).is_err());
    }

    #[test]
    fn no_qualifying_columns() {
        let t = Table::new(vec![Column::categorical("g", [Some("a")])]).unwrap();
        assert!(numeric_summary(&t, &GroupBy::Overall, &cfg()).unwrap().is_empty());
    }
}
