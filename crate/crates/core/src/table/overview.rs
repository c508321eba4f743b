use serde::{Deserialize, Serialize};

use super::{ColumnKind, Table};
use crate::format::{fixed_text, Grid};

/// Dataset-level counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OverviewSummary {
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_numeric: usize,
    pub n_categorical: usize,
    pub n_text: usize,
    pub n_logical: usize,
    pub n_date: usize,
    pub n_zero_variance: usize,
    pub n_cols_with_missing: usize,
    pub n_complete_rows: usize,
}

impl OverviewSummary {
    pub fn pct_cols_with_missing(&self) -> f64 {
        if self.n_cols == 0 {
            0.0
        } else {
            100.0 * self.n_cols_with_missing as f64 / self.n_cols as f64
        }
    }

    pub fn pct_complete_rows(&self) -> f64 {
        if self.n_rows == 0 {
            0.0
        } else {
            100.0 * self.n_complete_rows as f64 / self.n_rows as f64
        }
    }

    /// Two-column `Descriptions`/`Obs` layout.
    pub fn to_grid(&self, round: u32) -> Grid {
        let pct = |x: f64| format!("{}%", fixed_text(Some(x), round));
        let rows = [
            ("Sample size (Nrow)", self.n_rows.to_string()),
            ("No. of Variables (Ncol)", self.n_cols.to_string()),
            ("No. of Numeric Variables", self.n_numeric.to_string()),
            ("No. of Factor Variables", self.n_categorical.to_string()),
            ("No. of Text Variables", self.n_text.to_string()),
            ("No. of Logical Variables", self.n_logical.to_string()),
            ("No. of Date Variables", self.n_date.to_string()),
            ("No. of Zero variance Variables (Uniform)", self.n_zero_variance.to_string()),
            ("%. of Variables having complete cases", pct(100.0 - self.pct_cols_with_missing())),
            ("No. of complete rows", self.n_complete_rows.to_string()),
            ("%. of complete rows", pct(self.pct_complete_rows())),
        ];
        Grid {
            header: vec!["Descriptions".into(), "Obs".into()],
            rows: rows.into_iter().map(|(d, v)| vec![d.to_string(), v]).collect(),
        }
    }
}

pub fn overview(table: &Table) -> OverviewSummary {
    let mut s = OverviewSummary {
        n_rows: table.n_rows(),
        n_cols: table.n_cols(),
        ..Default::default()
    };
    let mut row_complete = vec![true; table.n_rows()];
    for col in table.columns() {
        match col.kind() {
            ColumnKind::Numeric => s.n_numeric += 1,
            ColumnKind::Categorical => s.n_categorical += 1,
            ColumnKind::Text => s.n_text += 1,
            ColumnKind::Logical => s.n_logical += 1,
            ColumnKind::Date => s.n_date += 1,
        }
        if col.zero_variance() {
            s.n_zero_variance += 1;
        }
        let mut any_missing = false;
        for (i, complete) in row_complete.iter_mut().enumerate() {
            if col.is_missing(i) {
                any_missing = true;
                *complete = false;
            }
        }
        if any_missing {
            s.n_cols_with_missing += 1;
        }
    }
    s.n_complete_rows = row_complete.into_iter().filter(|c| *c).count();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Column;

    #[test]
    fn empty_table_all_zero() {
        assert_eq!(overview(&Table::empty()), OverviewSummary::default());
    }

    #[test]
    fn counts_missing_and_complete() {
        let t = Table::new(vec![
            Column::numeric("x", [Some(1.0), None, Some(3.0)]),
            Column::text("s", [Some("a"), Some("a"), None]),
            Column::logical("b", [Some(true), Some(false), Some(true)]),
        ])
        .unwrap();
        let o = overview(&t);
        assert_eq!(o.n_cols_with_missing, 2);
        assert_eq!(o.n_complete_rows, 1);
        assert_eq!(o.n_zero_variance, 1);
        assert_eq!(o.n_numeric + o.n_text + o.n_logical, 3);
    }
}
