use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Profiling parameters shared by the statistics, plotting and report modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    /// Minimum distinct values for a numeric column to be profiled as continuous.
    pub nlim: usize,
    /// Maximum distinct levels (missing included) for a variable to be tabulated or plotted.
    pub clim: usize,
    /// Numeric columns with fewer distinct values than this are tabulated as levels
    /// in frequency tables and bar plots.
    pub freq_nlim: usize,
    /// Decimals for reported values.
    pub round: u32,
    /// Extra quantile probabilities to report.
    pub qnt: Option<Vec<f64>>,
    /// Report skewness and excess kurtosis.
    pub mes_of_shape: bool,
    /// Report Tukey-fence outlier counts.
    pub outlier: bool,
    /// Number of plots to emit per family (seeded choice); all when `None`.
    pub sample: Option<usize>,
    /// Positive class for information value.
    pub pclass: Option<String>,
    pub seed: u64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            nlim: 10,
            clim: 10,
            freq_nlim: 4,
            round: 2,
            qnt: None,
            mes_of_shape: true,
            outlier: false,
            sample: None,
            pclass: None,
            seed: 42,
        }
    }
}

impl ProfileConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nlim < 1 {
            return Err(Error::Config("nlim must be at least 1".into()));
        }
        if self.clim < 1 {
            return Err(Error::Config("clim must be at least 1".into()));
        }
        if let Some(q) = &self.qnt {
            if let Some(p) = q.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::Config(format!("quantile probability {p} outside [0,1]")));
            }
        }
        Ok(())
    }
}
