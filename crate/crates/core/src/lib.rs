//! Automated exploratory data analysis.
//!
//! Reads delimited tabular data, infers column kinds, and produces the
//! standard profiling battery: dataset overview, numeric summaries, frequency
//! tables, chi-squared / Cramér's V / information-value screens against a
//! target, custom filtered group aggregates, SVG plots and a self-contained
//! HTML report.
//!
//! The statistical kernels in [`stats`] are generic over [`Scalar`]
//! (`f32`/`f64`); table-level operations work in `f64`.

pub mod association;
pub mod categorical;
pub mod config;
pub mod error;
pub mod format;
pub mod numeric;
pub mod query;
pub mod report;
pub mod scalar;
pub mod stats;
pub mod table;
pub mod viz;

pub use config::ProfileConfig;
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use table::{CellValue, Column, ColumnKind, Table};

/// Double-precision kernel instantiations.
pub type Kde64 = stats::Kde<f64>;
pub type Kde32 = stats::Kde<f32>;
pub type BoxStats64 = stats::BoxStats<f64>;
pub type BoxStats32 = stats::BoxStats<f32>;
pub type Moments64 = stats::Moments<f64>;
pub type Moments32 = stats::Moments<f32>;
