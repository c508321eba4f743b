//! Row filters and grouped custom aggregates.

mod aggregate;
mod filter;

pub use self::aggregate::{aggregate, AggSpec, AggValue, QueryResult, QueryRow, MAX_GROUP_LEVELS};
pub use self::filter::{apply_filter, parse_filter, CompareOp, FilterExpr, Literal};
