//! Scalar-generic statistical kernels.

mod boxplot;
mod kde;
mod moments;
mod quantile;
mod special;

pub use self::boxplot::BoxStats;
pub use self::kde::{silverman_bandwidth, Kde, KDE_GRID_POINTS};
pub use self::moments::{compensated_sum, mean, moment_shape, std_dev, variance, Moments};
pub use self::quantile::{quantile, quantile_sorted, sorted_finite};
pub use self::special::{erfc, gamma_p, gamma_q, ln_gamma, normal_cdf, normal_quantile};
