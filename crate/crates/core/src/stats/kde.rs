use super::moments::std_dev;
use super::quantile::{quantile_sorted, sorted_finite};
use crate::scalar::Scalar;

pub const KDE_GRID_POINTS: usize = 512;

/// Above this many observations the estimate is computed from linearly
/// binned counts on the grid instead of exact kernel sums.
const EXACT_LIMIT: usize = 10_000;

/// Silverman's rule `0.9 · min(sd, IQR/1.34) · n^(-1/5)` over finite values.
///
/// Falls back to `sd` when the IQR is zero; `None` with fewer than two
/// distinct values.
pub fn silverman_bandwidth<T: Scalar>(values: &[T]) -> Option<T> {
    let sorted = sorted_finite(values);
    if sorted.len() < 2 || sorted[0] == sorted[sorted.len() - 1] {
        return None;
    }
    let sd = std_dev(&sorted)?;
    let iqr = quantile_sorted(&sorted, T::lit(0.75)).ok()? - quantile_sorted(&sorted, T::lit(0.25)).ok()?;
    let spread = if iqr > T::zero() { sd.min(iqr / T::lit(1.34)) } else { sd };
    let h = T::lit(0.9) * spread * T::from_count(sorted.len()).powf(T::lit(-0.2));
    (h > T::zero()).then_some(h)
}

fn gaussian<T: Scalar>(u: T) -> T {
    (-(u * u) / T::lit(2.0)).exp() / (T::lit(2.0) * T::PI()).sqrt()
}

/// Gaussian kernel density estimate on an equispaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Kde<T> {
    pub bandwidth: T,
    pub grid: Vec<T>,
    pub density: Vec<T>,
}

impl<T: Scalar> Kde<T> {
    /// Estimate with Silverman's bandwidth on `n_points` spanning
    /// `[min - 3h, max + 3h]`.
    pub fn estimate(values: &[T], n_points: usize) -> Option<Self> {
        let h = silverman_bandwidth(values)?;
        Self::with_bandwidth(values, h, n_points)
    }

    pub fn with_bandwidth(values: &[T], h: T, n_points: usize) -> Option<Self> {
        let data = sorted_finite(values);
        if data.is_empty() || !(h > T::zero()) || n_points < 2 {
            return None;
        }
        let three = T::lit(3.0);
        let lo = data[0] - three * h;
        let hi = data[data.len() - 1] + three * h;
        let step = (hi - lo) / T::from_count(n_points - 1);
        let grid: Vec<T> = (0..n_points).map(|i| lo + step * T::from_count(i)).collect();
        let density = if data.len() <= EXACT_LIMIT {
            grid.iter().map(|&x| density_at(&data, h, x)).collect()
        } else {
            binned(&data, h, lo, step, n_points)
        };
        Some(Kde {
            bandwidth: h,
            grid,
            density,
        })
    }

    /// Trapezoid-rule integral of the gridded density.
    pub fn trapezoid(&self) -> T {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / T::lit(2.0))
            .sum()
    }
}

/// Exact kernel sum at one point.
pub(crate) fn density_at<T: Scalar>(data: &[T], h: T, x: T) -> T {
    let n = T::from_count(data.len());
    data.iter().map(|&d| gaussian((x - d) / h)).sum::<T>() / (n * h)
}

fn binned<T: Scalar>(data: &[T], h: T, lo: T, step: T, n_points: usize) -> Vec<T> {
    let mut weights = vec![T::zero(); n_points];
    for &d in data {
        let pos = (d - lo) / step;
        let i = pos.floor().to_usize().unwrap_or(0).min(n_points - 2);
        let frac = pos - T::from_count(i);
        weights[i] += T::one() - frac;
        weights[i + 1] += frac;
    }
    let n = T::from_count(data.len());
    (0..n_points)
        .map(|j| {
            let x = lo + step * T::from_count(j);
            weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w > T::zero())
                .map(|(k, &w)| w * gaussian((x - (lo + step * T::from_count(k))) / h))
                .sum::<T>()
                / (n * h)
        })
        .collect()
}
