use super::quantile::{quantile_sorted, sorted_finite};
use crate::scalar::Scalar;

/// Five-number box summary with Tukey whiskers.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats<T> {
    pub q1: T,
    pub median: T,
    pub q3: T,
    /// Most extreme observation at or above `q1 - 1.5·IQR`.
    pub lower_whisker: T,
    /// Most extreme observation at or below `q3 + 1.5·IQR`.
    pub upper_whisker: T,
    /// Observations beyond the fences, ascending.
    pub outliers: Vec<T>,
}

impl<T: Scalar> BoxStats<T> {
    /// `None` when no finite values are present.
    pub fn of(values: &[T]) -> Option<Self> {
        let sorted = sorted_finite(values);
        if sorted.is_empty() {
            return None;
        }
        let q = |p: f64| quantile_sorted(&sorted, T::lit(p)).expect("non-empty");
        let (q1, median, q3) = (q(0.25), q(0.5), q(0.75));
        let (lo_fence, hi_fence) = tukey_fences(q1, q3);
        let inside = sorted.iter().copied().filter(|&x| x >= lo_fence && x <= hi_fence);
        let lower_whisker = inside.clone().next().unwrap_or(q1);
        let upper_whisker = inside.last().unwrap_or(q3);
        let outliers = sorted
            .iter()
            .copied()
            .filter(|&x| x < lo_fence || x > hi_fence)
            .collect();
        Some(BoxStats {
            q1,
            median,
            q3,
            lower_whisker,
            upper_whisker,
            outliers,
        })
    }
}

/// `(q1 - 1.5·IQR, q3 + 1.5·IQR)`.
pub(crate) fn tukey_fences<T: Scalar>(q1: T, q3: T) -> (T, T) {
    let k = T::lit(1.5) * (q3 - q1);
    (q1 - k, q3 + k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_tukey_example() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0];
        let b = BoxStats::of(&v).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (3.0, 5.0, 7.0));
        assert_eq!(b.upper_whisker, 8.0);
        assert_eq!(b.lower_whisker, 1.0);
        assert_eq!(b.outliers, vec![100.0]);
    }

    #[test]
    fn single_observation_degenerate() {
        let b = BoxStats::of(&[4.0f32]).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (4.0, 4.0, 4.0));
        assert!(b.outliers.is_empty());
    }
}
