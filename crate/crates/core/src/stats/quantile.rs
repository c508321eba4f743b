use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite values of `values`, sorted ascending. Missing (NaN) and infinite
/// entries are dropped.
pub fn sorted_finite<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut v: Vec<T> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values are ordered"));
    v
}

/// Linear interpolation between order statistics at position `(n-1)p + 1`
/// (1-based). `sorted` must be ascending.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], p: T) -> Result<T> {
    if sorted.is_empty() {
        return Err(Error::Undefined("quantile of empty sample"));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Domain(format!("probability {p} outside [0,1]")));
    }
    let h = T::from_count(sorted.len() - 1) * p;
    let lo = h.floor();
    let i = lo.to_usize().expect("index fits");
    if i + 1 >= sorted.len() {
        return Ok(sorted[sorted.len() - 1]);
    }
    let frac = h - lo;
    Ok(sorted[i] + frac * (sorted[i + 1] - sorted[i]))
}

/// Quantile of unsorted finite values.
pub fn quantile<T: Scalar>(values: &[T], p: T) -> Result<T> {
    quantile_sorted(&sorted_finite(values), p)
}
