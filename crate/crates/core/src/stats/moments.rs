use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Neumaier-compensated sum.
pub fn compensated_sum<T: Scalar>(values: &[T]) -> T {
    let (mut sum, mut carry) = (T::zero(), T::zero());
    for &x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Mean and population central moments `m_k = (1/n) Σ (x - mean)^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<T> {
    pub n: usize,
    pub mean: T,
    pub m2: T,
    pub m3: T,
    pub m4: T,
}

impl<T: Scalar> Moments<T> {
    /// Two-pass central moments; `None` for an empty sample.
    pub fn of(values: &[T]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = T::from_count(values.len());
        let mean = compensated_sum(values) / n;
        let (mut s2, mut s3, mut s4) = (T::zero(), T::zero(), T::zero());
        for &x in values {
            let d = x - mean;
            let d2 = d * d;
            s2 += d2;
            s3 += d2 * d;
            s4 += d2 * d2;
        }
        Some(Moments {
            n: values.len(),
            mean,
            m2: s2 / n,
            m3: s3 / n,
            m4: s4 / n,
        })
    }

    /// Sample variance with the `n - 1` denominator.
    pub fn sample_variance(&self) -> Option<T> {
        (self.n >= 2).then(|| self.m2 * T::from_count(self.n) / T::from_count(self.n - 1))
    }

    pub fn skewness(&self) -> Option<T> {
        (self.n >= 2 && self.m2 > T::zero()).then(|| self.m3 / self.m2.powf(T::lit(1.5)))
    }

    pub fn excess_kurtosis(&self) -> Option<T> {
        (self.n >= 2 && self.m2 > T::zero()).then(|| self.m4 / (self.m2 * self.m2) - T::lit(3.0))
    }
}

pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    Moments::of(values).map(|m| m.mean)
}

pub fn variance<T: Scalar>(values: &[T]) -> Option<T> {
    Moments::of(values).and_then(|m| m.sample_variance())
}

pub fn std_dev<T: Scalar>(values: &[T]) -> Option<T> {
    variance(values).map(T::sqrt)
}

/// Skewness `m3 / m2^(3/2)` and excess kurtosis `m4 / m2^2 - 3`.
pub fn moment_shape<T: Scalar>(values: &[T]) -> Result<(T, T)> {
    if values.len() < 2 {
        return Err(Error::Undefined("shape of fewer than two values"));
    }
    let m = Moments::of(values).expect("non-empty");
    match (m.skewness(), m.excess_kurtosis()) {
        (Some(s), Some(k)) => Ok((s, k)),
        _ => Err(Error::Undefined("shape at zero variance")),
    }
}
