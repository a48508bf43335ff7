use crate::error::{Error, Result};

/// A nonempty collection of finite observations.
///
/// Values are kept in ascending order: every estimator in this crate is
/// permutation invariant, so the original order carries no information and
/// sorting once at construction makes all of them exactly order independent.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    sorted: Vec<f64>,
}

impl Sample {
    /// Builds a sample, rejecting empty input and non-finite values.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    /// Builds a sample treating NaN entries as missing markers. Returns the
    /// sample and the number of dropped entries.
    pub fn strip_missing(values: impl IntoIterator<Item = f64>) -> Result<(Self, usize)> {
        let mut skipped = 0;
        let kept: Vec<f64> = values
            .into_iter()
            .filter(|v| {
                let missing = v.is_nan();
                skipped += missing as usize;
                !missing
            })
            .collect();
        Ok((Self::new(kept)?, skipped))
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Order statistics `X(1) <= ... <= X(n)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.len() as f64
    }

    /// Applies `x -> a*x + b` to every element (order reverses for `a < 0`).
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(self.sorted.iter().map(|&v| a * v + b).collect())
    }

    pub fn into_sorted(self) -> Vec<f64> {
        self.sorted
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl TryFrom<&[f64]> for Sample {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
        assert!(matches!(
            Sample::new(vec![1.0, f64::INFINITY]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            Sample::new(vec![f64::NAN]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn strips_missing() {
        let (s, skipped) = Sample::strip_missing([3.0, f64::NAN, 1.0, f64::NAN, 2.0]).unwrap();
        assert_eq!(skipped, 2);
        assert_eq!(s.sorted(), &[1.0, 2.0, 3.0]);
        assert_eq!(
            Sample::strip_missing([f64::NAN]).unwrap_err(),
            Error::EmptySample
        );
    }

    #[test]
    fn sorted_view() {
        let s = Sample::new(vec![5.0, -1.0, 2.0]).unwrap();
        assert_eq!(s.sorted(), &[-1.0, 2.0, 5.0]);
        assert_eq!(s.min(), -1.0);
        assert_eq!(s.max(), 5.0);
        assert_eq!(s.len(), 3);
        assert_eq!(s.mean(), 2.0);
    }
}
