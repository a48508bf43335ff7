//! Quantile and median estimators.
//!
//! * Hyndman-Fan Type 7 sample quantile (and the sample median built on it).
//! * Harrell-Davis quantile: a Beta-CDF weighted sum of all order statistics.
//! * Trimmed Harrell-Davis median (THDME): the Harrell-Davis median restricted
//!   to the centered highest density interval `[0.5 - D/2, 0.5 + D/2]` of the
//!   `Beta((n+1)/2, (n+1)/2)` weight distribution.
//!
//! The `*_sorted` functions take order statistics directly and skip
//! validation; they back the Monte-Carlo hot loops.

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::specfun::inc_beta;

/// `Φ(1) - Φ(-1)`: the share of a normal distribution within one standard
/// deviation of the mean.
pub const RHO_S: f64 = 0.682_689_492_137_085_9;

/// The order `p` maximising the asymptotic Gaussian efficiency of the
/// quantile absolute deviation.
pub const RHO_O: f64 = 0.861_678_977_787_423;

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(name, p, "[0, 1]"))
    }
}

/// Hyndman-Fan Type 7 quantile: linear interpolation between `X(⌊h⌋)` and
/// `X(⌈h⌉)` with `h = (n - 1)p + 1`.
pub fn hf7_quantile(x: &Sample, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(hf7_quantile_sorted(x.sorted(), p))
}

/// [`hf7_quantile`] on ascending, nonempty data with `p ∈ [0, 1]`.
#[inline]
pub fn hf7_quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor();
    let i = lo as usize;
    let lower = sorted[i];
    let frac = h - lo;
    if frac == 0.0 {
        return lower;
    }
    let upper = sorted[i + 1];
    if upper == lower {
        return lower;
    }
    // The clamp keeps the result monotone in p under rounding.
    (lower + frac * (upper - lower)).clamp(lower, upper)
}

/// Sample median: the middle order statistic, or the mean of the two middle
/// ones. Identical to `hf7_quantile(x, 0.5)`.
pub fn sample_median(x: &Sample) -> f64 {
    hf7_quantile_sorted(x.sorted(), 0.5)
}

/// Harrell-Davis weights `W_i = I_{i/n}(α, β) - I_{(i-1)/n}(α, β)` with
/// `α = (n+1)q`, `β = (n+1)(1-q)`.
pub fn hd_weights(n: usize, q: f64) -> Result<Vec<f64>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("q", q, "(0, 1)"));
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let nf = n as f64;
    let a = (nf + 1.0) * q;
    let b = (nf + 1.0) * (1.0 - q);
    let mut prev = 0.0;
    let weights = (1..=n)
        .map(|i| {
            let cur = inc_beta(i as f64 / nf, a, b);
            let w = cur - prev;
            prev = cur;
            w
        })
        .collect();
    Ok(weights)
}

/// Harrell-Davis quantile estimate of order `q ∈ (0, 1)`.
pub fn hd_quantile(x: &Sample, q: f64) -> Result<f64> {
    let w = hd_weights(x.len(), q)?;
    Ok(dot(&w, x.sorted()))
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(w, x)| w * x).sum()
}

/// Width `D ∈ (0, 1]` of the centered highest density interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HdiWidth(f64);

impl HdiWidth {
    pub const STANDARD: HdiWidth = HdiWidth(RHO_S);
    pub const OPTIMAL: HdiWidth = HdiWidth(RHO_O);
    pub const FULL: HdiWidth = HdiWidth(1.0);

    pub fn new(width: f64) -> Result<Self> {
        if width > 0.0 && width <= 1.0 {
            Ok(Self(width))
        } else {
            Err(Error::domain("D", width, "(0, 1]"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `(L, R) = (0.5 - D/2, 0.5 + D/2)`.
    pub fn bounds(self) -> (f64, f64) {
        (0.5 - self.0 / 2.0, 0.5 + self.0 / 2.0)
    }
}

/// Precomputed trimmed Harrell-Davis median weights for one sample size.
///
/// Uses a discrete grid rather than the continuous weight integral: CDF values are taken at
/// `i/n` for `i = ⌊Ln⌋..=⌈Rn⌉`, clamped into `[L, R]` and rescaled by
/// `I_R - I_L`; their successive differences weight order statistics
/// `⌊Ln⌋+1 ..= ⌈Rn⌉`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThdWeights {
    n: usize,
    /// Zero-based index of the first weighted order statistic.
    offset: usize,
    weights: Vec<f64>,
}

impl ThdWeights {
    pub fn median(n: usize, width: HdiWidth) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if n == 1 {
            return Ok(Self {
                n,
                offset: 0,
                weights: vec![1.0],
            });
        }
        let nf = n as f64;
        let ab = (nf + 1.0) / 2.0;
        let (left, right) = width.bounds();
        let cdf_left = inc_beta(left, ab, ab);
        let cdf_right = inc_beta(right, ab, ab);
        let span = cdf_right - cdf_left;
        let cdf = |u: f64| {
            let u = u.clamp(left, right);
            (inc_beta(u, ab, ab) - cdf_left) / span
        };
        let i_left = (left * nf).floor() as usize;
        let i_right = ((right * nf).ceil() as usize).min(n);
        let cdfs: Vec<f64> = (i_left..=i_right).map(|i| cdf(i as f64 / nf)).collect();
        let mut weights: Vec<f64> = cdfs.windows(2).map(|w| w[1] - w[0]).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self {
            n,
            offset: i_left,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Zero-based index of the first order statistic with a weight.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights expanded to all `n` order statistics (zeros outside the HDI).
    pub fn full_weights(&self) -> Vec<f64> {
        let mut full = vec![0.0; self.n];
        full[self.offset..self.offset + self.weights.len()].copy_from_slice(&self.weights);
        full
    }

    /// Applies the weights to `n` ascending order statistics.
    #[inline]
    pub fn apply_sorted(&self, sorted: &[f64]) -> f64 {
        debug_assert_eq!(sorted.len(), self.n);
        dot(&self.weights, &sorted[self.offset..])
    }
}

/// Trimmed Harrell-Davis median with HDI width `D`.
pub fn thd_median(x: &Sample, width: HdiWidth) -> f64 {
    if x.len() == 1 {
        return x.sorted()[0];
    }
    ThdWeights::median(x.len(), width)
        .expect("nonempty sample")
        .apply_sorted(x.sorted())
}

/// Standard trimmed Harrell-Davis median (`D = ρ_s`).
pub fn sthdme(x: &Sample) -> f64 {
    thd_median(x, HdiWidth::STANDARD)
}

/// Optimal trimmed Harrell-Davis median (`D = ρ_o`).
pub fn othdme(x: &Sample) -> f64 {
    thd_median(x, HdiWidth::OPTIMAL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn s(v: &[f64]) -> Sample {
        Sample::try_from(v).unwrap()
    }

    #[test]
    fn hf7_examples() {
        assert_eq!(hf7_quantile(&s(&[1.0, 2.0, 3.0, 4.0]), 0.5).unwrap(), 2.5);
        assert_eq!(hf7_quantile(&s(&[10.0, 20.0, 30.0]), 0.25).unwrap(), 15.0);
        for p in [0.0, 0.3, 1.0] {
            assert_eq!(hf7_quantile(&s(&[7.0]), p).unwrap(), 7.0);
        }
        let x = s(&[4.0, -2.0, 9.0, 1.0]);
        assert_eq!(hf7_quantile(&x, 0.0).unwrap(), -2.0);
        assert_eq!(hf7_quantile(&x, 1.0).unwrap(), 9.0);
    }

    #[test]
    fn hf7_rejects_bad_p() {
        let x = s(&[1.0, 2.0]);
        assert!(hf7_quantile(&x, -0.1).is_err());
        assert!(hf7_quantile(&x, 1.1).is_err());
        assert!(hf7_quantile(&x, f64::NAN).is_err());
    }

    #[test]
    fn median_examples() {
        assert_eq!(sample_median(&s(&[3.0, 1.0, 2.0])), 2.0);
        assert_eq!(sample_median(&s(&[1.0, 2.0, 3.0, 4.0])), 2.5);
        assert_eq!(sample_median(&s(&[5.0; 5])), 5.0);
    }

    #[test]
    fn hd_examples() {
        assert_eq!(hd_quantile(&s(&[42.0]), 0.3).unwrap(), 42.0);
        assert_abs_diff_eq!(
            hd_quantile(&s(&[1.0, 4.0]), 0.5).unwrap(),
            2.5,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            hd_quantile(&s(&[1.0, 2.0, 3.0, 4.0, 5.0]), 0.5).unwrap(),
            3.0,
            epsilon = 1e-14
        );
        assert!(hd_quantile(&s(&[1.0]), 0.0).is_err());
        assert!(hd_quantile(&s(&[1.0]), 1.0).is_err());
    }

    #[test]
    fn hd_weights_sum_to_one() {
        for n in [1, 2, 5, 50, 1000] {
            for q in [0.1, 0.5, 0.9] {
                let w = hd_weights(n, q).unwrap();
                assert!(w.iter().all(|&w| w >= 0.0));
                assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hdi_width_domain() {
        assert!(HdiWidth::new(0.0).is_err());
        assert!(HdiWidth::new(1.0001).is_err());
        assert!(HdiWidth::new(f64::NAN).is_err());
        assert_eq!(HdiWidth::new(1.0).unwrap(), HdiWidth::FULL);
        assert_eq!(HdiWidth::new(0.5).unwrap().bounds(), (0.25, 0.75));
    }

    #[test]
    fn thd_examples() {
        let sym = s(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        for d in [0.1, 0.5, RHO_S, RHO_O, 1.0] {
            assert_abs_diff_eq!(
                thd_median(&sym, HdiWidth::new(d).unwrap()),
                3.0,
                epsilon = 1e-14
            );
        }
        assert_eq!(sthdme(&s(&[42.0])), 42.0);
        assert_eq!(othdme(&s(&[42.0])), 42.0);
        assert_abs_diff_eq!(sthdme(&s(&[1.0, 2.0, 3.0])), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(othdme(&s(&[3.0, 1.0, 2.0])), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn thd_full_width_is_harrell_davis() {
        let x = s(&[0.3, 9.1, -4.0, 2.2, 2.2, 17.5, 0.0]);
        assert_abs_diff_eq!(
            thd_median(&x, HdiWidth::FULL),
            hd_quantile(&x, 0.5).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn thd_trims_extreme_order_statistic() {
        // n = 4, D = ρ_s: L·n = 0.63, R·n = 3.37, so the grid is i = 0..=4 but
        // the CDF is flat beyond R, leaving X(4) a much smaller weight than in
        // the untrimmed estimator.
        let x = s(&[0.0, 0.0, 0.0, 100.0]);
        let thd = sthdme(&x);
        let hd = hd_quantile(&x, 0.5).unwrap();
        assert!(thd < hd, "{thd} vs {hd}");
        let w = ThdWeights::median(4, HdiWidth::STANDARD)
            .unwrap()
            .full_weights();
        let w_hd = hd_weights(4, 0.5).unwrap();
        assert!(w[3] < w_hd[3]);
        assert_abs_diff_eq!(thd, 100.0 * w[3], epsilon = 1e-12);
    }

    #[test]
    fn thd_weight_grid() {
        // n = 10, D = ρ_s: ⌊0.158655·10⌋ = 1, ⌈0.841345·10⌉ = 9.
        let w = ThdWeights::median(10, HdiWidth::STANDARD).unwrap();
        assert_eq!(w.offset(), 1);
        assert_eq!(w.weights().len(), 8);
        assert_abs_diff_eq!(w.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        // Symmetric weights around the center.
        for (a, b) in w.weights().iter().zip(w.weights().iter().rev()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }
}
