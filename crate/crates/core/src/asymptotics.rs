//! Population-level quantities: the asymptotic QAD value `v_p` of a
//! distribution, the asymptotic consistency constant `K_p`, the asymptotic
//! Gaussian efficiency of `QAD(X, p)` and the coverage of median-centered
//! intervals.
//!
//! `v_p` solves `F(M + v) - F(M - v) = p`: it is the `p`-quantile of `|X - M|`.
//! When the support is bounded below by `x_min` and `p` exceeds the critical
//! order `p* = F(2M - x_min)`, the left term vanishes and `F(M + v) = p`.

use std::f64::consts::{LN_2, PI};

use crate::distributions::ReferenceDistribution;
use crate::error::{Error, Result};
use crate::specfun::{phi, phi_inv};

/// Absolute tolerance of the `v_p` bisection.
pub const VP_TOLERANCE: f64 = 1e-10;
/// Upper limit of the bracket search for `v_p`.
pub const VP_MAX: f64 = 1e12;
/// Plateaus of the deviation CDF shorter than this (relative) width are
/// treated as rounding noise rather than a discontinuity of `v_p`.
const JUMP_MIN_WIDTH: f64 = 1e-6;

/// Asymptotic QAD value: a scalar, or the endpoints of a vertical jump when
/// the deviation CDF is flat at exactly level `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VpResult {
    Scalar(f64),
    Jump { lower: f64, upper: f64 },
}

impl VpResult {
    pub fn scalar(self) -> Option<f64> {
        match self {
            VpResult::Scalar(v) => Some(v),
            VpResult::Jump { .. } => None,
        }
    }

    pub fn lower(self) -> f64 {
        match self {
            VpResult::Scalar(v) => v,
            VpResult::Jump { lower, .. } => lower,
        }
    }

    pub fn upper(self) -> f64 {
        match self {
            VpResult::Scalar(v) => v,
            VpResult::Jump { upper, .. } => upper,
        }
    }

    pub fn is_jump(self) -> bool {
        matches!(self, VpResult::Jump { .. })
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        match self {
            VpResult::Scalar(v) => VpResult::Scalar(f(v)),
            VpResult::Jump { lower, upper } => VpResult::Jump {
                lower: f(lower),
                upper: f(upper),
            },
        }
    }
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("p", p, "(0, 1)"))
    }
}

/// Exact asymptotic `QAD(X, p)` for the reference families.
pub fn asymptotic_qad(d: &ReferenceDistribution, p: f64) -> Result<VpResult> {
    check_open_unit(p)?;
    let v = match *d {
        ReferenceDistribution::Normal { sigma, .. } => sigma * phi_inv((p + 1.0) / 2.0),
        ReferenceDistribution::Uniform01 => p / 2.0,
        ReferenceDistribution::Exponential1 => {
            // p* = F(2 ln 2) = 0.75
            if p <= 0.75 {
                p.asinh()
            } else {
                -LN_2 - libm::log1p(-p)
            }
        }
        ReferenceDistribution::Pareto11 => {
            // p* = F(3) = 2/3
            if p <= 2.0 / 3.0 {
                -1.0 / p + (1.0 / (p * p) + 4.0).sqrt()
            } else {
                (2.0 * p - 1.0) / (1.0 - p)
            }
        }
        ReferenceDistribution::Trimodal => {
            if p < 0.5 {
                p
            } else if p > 0.5 {
                2.0 * p + 2.5
            } else {
                return Ok(VpResult::Jump {
                    lower: 0.5,
                    upper: 3.5,
                });
            }
        }
        ReferenceDistribution::Poisson { .. } => {
            let r = solve_vp_numeric(|x| d.cdf_unchecked(x), d.true_median(), p, d.support_min())?;
            // Deviations of an integer variable from an integer median are integers.
            return Ok(r.map(|v| {
                let k = v.round();
                if (v - k).abs() < 1e-6 {
                    k
                } else {
                    v
                }
            }));
        }
    };
    Ok(VpResult::Scalar(v))
}

/// Left limit `F(x⁻)`, exact for CDFs whose jumps sit on representable points.
fn left_limit(cdf: &impl Fn(f64) -> f64, x: f64) -> f64 {
    cdf(x.next_down())
}

/// Solves `F(M + v) - F((M - v)⁻) = p` for `v >= 0` by bisection.
///
/// With `support_min = Some(x_min)` and `p > F(2M - x_min)`, the one-sided
/// equation `F(M + v) = p` is solved instead. The result is the generalized
/// inverse of the deviation CDF `G(v) = P(|X - M| <= v)`; when `G` equals `p`
/// over a whole interval the interval is returned as [`VpResult::Jump`].
pub fn solve_vp_numeric(
    cdf: impl Fn(f64) -> f64,
    median: f64,
    p: f64,
    support_min: Option<f64>,
) -> Result<VpResult> {
    check_open_unit(p)?;
    let one_sided = match support_min {
        Some(x_min) => p > cdf(2.0 * median - x_min),
        None => false,
    };
    let deviation_cdf = |v: f64| {
        if one_sided {
            cdf(median + v)
        } else {
            cdf(median + v) - left_limit(&cdf, median - v)
        }
    };

    let lower = generalized_inverse(&deviation_cdf, |g| g >= p).ok_or(Error::NoSolution { p })?;
    let upper = generalized_inverse(&deviation_cdf, |g| g > p).ok_or(Error::NoSolution { p })?;
    if upper - lower > JUMP_MIN_WIDTH * lower.max(1.0) {
        Ok(VpResult::Jump { lower, upper })
    } else {
        Ok(VpResult::Scalar(lower))
    }
}

/// Smallest `v >= 0` (to [`VP_TOLERANCE`]) with `accept(g(v))`, for a
/// nondecreasing `g`.
fn generalized_inverse(g: &impl Fn(f64) -> f64, accept: impl Fn(f64) -> bool) -> Option<f64> {
    if accept(g(0.0)) {
        return Some(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while !accept(g(hi)) {
        lo = hi;
        hi *= 2.0;
        if hi > VP_MAX {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= VP_TOLERANCE || mid <= lo || mid >= hi {
            break;
        }
        if accept(g(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `K_p = 1 / Φ⁻¹((p + 1)/2)`: makes `QAD(X, p)` asymptotically unbiased for
/// the standard deviation of a normal distribution.
pub fn asymptotic_constant(p: f64) -> Result<f64> {
    check_open_unit(p)?;
    Ok(1.0 / phi_inv((p + 1.0) / 2.0))
}

/// Asymptotic Gaussian efficiency of `QAD(X, p)` relative to the standard
/// deviation: `z² / (π p (1 - p) exp(z²))` with `z = Φ⁻¹((p + 1)/2)`.
pub fn asymptotic_gaussian_efficiency(p: f64) -> Result<f64> {
    check_open_unit(p)?;
    Ok(efficiency(p))
}

fn efficiency(p: f64) -> f64 {
    let z = phi_inv((p + 1.0) / 2.0);
    let z2 = z * z;
    z2 / (PI * p * (1.0 - p) * z2.exp())
}

/// Golden-section search bounds and tolerance for [`find_optimal_p`].
pub const OPTIMAL_P_BRACKET: (f64, f64) = (0.5, 0.999);
pub const OPTIMAL_P_TOLERANCE: f64 = 1e-10;

/// The order `p` that maximizes [`asymptotic_gaussian_efficiency`].
///
/// Golden-section search brackets the maximum; the efficiency is so flat
/// there that rounding limits it to a few 1e-9, so the result is refined by
/// bisecting the sign change of the analytic log-derivative.
pub fn find_optimal_p() -> f64 {
    let p = golden_section_max();
    let (mut lo, mut hi) = (p - 1e-6, p + 1e-6);
    if !(log_efficiency_slope(lo) > 0.0 && log_efficiency_slope(hi) < 0.0) {
        return p;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if log_efficiency_slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `d/dp ln e(p) = (2/z - 2z) z' - 1/p + 1/(1 - p)` with `z' = 1 / (2 φ(z))`.
fn log_efficiency_slope(p: f64) -> f64 {
    let z = phi_inv((p + 1.0) / 2.0);
    let pdf = (-0.5 * z * z).exp() / (2.0 * PI).sqrt();
    (2.0 / z - 2.0 * z) / (2.0 * pdf) - 1.0 / p + 1.0 / (1.0 - p)
}

fn golden_section_max() -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = OPTIMAL_P_BRACKET;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = efficiency(c);
    let mut fd = efficiency(d);
    while b - a > OPTIMAL_P_TOLERANCE {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = efficiency(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = efficiency(d);
        }
    }
    0.5 * (a + b)
}

/// Share of `d` covered by `[M - k·v, M + k·v]` where `M` is the median and
/// `v` the asymptotic MAD.
pub fn coverage_probability(d: &ReferenceDistribution, k: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain("k", k, "(0, inf)"));
    }
    let mad = match asymptotic_qad(d, 0.5)? {
        VpResult::Scalar(v) => v,
        VpResult::Jump { lower, upper } => return Err(Error::Discontinuous { lower, upper }),
    };
    let m = d.true_median();
    Ok(d.cdf_unchecked(m + k * mad) - d.cdf_unchecked(m - k * mad))
}

/// Standard normal `Φ(1) - Φ(-1)` computed from the CDF.
pub fn one_sigma_coverage() -> f64 {
    phi(1.0) - phi(-1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantile::{RHO_O, RHO_S};
    use approx::assert_abs_diff_eq;

    const N01: ReferenceDistribution = ReferenceDistribution::STANDARD_NORMAL;

    #[test]
    fn closed_form_examples() {
        let v = asymptotic_qad(&N01, 0.5).unwrap().scalar().unwrap();
        assert_abs_diff_eq!(v, 0.674_489_750_196_081_7, epsilon = 1e-15);
        let v = asymptotic_qad(&ReferenceDistribution::Exponential1, 0.75).unwrap();
        assert_abs_diff_eq!(v.scalar().unwrap(), LN_2, epsilon = 1e-15);
        let v = asymptotic_qad(&ReferenceDistribution::Pareto11, 2.0 / 3.0).unwrap();
        assert_abs_diff_eq!(v.scalar().unwrap(), 1.0, epsilon = 1e-15);
        let v = asymptotic_qad(&ReferenceDistribution::Pareto11, 0.5).unwrap();
        assert_abs_diff_eq!(v.scalar().unwrap(), 8f64.sqrt() - 2.0, epsilon = 1e-15);
        assert_eq!(
            asymptotic_qad(&ReferenceDistribution::Trimodal, 0.5).unwrap(),
            VpResult::Jump {
                lower: 0.5,
                upper: 3.5
            }
        );
        assert_eq!(
            asymptotic_qad(&ReferenceDistribution::Trimodal, 0.75).unwrap(),
            VpResult::Scalar(4.0)
        );
        assert_eq!(
            asymptotic_qad(&ReferenceDistribution::Trimodal, 0.25).unwrap(),
            VpResult::Scalar(0.25)
        );
        assert!(asymptotic_qad(&N01, 0.0).is_err());
        assert!(asymptotic_qad(&N01, 1.0).is_err());
    }

    #[test]
    fn scaled_normal() {
        let d = ReferenceDistribution::normal(10.0, 3.0).unwrap();
        let v = asymptotic_qad(&d, RHO_S).unwrap().scalar().unwrap();
        assert_abs_diff_eq!(v, 3.0, epsilon = 1e-13);
    }

    #[test]
    fn numeric_examples() {
        let v = solve_vp_numeric(phi, 0.0, one_sigma_coverage(), None).unwrap();
        assert_abs_diff_eq!(v.scalar().unwrap(), 1.0, epsilon = 1e-9);
        let u = ReferenceDistribution::Uniform01;
        let v = solve_vp_numeric(|x| u.cdf_unchecked(x), 0.5, 0.6, Some(0.0)).unwrap();
        assert_abs_diff_eq!(v.scalar().unwrap(), 0.3, epsilon = 1e-10);
        let pa = ReferenceDistribution::Pareto11;
        let v = solve_vp_numeric(|x| pa.cdf_unchecked(x), 2.0, 0.9, Some(1.0)).unwrap();
        assert_abs_diff_eq!(v.scalar().unwrap(), 8.0, epsilon = 1e-9);
    }

    #[test]
    fn numeric_detects_plateau() {
        let t = ReferenceDistribution::Trimodal;
        let v = solve_vp_numeric(|x| t.cdf_unchecked(x), 4.5, 0.5, Some(0.0)).unwrap();
        match v {
            VpResult::Jump { lower, upper } => {
                assert_abs_diff_eq!(lower, 0.5, epsilon = 1e-9);
                assert_abs_diff_eq!(upper, 3.5, epsilon = 1e-9);
            }
            other => panic!("expected jump, got {other:?}"),
        }
    }

    #[test]
    fn numeric_no_solution() {
        // A defective CDF that never exceeds 0.4.
        let r = solve_vp_numeric(|x| 0.4 * phi(x), 0.0, 0.5, None);
        assert_eq!(r, Err(Error::NoSolution { p: 0.5 }));
    }

    #[test]
    fn poisson_step_values() {
        let d = ReferenceDistribution::poisson(0.6).unwrap();
        // P(X = 0) ≈ 0.5488 > 0.5, so the MAD is zero.
        assert_eq!(asymptotic_qad(&d, 0.5).unwrap(), VpResult::Scalar(0.0));
        // P(|X| <= 1) = e^-0.6 (1 + 0.6) ≈ 0.878
        assert_eq!(asymptotic_qad(&d, 0.8).unwrap(), VpResult::Scalar(1.0));
        assert_eq!(asymptotic_qad(&d, 0.9).unwrap(), VpResult::Scalar(2.0));
        let d = ReferenceDistribution::poisson(4.0).unwrap();
        for i in 1..20 {
            let p = i as f64 / 20.0;
            let v = asymptotic_qad(&d, p).unwrap().lower();
            assert_eq!(v, v.round());
        }
    }

    #[test]
    fn constants_and_efficiency() {
        assert_abs_diff_eq!(
            asymptotic_constant(0.5).unwrap(),
            1.482_602_218_505_602,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(asymptotic_constant(RHO_S).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            asymptotic_constant(RHO_O).unwrap(),
            0.6747309,
            epsilon = 1e-7
        );
        assert_abs_diff_eq!(
            asymptotic_gaussian_efficiency(0.5).unwrap(),
            0.367_522_937_595_603,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            asymptotic_gaussian_efficiency(RHO_S).unwrap(),
            0.540_565_062_173_643,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            asymptotic_gaussian_efficiency(RHO_O).unwrap(),
            0.652_244_854_073_207,
            epsilon = 1e-12
        );
        assert!(asymptotic_constant(1.0).is_err());
        assert!(asymptotic_gaussian_efficiency(0.0).is_err());
    }

    #[test]
    fn optimal_p() {
        let g = golden_section_max();
        assert_abs_diff_eq!(g, 0.861_678_977_787_423, epsilon = 1e-8);
        let p = find_optimal_p();
        assert_abs_diff_eq!(p, 0.861_678_977_787_423, epsilon = 1e-12);
        assert_abs_diff_eq!(p, 0.861_678_977_787_423, epsilon = 1e-8);
        let e = efficiency(p);
        assert!(e >= efficiency(p - 1e-4) && e >= efficiency(p + 1e-4));
        assert_abs_diff_eq!(e, 0.652_244_854_073_207, epsilon = 1e-9);
    }

    #[test]
    fn coverage_examples() {
        let c = coverage_probability(&N01, 1.48).unwrap();
        assert_abs_diff_eq!(c, 0.682, epsilon = 5e-4);
        let c = coverage_probability(&ReferenceDistribution::Pareto11, 2.97).unwrap();
        assert_abs_diff_eq!(c, 0.776, epsilon = 5e-4);
        let c = coverage_probability(&ReferenceDistribution::Pareto11, 1.0).unwrap();
        assert_abs_diff_eq!(c, 0.5, epsilon = 1e-12);
        assert!(matches!(
            coverage_probability(&ReferenceDistribution::Trimodal, 1.0),
            Err(Error::Discontinuous { .. })
        ));
        assert!(coverage_probability(&N01, 0.0).is_err());
    }
}
