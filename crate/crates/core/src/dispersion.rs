//! Quantile absolute deviation (QAD) dispersion estimators.
//!
//! `QAD(X, p)` is the Hyndman-Fan Type 7 `p`-quantile of the absolute
//! deviations from the sample median. The median absolute deviation is the
//! `p = 0.5` case; the standard (SQAD) and optimal (OQAD) variants use
//! `p = ρ_s` and `p = ρ_o` with finite-sample consistency constants that make
//! them unbiased for the standard deviation under normality.

use std::fmt;

use crate::error::{Error, Result};
use crate::quantile::{hf7_quantile_sorted, RHO_O, RHO_S};
use crate::sample::Sample;

/// Asymptotic MAD consistency constant `1/Φ⁻¹(0.75)`, rounded.
pub const MAD_CONSTANT: f64 = 1.482602;

/// Which dispersion estimator produced a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Mad,
    Sqad,
    Oqad,
    Qad(f64),
}

impl Estimator {
    pub fn label(&self) -> String {
        match self {
            Estimator::Mad => "mad".into(),
            Estimator::Sqad => "sqad".into(),
            Estimator::Oqad => "oqad".into(),
            Estimator::Qad(p) => format!("qad:{p}"),
        }
    }

    /// Quantile order used on the absolute deviations.
    pub fn order(&self) -> f64 {
        match *self {
            Estimator::Mad => 0.5,
            Estimator::Sqad => RHO_S,
            Estimator::Oqad => RHO_O,
            Estimator::Qad(p) => p,
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionEstimate {
    pub value: f64,
    pub estimator: Estimator,
    pub n: usize,
    pub constant_applied: f64,
}

/// Estimators that ship with a finite-sample constant table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantFamily {
    Sqad,
    Oqad,
}

impl ConstantFamily {
    pub fn name(self) -> &'static str {
        match self {
            ConstantFamily::Sqad => "sqad",
            ConstantFamily::Oqad => "oqad",
        }
    }

    pub fn constants(self) -> &'static ConsistencyConstants {
        match self {
            ConstantFamily::Sqad => &ConsistencyConstants::SQAD,
            ConstantFamily::Oqad => &ConsistencyConstants::OQAD,
        }
    }
}

/// Finite-sample consistency constants: a table for `2 <= n <= 100` and the
/// extrapolation `K∞ (1 + α/n + β/n²)` beyond it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyConstants {
    pub family: ConstantFamily,
    /// `table[n - 2]` is the constant for sample size `n`.
    pub table: &'static [f64; 99],
    pub k_infinity: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub const TABLE_MAX_N: usize = 100;

#[rustfmt::skip]
const SQAD_TABLE: [f64; 99] = [
            1.7724, 1.3506, 1.3762, 1.1881, 1.1773, 1.1289, 1.1248, 1.0920, 1.0943,
    1.0764, 1.0738, 1.0630, 1.0637, 1.0533, 1.0537, 1.0482, 1.0468, 1.0419, 1.0429,
    1.0377, 1.0376, 1.0351, 1.0343, 1.0314, 1.0320, 1.0292, 1.0290, 1.0272, 1.0271,
    1.0251, 1.0253, 1.0238, 1.0235, 1.0223, 1.0224, 1.0210, 1.0210, 1.0201, 1.0199,
    1.0189, 1.0192, 1.0180, 1.0180, 1.0174, 1.0172, 1.0165, 1.0166, 1.0158, 1.0158,
    1.0152, 1.0152, 1.0146, 1.0146, 1.0141, 1.0140, 1.0135, 1.0137, 1.0130, 1.0131,
    1.0127, 1.0126, 1.0123, 1.0124, 1.0118, 1.0119, 1.0115, 1.0115, 1.0111, 1.0112,
    1.0108, 1.0108, 1.0106, 1.0106, 1.0102, 1.0103, 1.0100, 1.0100, 1.0097, 1.0097,
    1.0095, 1.0095, 1.0093, 1.0092, 1.0090, 1.0091, 1.0089, 1.0088, 1.0086, 1.0086,
    1.0084, 1.0084, 1.0082, 1.0082, 1.0081, 1.0081, 1.0079, 1.0079, 1.0078, 1.0077,
];

#[rustfmt::skip]
const OQAD_TABLE: [f64; 99] = [
            1.7729, 0.9788, 0.9205, 0.8194, 0.8110, 0.7792, 0.7828, 0.7600, 0.7535,
    0.7388, 0.7365, 0.7282, 0.7284, 0.7241, 0.7234, 0.7170, 0.7155, 0.7113, 0.7110,
    0.7083, 0.7088, 0.7068, 0.7056, 0.7030, 0.7024, 0.7006, 0.7006, 0.6995, 0.6998,
    0.6979, 0.6974, 0.6960, 0.6958, 0.6949, 0.6949, 0.6944, 0.6940, 0.6929, 0.6927,
    0.6918, 0.6918, 0.6913, 0.6914, 0.6907, 0.6904, 0.6897, 0.6896, 0.6891, 0.6892,
    0.6888, 0.6887, 0.6882, 0.6880, 0.6875, 0.6875, 0.6871, 0.6872, 0.6870, 0.6868,
    0.6863, 0.6862, 0.6859, 0.6859, 0.6857, 0.6858, 0.6854, 0.6853, 0.6850, 0.6849,
    0.6847, 0.6847, 0.6846, 0.6845, 0.6842, 0.6841, 0.6839, 0.6839, 0.6837, 0.6838,
    0.6836, 0.6834, 0.6833, 0.6832, 0.6831, 0.6830, 0.6829, 0.6830, 0.6827, 0.6827,
    0.6825, 0.6825, 0.6823, 0.6823, 0.6823, 0.6822, 0.6820, 0.6820, 0.6819, 0.6819,
];

impl ConsistencyConstants {
    pub const SQAD: ConsistencyConstants = ConsistencyConstants {
        family: ConstantFamily::Sqad,
        table: &SQAD_TABLE,
        k_infinity: 1.0,
        alpha: 0.762,
        beta: 0.967,
    };

    pub const OQAD: ConsistencyConstants = ConsistencyConstants {
        family: ConstantFamily::Oqad,
        table: &OQAD_TABLE,
        k_infinity: 0.6747309,
        alpha: 1.047,
        beta: 1.193,
    };

    /// Table value for `n <= 100`, extrapolation otherwise.
    pub fn get(&self, n: usize) -> Result<f64> {
        match n {
            0 | 1 => Err(Error::UndefinedConstant {
                estimator: self.family.name(),
                n,
            }),
            2..=TABLE_MAX_N => Ok(self.table[n - 2]),
            _ => Ok(self.predicted(n)),
        }
    }

    /// `K∞ (1 + α/n + β/n²)`.
    pub fn predicted(&self, n: usize) -> f64 {
        let n = n as f64;
        self.k_infinity * (1.0 + self.alpha / n + self.beta / (n * n))
    }
}

/// Default finite-sample consistency constant for SQAD or OQAD at size `n`.
pub fn consistency_constant(family: ConstantFamily, n: usize) -> Result<f64> {
    family.constants().get(n)
}

/// Writes `|x_i - center|` in ascending order into `out`, given ascending
/// `sorted` input, by merging the two monotone halves around `center`.
pub fn sorted_abs_deviations(sorted: &[f64], center: f64, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(sorted.len());
    let split = sorted.partition_point(|&v| v < center);
    let (mut left, mut right) = (split, split);
    // left walks down through values below center, right walks up.
    while left > 0 && right < sorted.len() {
        let dl = center - sorted[left - 1];
        let dr = sorted[right] - center;
        if dl <= dr {
            out.push(dl);
            left -= 1;
        } else {
            out.push(dr);
            right += 1;
        }
    }
    out.extend(sorted[..left].iter().rev().map(|&v| center - v));
    out.extend(sorted[right..].iter().map(|&v| v - center));
}

/// Unscaled `QAD` on ascending data; `scratch` receives the deviations.
pub fn qad_sorted(sorted: &[f64], p: f64, scratch: &mut Vec<f64>) -> f64 {
    let median = hf7_quantile_sorted(sorted, 0.5);
    sorted_abs_deviations(sorted, median, scratch);
    hf7_quantile_sorted(scratch, p)
}

fn check_constant(constant: f64) -> Result<()> {
    if constant > 0.0 && constant.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("constant", constant, "(0, inf)"))
    }
}

fn estimate(x: &Sample, estimator: Estimator, constant: f64) -> Result<DispersionEstimate> {
    let p = estimator.order();
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "[0, 1]"));
    }
    check_constant(constant)?;
    let mut scratch = Vec::new();
    let raw = qad_sorted(x.sorted(), p, &mut scratch);
    Ok(DispersionEstimate {
        value: constant * raw,
        estimator,
        n: x.len(),
        constant_applied: constant,
    })
}

/// `constant · Q(|X - median(X)|, p)`.
pub fn qad(x: &Sample, p: f64, constant: f64) -> Result<DispersionEstimate> {
    estimate(x, Estimator::Qad(p), constant)
}

/// Median absolute deviation; `mad(x, c)` equals `qad(x, 0.5, c)` bit for bit.
pub fn mad(x: &Sample, constant: f64) -> Result<DispersionEstimate> {
    estimate(x, Estimator::Mad, constant)
}

fn default_or(family: ConstantFamily, n: usize, constant: Option<f64>) -> Result<f64> {
    match constant {
        Some(c) => Ok(c),
        None => consistency_constant(family, n),
    }
}

/// Standard QAD: `K_{s,n} · QAD(X, ρ_s)`. Without an explicit constant the
/// tabulated/extrapolated one is used, which is undefined for `n = 1`.
pub fn sqad(x: &Sample, constant: Option<f64>) -> Result<DispersionEstimate> {
    let k = default_or(ConstantFamily::Sqad, x.len(), constant)?;
    estimate(x, Estimator::Sqad, k)
}

/// Optimal QAD: `K_{o,n} · QAD(X, ρ_o)`.
pub fn oqad(x: &Sample, constant: Option<f64>) -> Result<DispersionEstimate> {
    let k = default_or(ConstantFamily::Oqad, x.len(), constant)?;
    estimate(x, Estimator::Oqad, k)
}
