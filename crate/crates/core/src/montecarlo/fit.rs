use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Coefficients of `K_n = K∞ (1 + α/n + β/n²)` and the largest absolute
/// deviation between the fitted curve and the input over the fit range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub k_infinity: f64,
    pub alpha: f64,
    pub beta: f64,
    pub max_residual: f64,
}

impl FitResult {
    pub fn predict(&self, n: usize) -> f64 {
        let n = n as f64;
        self.k_infinity * (1.0 + self.alpha / n + self.beta / (n * n))
    }
}

/// Least-squares fit of `K_n / K∞ - 1` on `[1/n, 1/n²]` using the records
/// whose `n` falls in `n_range`. `K∞` is held fixed.
pub fn fit_constant_model(
    records: &[(usize, f64)],
    k_infinity: f64,
    n_range: RangeInclusive<usize>,
) -> Result<FitResult> {
    if !(k_infinity > 0.0 && k_infinity.is_finite()) {
        return Err(Error::domain("k_infinity", k_infinity, "(0, inf)"));
    }
    let rows: Vec<(usize, f64)> = records
        .iter()
        .copied()
        .filter(|(n, _)| n_range.contains(n))
        .collect();
    if rows.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 records with n in {}..={}, found {}",
            n_range.start(),
            n_range.end(),
            rows.len()
        )));
    }
    if let Some(&(n, k)) = rows.iter().find(|(n, k)| *n == 0 || !k.is_finite()) {
        return Err(Error::InvalidConfig(format!("bad record n = {n}, K = {k}")));
    }

    let a1: Vec<f64> = rows.iter().map(|&(n, _)| 1.0 / n as f64).collect();
    let a2: Vec<f64> = a1.iter().map(|x| x * x).collect();
    let y: Vec<f64> = rows.iter().map(|&(_, k)| k / k_infinity - 1.0).collect();
    let (alpha, beta) = solve_two_column(&a1, &a2, &y)?;

    let mut fit = FitResult {
        k_infinity,
        alpha,
        beta,
        max_residual: 0.0,
    };
    fit.max_residual = rows
        .iter()
        .map(|&(n, k)| (k - fit.predict(n)).abs())
        .fold(0.0, f64::max);
    Ok(fit)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least squares for a two-column design via modified Gram-Schmidt QR.
fn solve_two_column(a1: &[f64], a2: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let r11 = dot(a1, a1).sqrt();
    if r11 == 0.0 {
        return Err(Error::RankDeficient);
    }
    let q1: Vec<f64> = a1.iter().map(|x| x / r11).collect();
    let r12 = dot(&q1, a2);
    let v: Vec<f64> = a2.iter().zip(&q1).map(|(a, q)| a - r12 * q).collect();
    let r22 = dot(&v, &v).sqrt();
    if r22 <= 1e-10 * dot(a2, a2).sqrt() {
        return Err(Error::RankDeficient);
    }
    let q2: Vec<f64> = v.iter().map(|x| x / r22).collect();
    let c1 = dot(&q1, y);
    let c2 = dot(&q2, y);
    let beta = c2 / r22;
    let alpha = (c1 - r12 * beta) / r11;
    Ok((alpha, beta))
}
