//! Reference distributions: closed-form CDFs, generalized-inverse quantiles,
//! medians and samplers.

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sample::Sample;
use crate::specfun::{phi, phi_inv};

/// The parametric families used by the asymptotic formulas and simulations.
///
/// `Trimodal` is the fixed mixture of uniforms on `[0, 1]` (weight 0.25),
/// `[4, 5]` (0.5) and `[8, 9]` (0.25).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceDistribution {
    Normal { mu: f64, sigma: f64 },
    Uniform01,
    Exponential1,
    Pareto11,
    Trimodal,
    Poisson { lambda: f64 },
}

/// Number of Poisson terms scanned before the quantile search gives up and
/// returns the current index (the remaining tail is below f64 resolution).
const POISSON_MAX_TERMS: u32 = 100_000;

impl ReferenceDistribution {
    pub const STANDARD_NORMAL: Self = Self::Normal {
        mu: 0.0,
        sigma: 1.0,
    };

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::domain("mu", mu, "finite reals"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain("sigma", sigma, "(0, inf)"));
        }
        Ok(Self::Normal { mu, sigma })
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain("lambda", lambda, "(0, inf)"));
        }
        Ok(Self::Poisson { lambda })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Poisson { .. })
    }

    /// Left end of the support, when finite.
    pub fn support_min(&self) -> Option<f64> {
        match self {
            Self::Normal { .. } => None,
            Self::Uniform01 | Self::Exponential1 | Self::Trimodal | Self::Poisson { .. } => {
                Some(0.0)
            }
            Self::Pareto11 => Some(1.0),
        }
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain("x", x, "finite reals"));
        }
        Ok(self.cdf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => phi((x - mu) / sigma),
            Self::Uniform01 => x.clamp(0.0, 1.0),
            Self::Exponential1 => {
                if x <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(-x)
                }
            }
            Self::Pareto11 => {
                if x <= 1.0 {
                    0.0
                } else {
                    1.0 - 1.0 / x
                }
            }
            Self::Trimodal => trimodal_cdf(x),
            Self::Poisson { lambda } => {
                if x < 0.0 {
                    0.0
                } else {
                    poisson_cdf(lambda, x.floor() as u64)
                }
            }
        }
    }

    pub fn true_median(&self) -> f64 {
        match *self {
            Self::Normal { mu, .. } => mu,
            Self::Uniform01 => 0.5,
            Self::Exponential1 => std::f64::consts::LN_2,
            Self::Pareto11 => 2.0,
            Self::Trimodal => 4.5,
            Self::Poisson { lambda } => poisson_quantile(lambda, 0.5),
        }
    }

    /// Generalized inverse: the smallest `x` with `cdf(x) >= p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        let ok = if self.is_discrete() {
            p > 0.0 && p <= 1.0
        } else {
            p > 0.0 && p < 1.0
        };
        if !ok {
            let domain = if self.is_discrete() {
                "(0, 1]"
            } else {
                "(0, 1)"
            };
            return Err(Error::domain("p", p, domain));
        }
        Ok(self.quantile_unchecked(p))
    }

    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => mu + sigma * phi_inv(p),
            Self::Uniform01 => p,
            Self::Exponential1 => -libm::log1p(-p),
            Self::Pareto11 => 1.0 / (1.0 - p),
            Self::Trimodal => trimodal_quantile(p),
            Self::Poisson { lambda } => poisson_quantile(lambda, p),
        }
    }

    /// Draws `n` i.i.d. variates by inversion (the trimodal mixture uses
    /// composition: pick a mode by weight, then a uniform within it).
    pub fn sample(&self, rng: &mut RngStream, n: usize) -> Result<Sample> {
        if n == 0 {
            return Err(Error::InvalidConfig(
                "sample size must be at least 1".into(),
            ));
        }
        let mut buf = vec![0.0; n];
        self.fill(rng, &mut buf);
        Sample::new(buf)
    }

    /// Fills `out` with i.i.d. variates, in stream order.
    pub fn fill(&self, rng: &mut RngStream, out: &mut [f64]) {
        match *self {
            Self::Trimodal => {
                for v in out.iter_mut() {
                    let mode = rng.next_open01();
                    let u = rng.next_open01();
                    *v = if mode < 0.25 {
                        u
                    } else if mode < 0.75 {
                        4.0 + u
                    } else {
                        8.0 + u
                    };
                }
            }
            _ => {
                for v in out.iter_mut() {
                    *v = self.quantile_unchecked(rng.next_open01());
                }
            }
        }
    }
}

impl fmt::Display for ReferenceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Normal { mu, sigma } => write!(f, "normal({mu}, {sigma})"),
            Self::Uniform01 => f.write_str("uniform"),
            Self::Exponential1 => f.write_str("exponential"),
            Self::Pareto11 => f.write_str("pareto"),
            Self::Trimodal => f.write_str("trimodal"),
            Self::Poisson { lambda } => write!(f, "poisson({lambda})"),
        }
    }
}

fn trimodal_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < 1.0 {
        0.25 * x
    } else if x <= 4.0 {
        0.25
    } else if x < 5.0 {
        0.25 + 0.5 * (x - 4.0)
    } else if x <= 8.0 {
        0.75
    } else if x < 9.0 {
        0.75 + 0.25 * (x - 8.0)
    } else {
        1.0
    }
}

fn trimodal_quantile(p: f64) -> f64 {
    if p <= 0.25 {
        4.0 * p
    } else if p <= 0.75 {
        4.0 + (p - 0.25) * 2.0
    } else {
        8.0 + (p - 0.75) * 4.0
    }
}

fn ln_poisson_pmf(lambda: f64, k: u64) -> f64 {
    let k = k as f64;
    k * lambda.ln() - lambda - libm::lgamma(k + 1.0)
}

fn poisson_cdf(lambda: f64, k: u64) -> f64 {
    let mut sum = 0.0;
    for i in 0..=k {
        let term = ln_poisson_pmf(lambda, i).exp();
        sum += term;
        if i as f64 > lambda && term < sum * 1e-17 {
            break;
        }
    }
    sum.min(1.0)
}

/// Linear search from zero accumulating the PMF; adequate for small λ.
fn poisson_quantile(lambda: f64, p: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..POISSON_MAX_TERMS {
        let term = ln_poisson_pmf(lambda, k as u64).exp();
        sum += term;
        if sum >= p || (k as f64 > lambda && term < sum * 1e-17) {
            return k as f64;
        }
    }
    POISSON_MAX_TERMS as f64
}
