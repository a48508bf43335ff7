//! Seeded, parallel Monte-Carlo runs under the standard normal model: finite
//! sample consistency constants, Gaussian efficiency of the scale estimators
//! and of the median estimators, and the constant-model fit.
//!
//! Repetitions for each `n` are split into `workers` contiguous blocks. Block
//! `i` draws from `RngStream::new(mix_seed(master_seed, n), i)` and owns its
//! accumulators; blocks are merged in index order, so the output depends only
//! on the configuration and never on thread scheduling.

mod fit;
mod moments;

pub use fit::{fit_constant_model, FitResult};
pub use moments::Moments;

use rayon::prelude::*;

use crate::dispersion::{consistency_constant, qad_sorted, ConstantFamily, MAD_CONSTANT};
use crate::error::{Error, Result};
use crate::quantile::{hf7_quantile_sorted, HdiWidth, ThdWeights, RHO_O, RHO_S};
use crate::rng::{mix_seed, RngStream};
use crate::sample::Sample;
use crate::specfun::{c4, phi_inv};

pub const DEFAULT_REPETITIONS: u64 = 100_000;
pub const DEFAULT_WORKERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    pub sample_sizes: Vec<usize>,
    pub repetitions: u64,
    pub master_seed: u64,
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(
        sample_sizes: Vec<usize>,
        repetitions: u64,
        master_seed: u64,
        workers: usize,
    ) -> Self {
        Self {
            sample_sizes,
            repetitions,
            master_seed,
            workers,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_sizes.is_empty() {
            return Err(Error::InvalidConfig("sample_sizes is empty".into()));
        }
        if let Some(n) = self.sample_sizes.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidConfig(format!("sample size {n} is below 2")));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig("repetitions must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantRecord {
    pub n: usize,
    pub k_sqad: f64,
    pub k_oqad: f64,
    pub reps_used: u64,
}

/// Efficiencies of several estimators relative to `baseline_label`, in a
/// fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRecord {
    pub n: usize,
    pub baseline_label: String,
    pub values: Vec<(String, f64)>,
}

impl EfficiencyRecord {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.values
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, v)| v)
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::domain("n", n as f64, "[2, inf)"))
    } else {
        Ok(())
    }
}

/// Sample standard deviation (divisor `n - 1`) divided by `c4(n)`, which is
/// unbiased for `σ` under normality.
pub fn unbiased_sd(x: &Sample) -> Result<f64> {
    check_len(x.len())?;
    Ok(sd_n1(x.sorted()) / c4(x.len())?)
}

fn sd_n1(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// `n · Var(values) / mean(values)²`, variance with divisor `len - 1`.
pub fn standardized_variance(values: &[f64], n: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let m: Moments = values.iter().copied().collect();
    standardized(&m, n)
}

fn standardized(m: &Moments, n: usize) -> Result<f64> {
    if m.mean() == 0.0 {
        return Err(Error::domain("mean", 0.0, "nonzero"));
    }
    Ok(n as f64 * m.variance() / (m.mean() * m.mean()))
}

/// Runs `block(rng, reps)` for every block of the repetition partition and
/// returns the results in block order.
fn run_blocks<A, F>(cfg: &SimulationConfig, n: usize, block: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut RngStream, u64) -> A + Sync,
{
    let workers = cfg.workers as u64;
    let base = cfg.repetitions / workers;
    let extra = cfg.repetitions % workers;
    let seed = mix_seed(cfg.master_seed, n as u64);
    let job = || {
        (0..workers)
            .into_par_iter()
            .map(|i| {
                let reps = base + u64::from(i < extra);
                let mut rng = RngStream::new(seed, i);
                block(&mut rng, reps)
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
    {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Runs `per_rep` on sorted standard-normal samples of size `n`, feeding its
/// `K` outputs into `K` accumulators, merged across blocks.
fn accumulate<const K: usize, F>(cfg: &SimulationConfig, n: usize, per_rep: F) -> [Moments; K]
where
    F: Fn(&[f64], &mut Vec<f64>) -> [f64; K] + Sync,
{
    let blocks = run_blocks(cfg, n, |rng, reps| {
        let mut acc = [Moments::new(); K];
        let mut buf = vec![0.0; n];
        let mut scratch = Vec::with_capacity(n);
        for _ in 0..reps {
            for v in buf.iter_mut() {
                *v = phi_inv(rng.next_open01());
            }
            buf.sort_unstable_by(f64::total_cmp);
            let out = per_rep(&buf, &mut scratch);
            for (m, x) in acc.iter_mut().zip(out) {
                m.push(x);
            }
        }
        acc
    });
    let mut total = [Moments::new(); K];
    for b in &blocks {
        for (t, m) in total.iter_mut().zip(b) {
            t.merge(m);
        }
    }
    total
}

/// Finite-sample consistency constants: reciprocal means of the unscaled
/// `QAD(X, ρ_s)` and `QAD(X, ρ_o)` over normal samples.
pub fn simulate_constants(cfg: &SimulationConfig) -> Result<Vec<ConstantRecord>> {
    cfg.validate()?;
    Ok(cfg
        .sample_sizes
        .iter()
        .map(|&n| {
            let [s, o] = accumulate(cfg, n, |x, scratch| {
                [qad_sorted(x, RHO_S, scratch), qad_sorted(x, RHO_O, scratch)]
            });
            ConstantRecord {
                n,
                k_sqad: 1.0 / s.mean(),
                k_oqad: 1.0 / o.mean(),
                reps_used: s.count(),
            }
        })
        .collect())
}

/// Gaussian efficiency of MAD, SQAD and OQAD against the unbiased standard
/// deviation, as a ratio of standardized variances.
pub fn simulate_scale_efficiency(cfg: &SimulationConfig) -> Result<Vec<EfficiencyRecord>> {
    cfg.validate()?;
    cfg.sample_sizes
        .iter()
        .map(|&n| {
            let c4n = c4(n)?;
            let ks = consistency_constant(ConstantFamily::Sqad, n)?;
            let ko = consistency_constant(ConstantFamily::Oqad, n)?;
            let [sd, mad, sqad, oqad] = accumulate(cfg, n, |x, scratch| {
                [
                    sd_n1(x) / c4n,
                    MAD_CONSTANT * qad_sorted(x, 0.5, scratch),
                    ks * qad_sorted(x, RHO_S, scratch),
                    ko * qad_sorted(x, RHO_O, scratch),
                ]
            });
            let base = standardized(&sd, n)?;
            let values = [("mad", mad), ("sqad", sqad), ("oqad", oqad)]
                .into_iter()
                .map(|(label, m)| Ok((label.to_string(), base / standardized(&m, n)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(EfficiencyRecord {
                n,
                baseline_label: "sd".into(),
                values,
            })
        })
        .collect()
}

/// Gaussian efficiency of the sample median, STHDME and OTHDME against the
/// sample mean, as a ratio of plain variances.
pub fn simulate_location_efficiency(cfg: &SimulationConfig) -> Result<Vec<EfficiencyRecord>> {
    cfg.validate()?;
    cfg.sample_sizes
        .iter()
        .map(|&n| {
            let ws = ThdWeights::median(n, HdiWidth::STANDARD)?;
            let wo = ThdWeights::median(n, HdiWidth::OPTIMAL)?;
            let [mean, sm, st, ot] = accumulate(cfg, n, |x, _| {
                [
                    x.iter().sum::<f64>() / n as f64,
                    hf7_quantile_sorted(x, 0.5),
                    ws.apply_sorted(x),
                    wo.apply_sorted(x),
                ]
            });
            let base = mean.variance();
            let values = [("sm", sm), ("sthdme", st), ("othdme", ot)]
                .into_iter()
                .map(|(label, m)| (label.to_string(), base / m.variance()))
                .collect();
            Ok(EfficiencyRecord {
                n,
                baseline_label: "mean".into(),
                values,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(sizes: &[usize], reps: u64, workers: usize) -> SimulationConfig {
        SimulationConfig::new(sizes.to_vec(), reps, 42, workers)
    }

    #[test]
    fn validation() {
        assert!(cfg(&[], 10, 1).validate().is_err());
        assert!(cfg(&[1], 10, 1).validate().is_err());
        assert!(cfg(&[2], 0, 1).validate().is_err());
        assert!(cfg(&[2], 10, 0).validate().is_err());
        assert!(cfg(&[2, 5], 10, 3).validate().is_ok());
        assert!(simulate_constants(&cfg(&[1], 10, 1)).is_err());
    }

    #[test]
    fn sd_examples() {
        let s = Sample::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(unbiased_sd(&s).unwrap(), 0.0);
        let s = Sample::new(vec![0.0, 2.0]).unwrap();
        assert_abs_diff_eq!(
            unbiased_sd(&s).unwrap(),
            std::f64::consts::PI.sqrt(),
            epsilon = 1e-12
        );
        assert!(unbiased_sd(&Sample::new(vec![1.0]).unwrap()).is_err());
    }

    #[test]
    fn standardized_variance_examples() {
        assert_eq!(standardized_variance(&[2.0, 2.0, 2.0], 5).unwrap(), 0.0);
        assert_abs_diff_eq!(
            standardized_variance(&[1.0, 3.0], 4).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        let a = standardized_variance(&[1.0, 2.5, 4.0], 7).unwrap();
        let b = standardized_variance(&[3.0, 7.5, 12.0], 7).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        assert!(standardized_variance(&[-1.0, 1.0], 2).is_err());
        assert!(standardized_variance(&[], 2).is_err());
    }

    #[test]
    fn partition_covers_all_repetitions() {
        let c = cfg(&[3], 10, 4);
        let sizes = run_blocks(&c, 3, |_, reps| reps);
        assert_eq!(sizes, vec![3, 3, 2, 2]);
        let c = cfg(&[3], 2, 4);
        assert_eq!(run_blocks(&c, 3, |_, reps| reps), vec![1, 1, 0, 0]);
    }

    #[test]
    fn deterministic() {
        let c = cfg(&[2, 7], 2000, 3);
        assert_eq!(
            simulate_constants(&c).unwrap(),
            simulate_constants(&c).unwrap()
        );
        assert_eq!(
            simulate_location_efficiency(&c).unwrap(),
            simulate_location_efficiency(&c).unwrap()
        );
    }

    #[test]
    fn two_point_efficiencies_are_one() {
        let c = cfg(&[2], 5000, 2);
        let scale = &simulate_scale_efficiency(&c).unwrap()[0];
        for (_, v) in &scale.values {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-9);
        }
        let loc = &simulate_location_efficiency(&c).unwrap()[0];
        for (_, v) in &loc.values {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-9);
        }
    }
}
