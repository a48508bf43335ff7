use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Format;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "qad",
    version,
    about = "Quantile absolute deviation estimators and their asymptotics"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Significant digits for numeric output.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,

    /// Master seed for simulations.
    #[arg(long, global = true, env = "ROBUST_DISPERSION_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Number of repetition blocks (and threads) for simulations.
    #[arg(long, global = true, default_value_t = qad_core::montecarlo::DEFAULT_WORKERS)]
    pub workers: usize,

    /// Monte-Carlo repetitions per sample size.
    #[arg(long, global = true, default_value_t = qad_core::montecarlo::DEFAULT_REPETITIONS)]
    pub reps: u64,

    /// Sample sizes, e.g. `2,3,10..20` (ranges are inclusive).
    #[arg(long, global = true, value_parser = parse_n_list)]
    pub n_list: Option<NList>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate estimators on a dataset (whitespace-separated numbers).
    Estimate {
        /// Input file; `-` or absent reads standard input.
        input: Option<PathBuf>,

        /// Estimators: mad, sqad, oqad, qad:<p>, median, sthdme, othdme.
        #[arg(
            short,
            long,
            value_delimiter = ',',
            default_value = "mad,sqad,oqad,median,sthdme,othdme"
        )]
        estimators: Vec<String>,

        /// Use a consistency constant of 1 for every dispersion estimator.
        #[arg(long)]
        raw: bool,
    },

    /// Asymptotic QAD value v_p of a reference distribution over a p grid.
    Curve {
        /// normal[:mu,sigma], uniform, exponential, pareto, trimodal, poisson[:lambda]
        distribution: String,

        /// Grid `start..end:step` or a comma list of probabilities.
        #[arg(long, default_value = "0.01..0.99:0.01")]
        p: String,
    },

    /// Asymptotic Gaussian efficiency of QAD(X, p) over a p grid.
    EfficiencyCurve {
        /// Grid `start..end:step` or a comma list of probabilities.
        #[arg(long, default_value = "0.01..0.99:0.01")]
        p: String,
    },

    /// Monte-Carlo reproduction of the constant and efficiency tables.
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
    },

    /// Normal and Pareto(1, 1) coverage of [M - k·MAD, M + k·MAD].
    CoverageTable,

    /// Fit K_n = K∞(1 + α/n + β/n²) to a column of a constants CSV.
    Fit {
        /// CSV with an `n` column.
        input: PathBuf,

        #[arg(long, default_value = "k_sqad")]
        column: String,

        /// Asymptotic constant; inferred for k_sqad and k_oqad.
        #[arg(long)]
        k_infinity: Option<f64>,

        #[arg(long, default_value_t = 100)]
        n_min: usize,

        #[arg(long, default_value_t = 1000)]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimKind {
    Constants,
    ScaleEff,
    LocationEff,
}

pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| format!("bad range start in {part:?}"))?;
            let b: usize = b
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| format!("bad range end in {part:?}"))?;
            if a > b {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(a..=b);
        } else {
            out.push(
                part.parse()
                    .map_err(|_| format!("bad sample size {part:?}"))?,
            );
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(NList(out))
}

/// Parses `start..end:step` (inclusive, step defaults to 0.01) or a comma list.
pub fn parse_p_grid(s: &str) -> Result<Vec<f64>, String> {
    let grid = if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, step)) => (b, step),
            None => (rest, "0.01"),
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {t:?} in grid {s:?}"))
        };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if step.is_nan() || step <= 0.0 || a > b {
            return Err(format!("bad grid {s:?}"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize;
        (0..=count)
            // Snap to 12 decimals so grid points such as 0.5 are exact.
            .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad probability {t:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    if let Some(p) = grid.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(format!("grid point {p} is outside (0, 1)"));
    }
    Ok(grid)
}
