//! Implementation of the `qad` command-line tool. Every subcommand produces a
//! [`Table`]; diagnostics go to standard error.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod table;

use std::io::Write;

use qad_core::find_optimal_p;
use qad_core::montecarlo::SimulationConfig;

use crate::args::{Cli, Command};
use crate::error::{CliError, Result};
use crate::input::InputDataset;
use crate::table::{format_sig, Table};

pub use crate::error::{EXIT_INPUT, EXIT_UNDEFINED_CONSTANT};
pub use crate::table::{Cell, Format};

/// Runs one parsed invocation, returning the output table.
pub fn execute(cli: &Cli, diag: &mut impl Write) -> Result<Table> {
    let g = &cli.global;
    match &cli.command {
        Command::Estimate {
            input,
            estimators,
            raw,
        } => {
            let data = InputDataset::load(input.as_deref())?;
            if data.skipped_missing > 0 {
                let _ = writeln!(
                    diag,
                    "{}: skipped {} missing value(s), n = {}",
                    data.source,
                    data.skipped_missing,
                    data.sample.len()
                );
            }
            commands::estimate(&data, estimators, *raw)
        }
        Command::Curve { distribution, p } => commands::curve(distribution, p),
        Command::EfficiencyCurve { p } => {
            let t = commands::efficiency_curve(p)?;
            let best = find_optimal_p();
            let max = qad_core::asymptotic_gaussian_efficiency(best)?;
            let _ = writeln!(
                diag,
                "argmax p = {}, max efficiency = {}",
                format_sig(best, 15),
                format_sig(max, 15)
            );
            Ok(t)
        }
        Command::Simulate { kind } => {
            let sizes = match &g.n_list {
                Some(list) => list.0.clone(),
                None => commands::default_sizes(*kind),
            };
            let cfg = SimulationConfig::new(sizes, g.reps, g.seed, g.workers);
            cfg.validate().map_err(|e| CliError::input(e.to_string()))?;
            commands::simulate(*kind, &cfg)
        }
        Command::CoverageTable => commands::coverage_table(),
        Command::Fit {
            input,
            column,
            k_infinity,
            n_min,
            n_max,
        } => {
            let k_inf = k_infinity
                .or_else(|| commands::default_k_infinity(column))
                .ok_or_else(|| {
                    CliError::input(format!("--k-infinity is required for column {column:?}"))
                })?;
            let records = commands::read_constants_csv(input, column)?;
            let t = commands::fit(&records, k_inf, *n_min, *n_max)?;
            if let [row] = t.rows() {
                let show = |c: &Cell| match c {
                    Cell::Num(v) => format_sig(*v, 6),
                    _ => String::new(),
                };
                let _ = writeln!(
                    diag,
                    "alpha = {}, beta = {}, max residual = {}",
                    show(&row[1]),
                    show(&row[2]),
                    show(&row[3])
                );
            }
            Ok(t)
        }
    }
}
