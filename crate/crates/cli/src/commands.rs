use std::path::Path;

use qad_core::{
    asymptotic_constant, asymptotic_gaussian_efficiency, asymptotic_qad, coverage_probability,
    fit_constant_model, mad, oqad, othdme, qad, sample_median, simulate_constants,
    simulate_location_efficiency, simulate_scale_efficiency, sqad, sthdme, DispersionEstimate,
    ReferenceDistribution, SimulationConfig, VpResult, MAD_CONSTANT,
};

use crate::args::{parse_p_grid, SimKind};
use crate::error::{CliError, Result};
use crate::input::InputDataset;
use crate::table::{Cell, Table};

/// Estimator selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorSpec {
    Mad,
    Sqad,
    Oqad,
    Qad(f64),
    Median,
    Sthdme,
    Othdme,
}

impl EstimatorSpec {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "mad" => Self::Mad,
            "sqad" => Self::Sqad,
            "oqad" => Self::Oqad,
            "median" => Self::Median,
            "sthdme" => Self::Sthdme,
            "othdme" => Self::Othdme,
            other => {
                let p = other
                    .strip_prefix("qad:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| CliError::input(format!("unknown estimator {other:?}")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::input(format!("qad order {p} is outside [0, 1]")));
                }
                Self::Qad(p)
            }
        })
    }
}

fn dispersion_row(label: String, e: DispersionEstimate) -> Vec<Cell> {
    vec![
        label.into(),
        e.value.into(),
        e.n.into(),
        e.constant_applied.into(),
    ]
}

/// One row per estimator: label, value, n, constant_applied.
pub fn estimate(data: &InputDataset, estimators: &[String], raw: bool) -> Result<Table> {
    let specs = estimators
        .iter()
        .map(|s| EstimatorSpec::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let x = &data.sample;
    let fixed = |c: f64| if raw { 1.0 } else { c };
    let table_constant = if raw { Some(1.0) } else { None };
    let mut t = Table::new(["estimator", "value", "n", "constant_applied"]);
    for (label, spec) in estimators.iter().zip(specs) {
        let label = label.trim().to_string();
        let row = match spec {
            EstimatorSpec::Mad => dispersion_row(label, mad(x, fixed(MAD_CONSTANT))?),
            EstimatorSpec::Sqad => dispersion_row(label, sqad(x, table_constant)?),
            EstimatorSpec::Oqad => dispersion_row(label, oqad(x, table_constant)?),
            EstimatorSpec::Qad(p) => dispersion_row(label, qad(x, p, 1.0)?),
            EstimatorSpec::Median | EstimatorSpec::Sthdme | EstimatorSpec::Othdme => {
                let v = match spec {
                    EstimatorSpec::Median => sample_median(x),
                    EstimatorSpec::Sthdme => sthdme(x),
                    _ => othdme(x),
                };
                vec![label.into(), v.into(), x.len().into(), 1.0.into()]
            }
        };
        t.push(row);
    }
    Ok(t)
}

/// Parses `name[:params]`.
pub fn parse_distribution(spec: &str) -> Result<ReferenceDistribution> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    let nums = |p: &str| {
        p.split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CliError::input(format!("bad parameters in {spec:?}")))
    };
    let no_params = |d: ReferenceDistribution| match params {
        None => Ok(d),
        Some(_) => Err(CliError::input(format!("{name} takes no parameters"))),
    };
    match name {
        "normal" => match params.map(nums).transpose()?.as_deref() {
            None => Ok(ReferenceDistribution::STANDARD_NORMAL),
            Some(&[mu, sigma]) => Ok(ReferenceDistribution::normal(mu, sigma)?),
            Some(_) => Err(CliError::input("normal takes mu,sigma")),
        },
        "poisson" => match params.map(nums).transpose()?.as_deref() {
            None => Ok(ReferenceDistribution::poisson(0.6)?),
            Some(&[lambda]) => Ok(ReferenceDistribution::poisson(lambda)?),
            Some(_) => Err(CliError::input("poisson takes lambda")),
        },
        "uniform" => no_params(ReferenceDistribution::Uniform01),
        "exponential" => no_params(ReferenceDistribution::Exponential1),
        "pareto" => no_params(ReferenceDistribution::Pareto11),
        "trimodal" => no_params(ReferenceDistribution::Trimodal),
        other => Err(CliError::input(format!("unknown distribution {other:?}"))),
    }
}

fn grid(spec: &str) -> Result<Vec<f64>> {
    parse_p_grid(spec).map_err(CliError::Input)
}

/// Columns p, v, lower, upper, jump, plus `k_v = K_p·v_p` for normal laws.
pub fn curve(distribution: &str, p_grid: &str) -> Result<Table> {
    let d = parse_distribution(distribution)?;
    let normal = matches!(d, ReferenceDistribution::Normal { .. });
    let mut header = vec!["p", "v", "lower", "upper", "jump"];
    if normal {
        header.push("k_v");
    }
    let mut t = Table::new(header);
    for p in grid(p_grid)? {
        let r = asymptotic_qad(&d, p)?;
        let mut row: Vec<Cell> = vec![
            p.into(),
            r.scalar().into(),
            r.lower().into(),
            r.upper().into(),
            Cell::Int(u64::from(r.is_jump())),
        ];
        if normal {
            let kv = match r {
                VpResult::Scalar(v) => Some(asymptotic_constant(p)? * v),
                VpResult::Jump { .. } => None,
            };
            row.push(kv.into());
        }
        t.push(row);
    }
    Ok(t)
}

/// Columns p, efficiency.
pub fn efficiency_curve(p_grid: &str) -> Result<Table> {
    let mut t = Table::new(["p", "efficiency"]);
    for p in grid(p_grid)? {
        t.push(vec![p.into(), asymptotic_gaussian_efficiency(p)?.into()]);
    }
    Ok(t)
}

/// The four-row coverage table for `k ∈ {1, C∞, 2C∞, 3C∞}`. Multiples of
/// `C∞` are rounded to two decimals (1.48, 2.97, 4.45) before evaluation, as
/// in the published table; exact multiples move two normal entries by one
/// unit in the third decimal.
pub fn coverage_table() -> Result<Table> {
    let c_inf = asymptotic_constant(0.5)?;
    let normal = ReferenceDistribution::STANDARD_NORMAL;
    let pareto = ReferenceDistribution::Pareto11;
    let mut t = Table::new(["k", "normal", "pareto"]);
    for j in 0..4 {
        let k = if j == 0 {
            1.0
        } else {
            (j as f64 * c_inf * 100.0).round() / 100.0
        };
        t.push(vec![
            k.into(),
            coverage_probability(&normal, k)?.into(),
            coverage_probability(&pareto, k)?.into(),
        ]);
    }
    Ok(t)
}

pub fn default_sizes(kind: SimKind) -> Vec<usize> {
    match kind {
        SimKind::Constants => vec![2, 3, 5, 10, 30, 100],
        SimKind::ScaleEff => vec![2, 10, 100],
        SimKind::LocationEff => vec![3, 10, 100],
    }
}

/// Columns mirror the published tables: `n,k_sqad,k_oqad`,
/// `n,mad,sqad,oqad` or `n,sm,sthdme,othdme`.
pub fn simulate(kind: SimKind, cfg: &SimulationConfig) -> Result<Table> {
    if let Some(n) = cfg.sample_sizes.iter().find(|&&n| n < 2) {
        return Err(CliError::input(format!("sample size {n} is below 2")));
    }
    match kind {
        SimKind::Constants => {
            let mut t = Table::new(["n", "k_sqad", "k_oqad"]);
            for r in simulate_constants(cfg)? {
                t.push(vec![r.n.into(), r.k_sqad.into(), r.k_oqad.into()]);
            }
            Ok(t)
        }
        SimKind::ScaleEff | SimKind::LocationEff => {
            let recs = if kind == SimKind::ScaleEff {
                simulate_scale_efficiency(cfg)?
            } else {
                simulate_location_efficiency(cfg)?
            };
            let mut header = vec!["n".to_string()];
            if let Some(first) = recs.first() {
                header.extend(first.values.iter().map(|(l, _)| l.clone()));
            }
            let mut t = Table::new(header);
            for r in recs {
                let mut row: Vec<Cell> = vec![r.n.into()];
                row.extend(r.values.iter().map(|&(_, v)| Cell::Num(v)));
                t.push(row);
            }
            Ok(t)
        }
    }
}

/// Reads `(n, column)` pairs from a CSV with a header row. Rows whose value
/// is `NA` or empty are skipped.
pub fn read_constants_csv(path: &Path, column: &str) -> Result<Vec<(usize, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => CliError::Io {
                path: path.display().to_string(),
                source,
            },
            kind => CliError::input(format!("{}: {kind:?}", path.display())),
        })?;
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::input(format!("{}: no column {name:?}", path.display())))
    };
    let (n_idx, v_idx) = (find("n")?, find(column)?);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |idx: usize| rec.get(idx).unwrap_or("");
        let value = field(v_idx);
        if value.is_empty() || value == crate::input::MISSING {
            continue;
        }
        let n: usize = field(n_idx).parse().map_err(|_| {
            CliError::input(format!(
                "{}:{line}: bad n {:?}",
                path.display(),
                field(n_idx)
            ))
        })?;
        let v: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| {
                CliError::input(format!("{}:{line}: bad value {value:?}", path.display()))
            })?;
        out.push((n, v));
    }
    Ok(out)
}

pub fn default_k_infinity(column: &str) -> Option<f64> {
    match column {
        "k_sqad" => Some(qad_core::ConsistencyConstants::SQAD.k_infinity),
        "k_oqad" => Some(qad_core::ConsistencyConstants::OQAD.k_infinity),
        _ => None,
    }
}

/// Columns k_infinity, alpha, beta, max_residual, rows.
pub fn fit(records: &[(usize, f64)], k_infinity: f64, n_min: usize, n_max: usize) -> Result<Table> {
    let r = fit_constant_model(records, k_infinity, n_min..=n_max)?;
    let used = records
        .iter()
        .filter(|(n, _)| (n_min..=n_max).contains(n))
        .count();
    let mut t = Table::new(["k_infinity", "alpha", "beta", "max_residual", "rows"]);
    t.push(vec![
        r.k_infinity.into(),
        r.alpha.into(),
        r.beta.into(),
        r.max_residual.into(),
        used.into(),
    ]);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimator_specs() {
        assert_eq!(
            EstimatorSpec::parse("qad:0.25").unwrap(),
            EstimatorSpec::Qad(0.25)
        );
        assert_eq!(
            EstimatorSpec::parse("sthdme").unwrap(),
            EstimatorSpec::Sthdme
        );
        assert!(EstimatorSpec::parse("qad:1.5").is_err());
        assert!(EstimatorSpec::parse("iqr").is_err());
    }

    #[test]
    fn distributions() {
        assert_eq!(
            parse_distribution("normal:1,2").unwrap(),
            ReferenceDistribution::normal(1.0, 2.0).unwrap()
        );
        assert_eq!(
            parse_distribution("pareto").unwrap(),
            ReferenceDistribution::Pareto11
        );
        assert!(parse_distribution("cauchy").is_err());
        assert!(parse_distribution("normal:1").is_err());
        assert!(parse_distribution("uniform:2").is_err());
        assert!(parse_distribution("normal:0,-1").is_err());
    }

    #[test]
    fn coverage_rows() {
        let t = coverage_table().unwrap();
        let ks: Vec<&Cell> = t.rows().iter().map(|r| &r[0]).collect();
        assert_eq!(
            ks,
            [
                &Cell::Num(1.0),
                &Cell::Num(1.48),
                &Cell::Num(2.97),
                &Cell::Num(4.45)
            ]
        );
        assert_eq!(t.rows()[0][1], Cell::Num(0.5));
    }
}
