//! Parameter sweeps over λ, r_c and photon energy.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use cslrad_core::quadrature::Tolerance;
use cslrad_core::units::Constants;

use crate::bound::{compute_bound, LimitsFile};
use crate::config::{spaced, CorrelationConfig, NoiseConfig, RunConfig, Spacing};
use crate::error::{CliError, Result};
use crate::spectrum::{evaluate_point, with_pool};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisName {
    Lambda,
    RC,
    E,
}

impl AxisName {
    pub fn column(self) -> &'static str {
        match self {
            AxisName::Lambda => "lambda_s_inv",
            AxisName::RC => "r_c_cm",
            AxisName::E => "E_keV",
        }
    }
}

/// `name=start:stop:n:lin|log`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| CliError::config("--axis", format!("`{s}`: {m}"));
        let (name, spec) = s.split_once('=').ok_or_else(|| bad("expected name=start:stop:n:lin|log"))?;
        let name = match name.trim() {
            "lambda" => AxisName::Lambda,
            "r_c" => AxisName::RC,
            "E" => AxisName::E,
            _ => return Err(bad("axis name must be lambda, r_c or E")),
        };
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 4 {
            return Err(bad("expected start:stop:n:lin|log"));
        }
        let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite());
        let (start, stop) = match (num(parts[0]), num(parts[1])) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(bad("start and stop must be finite numbers")),
        };
        let n: usize = parts[2].trim().parse().map_err(|_| bad("n must be a non-negative integer"))?;
        if n == 0 {
            return Err(bad("axis needs at least one point"));
        }
        let spacing = match parts[3].trim() {
            "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            _ => return Err(bad("spacing must be lin or log")),
        };
        if !(start > 0.0 && stop > 0.0) {
            return Err(bad("values must be positive"));
        }
        Ok(Axis { name, values: spaced(start, stop, n, spacing) })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub config_sha256: String,
}

fn apply(base: &RunConfig, name: AxisName, v: f64, energy: &mut f64) -> Result<RunConfig> {
    let mut c = base.clone();
    match name {
        AxisName::Lambda => match &mut c.noise {
            NoiseConfig::White { lambda } => *lambda = v,
            _ => return Err(CliError::config("noise", "a lambda axis needs white noise")),
        },
        AxisName::RC => match &mut c.correlation {
            CorrelationConfig::Gaussian { r_c } => *r_c = v,
            _ => return Err(CliError::config("correlation", "an r_c axis needs a Gaussian correlation")),
        },
        AxisName::E => *energy = v,
    }
    Ok(c)
}

/// Evaluates the rate (or, with `limit`, the λ bound) at every grid node.
/// Rows are sorted lexicographically by axis values.
pub fn run_sweep(
    config: &RunConfig,
    axes: &[Axis],
    energy_kev: f64,
    limit: Option<(&LimitsFile, &str)>,
    threads: Option<usize>,
) -> Result<SweepTable> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(CliError::config("--axis", "give one or two sweep axes"));
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(CliError::config("--axis", "sweep axes must differ"));
    }
    if limit.is_some() && axes.iter().any(|a| a.name == AxisName::E) {
        return Err(CliError::config("--axis", "the bound energy comes from the limit; E cannot be swept"));
    }
    let mut nodes: Vec<Vec<f64>> = axes[0].values.iter().map(|v| vec![*v]).collect();
    if let Some(second) = axes.get(1) {
        nodes = nodes
            .into_iter()
            .flat_map(|n| second.values.iter().map(move |v| vec![n[0], *v]))
            .collect();
    }
    nodes.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });

    let has_e = axes.iter().any(|a| a.name == AxisName::E);
    let mut columns: Vec<String> = axes.iter().map(|a| a.name.column().to_string()).collect();
    match limit {
        Some(_) => columns.push("lambda_max_s_inv".into()),
        None => {
            if !has_e {
                columns.push("E_keV".into());
            }
            columns.push("dGamma_dp_s_inv_cm".into());
            columns.push("structure_factor".into());
        }
    }

    let eval = |node: &Vec<f64>| -> Result<Vec<f64>> {
        let mut energy = energy_kev;
        let mut c = config.clone();
        for (axis, v) in axes.iter().zip(node) {
            c = apply(&c, axis.name, *v, &mut energy)?;
        }
        let mut row = node.clone();
        match limit {
            Some((file, name)) => {
                let r = compute_bound(&c, file, name)?;
                row.push(r.lambda_max_s_inv.unwrap_or(f64::INFINITY));
            }
            None => {
                let model = c.model()?;
                let (pt, _) = evaluate_point(&model, energy, Tolerance::DEFAULT_1D)?;
                if !has_e {
                    row.push(energy);
                }
                row.push(pt.d_gamma_dp);
                row.push(pt.structure_factor);
            }
        }
        Ok(row)
    };
    let rows: Vec<Result<Vec<f64>>> = with_pool(threads, || nodes.par_iter().map(eval).collect());
    Ok(SweepTable { columns, rows: rows.into_iter().collect::<Result<_>>()?, config_sha256: config.sha256() })
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# cslrad {}", crate::VERSION).unwrap();
        writeln!(s, "# constants {}", Constants::VERSION).unwrap();
        writeln!(s, "# config_sha256 {}", self.config_sha256).unwrap();
        writeln!(s, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
            writeln!(s, "{}", cells.join(",")).unwrap();
        }
        s
    }
}
