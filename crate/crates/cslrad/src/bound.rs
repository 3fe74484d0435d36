//! Named experimental limits and λ bounds.

use std::path::Path;

use serde::{Deserialize, Serialize};

use cslrad_core::bounds::{bound_rescale_rc, lambda_bound, ExperimentalLimit, LambdaBound};
use cslrad_core::quadrature::Tolerance;
use cslrad_core::units::STANDARD_LAMBDA;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const BUNDLED_LIMITS: &str = include_str!("../data/limits.json");

/// Correlation length the bound is rescaled to in reports.
pub const RESCALED_R_C: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitEntry {
    pub name: String,
    pub energy_kev: f64,
    pub rate_limit_s_inv_cm: f64,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsFile {
    pub limits: Vec<LimitEntry>,
}

impl LimitsFile {
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED_LIMITS).expect("bundled limits.json is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let p = e.path().to_string();
            CliError::config(format!("limits:{p}"), e.into_inner().to_string())
        })
    }

    pub fn get(&self, name: &str) -> Result<ExperimentalLimit> {
        let entry = self.limits.iter().find(|l| l.name == name).ok_or_else(|| {
            let names: Vec<&str> = self.limits.iter().map(|l| l.name.as_str()).collect();
            CliError::config("--limit", format!("unknown limit `{name}`; available: {}", names.join(", ")))
        })?;
        ExperimentalLimit::new(entry.energy_kev, entry.rate_limit_s_inv_cm, entry.description.clone())
            .map_err(|e| CliError::config(format!("limits:{name}"), e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub limit: String,
    pub energy_kev: f64,
    pub rate_limit_s_inv_cm: f64,
    pub r_c_cm: f64,
    /// `None` when the model predicts no emission at the limit's energy.
    pub lambda_max_s_inv: Option<f64>,
    pub ratio_to_standard: Option<f64>,
    pub rescaled_r_c_cm: f64,
    pub lambda_max_rescaled_s_inv: Option<f64>,
}

pub fn compute_bound(config: &RunConfig, limits: &LimitsFile, name: &str) -> Result<BoundReport> {
    let model = config.model()?;
    let limit = limits.get(name)?;
    let b = lambda_bound(&model.constants, &limit, &model.system, &model.noise, &model.corr, Tolerance::DEFAULT_1D)?;
    let r_c = model.corr.reference_length();
    let rescaled = match b {
        LambdaBound::Bounded(v) => Some(bound_rescale_rc(v, r_c, RESCALED_R_C)?),
        LambdaBound::Unconstrained => None,
    };
    Ok(BoundReport {
        limit: name.to_string(),
        energy_kev: limit.energy_kev,
        rate_limit_s_inv_cm: limit.rate_limit,
        r_c_cm: r_c,
        lambda_max_s_inv: b.value(),
        ratio_to_standard: b.ratio_to_standard(),
        rescaled_r_c_cm: RESCALED_R_C,
        lambda_max_rescaled_s_inv: rescaled,
    })
}

impl BoundReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "limit {} at {} keV: dGamma/dp < {:e} s^-1 cm\n",
            self.limit, self.energy_kev, self.rate_limit_s_inv_cm
        );
        match (self.lambda_max_s_inv, self.ratio_to_standard, self.lambda_max_rescaled_s_inv) {
            (Some(l), Some(r), Some(lr)) => {
                s += &format!("lambda_max = {l:.4e} s^-1 (r_c = {:e} cm)\n", self.r_c_cm);
                s += &format!("ratio to standard lambda {STANDARD_LAMBDA:e} s^-1 = {r:.4e}\n");
                s += &format!(
                    "rescaled to r_c = {:e} cm: lambda_max = {lr:.4e} s^-1 (x{:.6})\n",
                    self.rescaled_r_c_cm,
                    lr / l
                );
            }
            _ => s += "no constraint: the model predicts no emission at this energy\n",
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> RunConfig {
        RunConfig::from_json(
            r#"{"system": {"type": "free_electron"}, "noise": {"type": "white", "lambda": 2.2e-17},
                "correlation": {"type": "gaussian", "r_c": 1e-5}}"#,
        )
        .unwrap()
    }

    #[test]
    fn bundled_entry_gives_quoted_bound() {
        let r = compute_bound(&free(), &LimitsFile::bundled(), "germanium_11kev").unwrap();
        let l = r.lambda_max_s_inv.unwrap();
        assert!((l / 7e-11 - 1.0).abs() < 1e-9, "{l:e}");
        assert!((2.5e6..=3.5e6).contains(&r.ratio_to_standard.unwrap()));
        assert_eq!(r.lambda_max_rescaled_s_inv.unwrap() / l, 100.0);
        assert!(r.to_text().contains("x100.000000"));
    }

    #[test]
    fn unknown_limit_lists_names() {
        match compute_bound(&free(), &LimitsFile::bundled(), "nope") {
            Err(CliError::Config { message, .. }) => assert!(message.contains("germanium_11kev")),
            other => panic!("{other:?}"),
        }
    }
}
