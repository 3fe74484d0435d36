//! Run configuration: a strict JSON schema and its translation into model
//! objects.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cslrad_core::emitter::{HydrogenRegime, System};
use cslrad_core::free_electron::FreeParticle;
use cslrad_core::hydrogen::HydrogenicAtom;
use cslrad_core::manybody::{com_transform, CrystalCell, CrystalSite, InternalConfiguration, ParticleSpec, RateMode};
use cslrad_core::noise::{NoiseSpec, SpatialCorrelation, Tabulated, TailRule};
use cslrad_core::units::Constants;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub noise: NoiseConfig,
    pub correlation: CorrelationConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Overrides the nucleon reference mass m_N (g).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nucleon_mass_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    FreeElectron {
        #[serde(default = "minus_one")]
        charge: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass_g: Option<f64>,
    },
    Hydrogen {
        #[serde(default)]
        regime: Regime,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m1_g: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m2_g: Option<f64>,
        #[serde(default = "one")]
        charge: f64,
    },
    ManyBody {
        particles: Vec<ParticleConfig>,
        #[serde(default)]
        internal: InternalConfig,
        #[serde(default)]
        mode: ModeConfig,
    },
    Crystal { sites: Vec<SiteConfig>, n_cells: f64 },
}

fn one() -> f64 {
    1.0
}

fn minus_one() -> f64 {
    -1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SmallP,
    #[default]
    HighP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConfig {
    #[default]
    W0,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleConfig {
    pub charge: f64,
    pub mass_g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_g: Option<f64>,
    /// Lab-frame position; ignored for hydrogenic internal states.
    #[serde(default)]
    pub position_cm: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InternalConfig {
    #[default]
    FixedPositions,
    Hydrogenic1s {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a0_eff_cm: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub charge: f64,
    #[serde(default)]
    pub position_cm: [f64; 3],
    pub sigma_cm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    White {
        lambda: f64,
    },
    /// γ(ω) in cm³/s, either flat (`gamma0`) or a table of `[ω, γ]` pairs.
    Colored {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        tail: Tail,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff_s_inv: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    #[default]
    Zero,
    Hold,
}

impl From<Tail> for TailRule {
    fn from(t: Tail) -> Self {
        match t {
            Tail::Zero => TailRule::Zero,
            Tail::Hold => TailRule::Hold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorrelationConfig {
    Gaussian {
        r_c: f64,
    },
    /// Tabulated `[w, G(w)]` with `G(0) = 1`; `length_cm` sets λ ↔ γ.
    Table {
        length_cm: f64,
        points: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub e_min_kev: f64,
    pub e_max_kev: f64,
    pub n_points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { e_min_kev: 1.0, e_max_kev: 100.0, n_points: 50, spacing: Spacing::Log }
    }
}

impl GridConfig {
    pub fn energies(&self) -> Result<Vec<f64>> {
        if !(self.e_min_kev > 0.0) || !self.e_min_kev.is_finite() {
            return Err(CliError::config("grid.e_min_kev", "must be positive"));
        }
        if !(self.e_max_kev > self.e_min_kev) || !self.e_max_kev.is_finite() {
            return Err(CliError::config("grid.e_max_kev", "must exceed e_min_kev"));
        }
        if self.n_points < 2 {
            return Err(CliError::config("grid.n_points", "need at least 2 points"));
        }
        Ok(spaced(self.e_min_kev, self.e_max_kev, self.n_points, self.spacing))
    }
}

/// `n` points from `a` to `b` inclusive; endpoints are exact.
pub fn spaced(a: f64, b: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                return b;
            }
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => a + t * (b - a),
                Spacing::Log => a * (b / a).powf(t),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub plot: bool,
    #[serde(default = "default_path")]
    pub path: String,
}

fn default_path() -> String {
    "spectrum.csv".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { format: Format::Csv, plot: false, path: default_path() }
    }
}

/// Everything needed to evaluate rates.
#[derive(Debug, Clone)]
pub struct Model {
    pub constants: Constants,
    pub system: System,
    pub noise: NoiseSpec,
    pub corr: SpatialCorrelation,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(path, e.into_inner().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Canonical JSON (defaults filled in, fixed key order).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn model(&self) -> Result<Model> {
        let mut k = Constants::CODATA_2018;
        if let Some(m) = self.nucleon_mass_g {
            k = k.with_nucleon_mass(m).map_err(|e| CliError::config("nucleon_mass_g", e.to_string()))?;
        }
        Ok(Model {
            constants: k,
            system: self.system.build(&k)?,
            noise: self.noise.build()?,
            corr: self.correlation.build()?,
        })
    }
}

fn at(path: &str) -> impl Fn(cslrad_core::Error) -> CliError + '_ {
    move |e| CliError::config(path, e.to_string())
}

impl SystemConfig {
    pub fn build(&self, k: &Constants) -> Result<System> {
        Ok(match self {
            SystemConfig::FreeElectron { charge, mass_g } => {
                System::Free(FreeParticle::new(*charge, mass_g.unwrap_or(k.m_e)).map_err(at("system"))?)
            }
            SystemConfig::Hydrogen { regime, m1_g, m2_g, charge } => {
                let atom = HydrogenicAtom::new(k, m1_g.unwrap_or(k.m_e), m2_g.unwrap_or(k.m_p), *charge)
                    .map_err(at("system"))?;
                let regime = match regime {
                    Regime::SmallP => HydrogenRegime::SmallP,
                    Regime::HighP => HydrogenRegime::HighP,
                };
                System::Hydrogen { atom, regime }
            }
            SystemConfig::ManyBody { particles, internal, mode } => {
                if particles.is_empty() {
                    return Err(CliError::config("system.particles", "at least one particle is required"));
                }
                let mut specs = Vec::with_capacity(particles.len());
                for (i, p) in particles.iter().enumerate() {
                    let path = format!("system.particles[{i}]");
                    let mut s = ParticleSpec::new(p.charge, p.mass_g).map_err(|e| CliError::config(&path, e.to_string()))?;
                    if let Some(g) = p.coupling_g {
                        s = s.with_coupling(g).map_err(|e| CliError::config(&path, e.to_string()))?;
                    }
                    specs.push(s);
                }
                let config = match internal {
                    InternalConfig::FixedPositions => {
                        let xs: Vec<[f64; 3]> = particles.iter().map(|p| p.position_cm).collect();
                        let xi = if xs.len() == 1 {
                            vec![[0.0; 3]]
                        } else {
                            let masses: Vec<f64> = specs.iter().map(|s| s.mass).collect();
                            let c = com_transform(&xs, &masses).map_err(at("system.particles"))?.center;
                            xs.iter().map(|x| [x[0] - c[0], x[1] - c[1], x[2] - c[2]]).collect()
                        };
                        InternalConfiguration::FixedPositions(xi)
                    }
                    InternalConfig::Hydrogenic1s { a0_eff_cm } => {
                        if specs.len() != 2 {
                            return Err(CliError::config("system.particles", "hydrogenic_1s needs exactly two particles"));
                        }
                        let a0_eff = match a0_eff_cm {
                            Some(a) => *a,
                            None => {
                                let q = (specs[0].charge * specs[1].charge).abs().sqrt();
                                HydrogenicAtom::new(k, specs[0].mass, specs[1].mass, q).map_err(at("system.particles"))?.a0_eff
                            }
                        };
                        InternalConfiguration::Hydrogenic1s { a0_eff }
                    }
                };
                let mode = match mode {
                    ModeConfig::W0 => RateMode::W0,
                    ModeConfig::Exact => RateMode::Exact,
                };
                // rejects inconsistent configurations up front
                cslrad_core::manybody::structure_factor(&specs, &config, [0.0; 3]).map_err(at("system"))?;
                System::ManyBody { particles: specs, config, mode }
            }
            SystemConfig::Crystal { sites, n_cells } => {
                let sites = sites
                    .iter()
                    .map(|s| CrystalSite { charge: s.charge, position: s.position_cm, sigma: s.sigma_cm })
                    .collect();
                System::Crystal(CrystalCell::new(sites, *n_cells).map_err(at("system"))?)
            }
        })
    }
}

impl NoiseConfig {
    pub fn build(&self) -> Result<NoiseSpec> {
        match self {
            NoiseConfig::White { lambda } => NoiseSpec::white(*lambda).map_err(at("noise.lambda")),
            NoiseConfig::Colored { gamma0, table, tail, cutoff_s_inv } => {
                if let Some(c) = cutoff_s_inv {
                    if !(*c >= 0.0) {
                        return Err(CliError::config("noise.cutoff_s_inv", "must be non-negative"));
                    }
                }
                match (gamma0, table) {
                    (Some(g), None) => {
                        if !(*g >= 0.0) || !g.is_finite() {
                            return Err(CliError::config("noise.gamma0", "must be non-negative"));
                        }
                        let g = *g;
                        Ok(NoiseSpec::colored(move |_| g, *cutoff_s_inv))
                    }
                    (None, Some(points)) => {
                        let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
                        let t = Tabulated::new(&pts, (*tail).into()).map_err(at("noise.table"))?;
                        if t.min_value() < 0.0 {
                            return Err(CliError::config("noise.table", "spectral density must be non-negative"));
                        }
                        Ok(NoiseSpec::colored(move |w| t.eval(w), *cutoff_s_inv))
                    }
                    _ => Err(CliError::config("noise", "give exactly one of gamma0 or table")),
                }
            }
        }
    }
}

impl CorrelationConfig {
    pub fn build(&self) -> Result<SpatialCorrelation> {
        match self {
            CorrelationConfig::Gaussian { r_c } => SpatialCorrelation::gaussian(*r_c).map_err(at("correlation.r_c")),
            CorrelationConfig::Table { length_cm, points } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
                let t = Tabulated::new(&pts, TailRule::Zero).map_err(at("correlation.points"))?;
                SpatialCorrelation::from_table(t, *length_cm).map_err(at("correlation"))
            }
        }
    }
}
