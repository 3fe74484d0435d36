//! Emission from N-particle systems at high photon energy.
//!
//! All energy denominators are replaced by `ħω_p`, so the rate is a
//! momentum-space integral over the noise kernel weighted by the squared
//! structure factor `⟨|N(p − w)|²⟩` with `N(k) = Σ_j c_j e^{−ik·ξ_j}` and
//! `c_j = e_j g_j / m_j`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// idle when std is linked and provides the inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::hydrogen::ground_state_form_factor;
use crate::noise::{NoiseSpec, SpatialCorrelation};
use crate::quadrature::{integrate_1d, Tolerance};
use crate::special::{j0, j0_minus_one, j1_over_x, j2};
use crate::units::{Constants, PhotonMomentum};
use crate::{Error, Result};

/// Charge in units of e, mass and coupling in g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    pub charge: f64,
    pub mass: f64,
    /// Noise coupling; equal to `mass` for the mass-proportional model.
    pub coupling: f64,
}

impl ParticleSpec {
    pub fn new(charge: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain("particle mass must be positive"));
        }
        if !charge.is_finite() {
            return Err(Error::Domain("particle charge must be finite"));
        }
        Ok(Self { charge, mass, coupling: mass })
    }

    pub fn with_coupling(mut self, coupling: f64) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(Error::Domain("coupling must be finite"));
        }
        self.coupling = coupling;
        Ok(self)
    }

    /// `e_j g_j / m_j`.
    pub fn weight(&self) -> f64 {
        self.charge * self.coupling / self.mass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InternalConfiguration {
    /// Internal positions relative to the center of mass, cm.
    FixedPositions(Vec<[f64; 3]>),
    /// Two particles in a hydrogenic 1s state with the given Bohr radius.
    Hydrogenic1s { a0_eff: f64 },
}

/// Which structure factor enters the `w` integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateMode {
    /// `N(p − w)` replaced by `N(p)`.
    #[default]
    W0,
    /// Full `w` dependence retained.
    Exact,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Center-of-mass coordinates of a set of particles.
#[derive(Debug, Clone, PartialEq)]
pub struct ComTransform {
    pub center: [f64; 3],
    /// `ξ_i = x_i − X` for the first `n − 1` particles.
    pub internal: Vec<[f64; 3]>,
    /// `|J| = (1 + Σ_{j<n} m_j/m_n)³`.
    pub jacobian: f64,
}

impl ComTransform {
    /// Recovers the lab positions; the last one follows from `Σ m_j ξ_j = 0`.
    pub fn positions(&self, masses: &[f64]) -> Result<Vec<[f64; 3]>> {
        let n = masses.len();
        if n != self.internal.len() + 1 {
            return Err(Error::Domain("mass list does not match the transform"));
        }
        let mut out = Vec::with_capacity(n);
        let mut last = [0.0; 3];
        for (xi, m) in self.internal.iter().zip(masses) {
            out.push([self.center[0] + xi[0], self.center[1] + xi[1], self.center[2] + xi[2]]);
            for a in 0..3 {
                last[a] -= m * xi[a];
            }
        }
        let mn = masses[n - 1];
        out.push([
            self.center[0] + last[0] / mn,
            self.center[1] + last[1] / mn,
            self.center[2] + last[2] / mn,
        ]);
        Ok(out)
    }
}

pub fn com_transform(positions: &[[f64; 3]], masses: &[f64]) -> Result<ComTransform> {
    let n = positions.len();
    if n < 2 || masses.len() != n {
        return Err(Error::Domain("need at least two particles with one mass each"));
    }
    if masses.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
        return Err(Error::Domain("masses must be positive"));
    }
    let total: f64 = masses.iter().sum();
    let mut center = [0.0; 3];
    for (x, m) in positions.iter().zip(masses) {
        for a in 0..3 {
            center[a] += m * x[a];
        }
    }
    for c in &mut center {
        *c /= total;
    }
    let internal = positions[..n - 1].iter().map(|x| sub(*x, center)).collect();
    let ratio: f64 = masses[..n - 1].iter().map(|m| m / masses[n - 1]).sum();
    Ok(ComTransform { center, internal, jacobian: (1.0 + ratio).powi(3) })
}

/// Coefficient in `[a·∇_i, b·ξ_j] = a·b (δ_ij − m_i/M)`.
pub fn commutator_coefficient(masses: &[f64], i: usize, j: usize) -> f64 {
    let total: f64 = masses.iter().sum();
    let delta = if i == j { 1.0 } else { 0.0 };
    delta - masses[i] / total
}

fn validate(system: &[ParticleSpec], config: &InternalConfiguration) -> Result<()> {
    match config {
        InternalConfiguration::FixedPositions(xi) => {
            if xi.len() != system.len() || xi.is_empty() {
                return Err(Error::Domain("one internal position per particle is required"));
            }
            let mut moment = [0.0; 3];
            let mut scale = 0.0;
            for (x, s) in xi.iter().zip(system) {
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("positions must be finite"));
                }
                for a in 0..3 {
                    moment[a] += s.mass * x[a];
                }
                scale += s.mass * norm(*x);
            }
            if norm(moment) > 1e-12 * scale {
                return Err(Error::Domain("internal positions must satisfy Σ m_j ξ_j = 0"));
            }
        }
        InternalConfiguration::Hydrogenic1s { a0_eff } => {
            if system.len() != 2 {
                return Err(Error::Domain("a hydrogenic configuration has exactly two particles"));
            }
            if !(*a0_eff > 0.0) || !a0_eff.is_finite() {
                return Err(Error::Domain("a0_eff must be positive"));
            }
        }
    }
    Ok(())
}

/// `N(k) = Σ_j c_j e^{−ik·ξ_j}`. For a hydrogenic state the internal
/// positions are not sharp and `√⟨|N(k)|²⟩` is returned instead.
pub fn structure_factor(
    system: &[ParticleSpec],
    config: &InternalConfiguration,
    k: [f64; 3],
) -> Result<Complex64> {
    validate(system, config)?;
    match config {
        InternalConfiguration::FixedPositions(xi) => Ok(system
            .iter()
            .zip(xi)
            .map(|(s, x)| Complex64::from_polar(s.weight(), -dot(k, *x)))
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b)),
        InternalConfiguration::Hydrogenic1s { a0_eff } => {
            Ok(Complex64::new(hydrogenic_n2(system, *a0_eff, norm(k)).max(0.0).sqrt(), 0.0))
        }
    }
}

/// `⟨|N(k)|²⟩ = c₁² + c₂² + 2c₁c₂ ⟨cos k·r⟩₁ₛ = (c₁ + c₂)² − 2c₁c₂ F(k a0)`.
fn hydrogenic_n2(system: &[ParticleSpec], a0: f64, k: f64) -> f64 {
    let (c1, c2) = (system[0].weight(), system[1].weight());
    (c1 + c2) * (c1 + c2) - 2.0 * c1 * c2 * ground_state_form_factor(k * a0)
}

/// Orientation average of `⟨|N(p p̂)|²⟩` over photon directions.
pub fn mean_square_structure_factor(
    system: &[ParticleSpec],
    config: &InternalConfiguration,
    p: PhotonMomentum,
) -> Result<f64> {
    validate(system, config)?;
    let pv = p.get();
    Ok(match config {
        InternalConfiguration::FixedPositions(xi) => {
            // (Σc)² + 2Σ_{a<b} c_a c_b (j₀ − 1) keeps the neutral long-wavelength limit exact
            let total: f64 = system.iter().map(ParticleSpec::weight).sum();
            let mut sum = 0.0;
            for (a, (sa, xa)) in system.iter().zip(xi).enumerate() {
                for (sb, xb) in system.iter().zip(xi).skip(a + 1) {
                    sum += sa.weight() * sb.weight() * j0_minus_one(pv * norm(sub(*xa, *xb)));
                }
            }
            total * total + 2.0 * sum
        }
        InternalConfiguration::Hydrogenic1s { a0_eff } => hydrogenic_n2(system, *a0_eff, pv),
    })
}

/// `⟨|N|²⟩ / Σ c_j²`: 1 for a lone charge, `F(p a0)` for hydrogen.
pub fn normalized_structure_factor(
    system: &[ParticleSpec],
    config: &InternalConfiguration,
    p: PhotonMomentum,
) -> Result<f64> {
    let incoherent: f64 = system.iter().map(|s| s.weight() * s.weight()).sum();
    if incoherent == 0.0 {
        return Ok(0.0);
    }
    Ok(mean_square_structure_factor(system, config, p)? / incoherent)
}

/// `(2γ/(2π)⁴)(ħ/(m_N² c³)) e² / p`.
fn rate_prefactor(k: &Constants, p: f64, gamma: f64) -> f64 {
    2.0 * gamma / (2.0 * PI).powi(4) * k.hbar / (k.m_n * k.m_n * k.c.powi(3)) * k.e2 / p
}

/// `∫dΩ_p̂/4π ∫d³w G[w] [w² − (w·p̂)²] e^{−i(p−w)·d}` for a pair separation `d`.
fn pair_weight(corr: &SpatialCorrelation, p: f64, d: f64, tol: Tolerance) -> Result<f64> {
    let x = p * d;
    let (a, b) = (2.0 * j0(x), 2.0 * j1_over_x(x));
    let radial = corr.radial_integral(
        |w| {
            let y = w * d;
            w.powi(4) * (a * j1_over_x(y) - b * j2(y))
        },
        tol,
    )?;
    Ok(4.0 * PI * radial)
}

/// `∫dΩ_p̂/4π ∫d³w G[w] [w² − (w·p̂)²] ⟨|N(p − w)|²⟩`, cm⁻⁵.
fn kernel_moment(
    system: &[ParticleSpec],
    config: &InternalConfiguration,
    p: f64,
    corr: &SpatialCorrelation,
    mode: RateMode,
    tol: Tolerance,
) -> Result<f64> {
    match (mode, config) {
        (RateMode::W0, _) => {
            let n2 = mean_square_structure_factor(system, config, PhotonMomentum::new(p)?)?;
            if n2 == 0.0 {
                return Ok(0.0);
            }
            Ok(n2 * corr.transverse_weight(tol)?)
        }
        (RateMode::Exact, InternalConfiguration::FixedPositions(xi)) => {
            let mut sum = 0.0;
            for (a, (sa, xa)) in system.iter().zip(xi).enumerate() {
                for (b, (sb, xb)) in system.iter().zip(xi).enumerate().skip(a) {
                    let c = sa.weight() * sb.weight();
                    if c == 0.0 {
                        continue;
                    }
                    let w = pair_weight(corr, p, norm(sub(*xa, *xb)), tol)?;
                    sum += if a == b { c * w } else { 2.0 * c * w };
                }
            }
            Ok(sum)
        }
        (RateMode::Exact, InternalConfiguration::Hydrogenic1s { a0_eff }) => {
            if system.iter().all(|s| s.weight() == 0.0) {
                return Ok(0.0);
            }
            let inner_tol = Tolerance { rel: tol.rel * 1e-2, abs: 0.0 };
            let mut failure = None;
            let radial = corr.radial_integral(
                |w| {
                    let r = integrate_1d(
                        |mu| {
                            let k = (p * p + w * w - 2.0 * p * w * mu).max(0.0).sqrt();
                            (1.0 - mu * mu) * hydrogenic_n2(system, *a0_eff, k)
                        },
                        -1.0,
                        1.0,
                        inner_tol,
                    );
                    match r {
                        Ok(r) => w.powi(4) * r.value,
                        Err(e) => {
                            failure = Some(e);
                            f64::NAN
                        }
                    }
                },
                tol,
            );
            match (radial, failure) {
                (_, Some(e)) | (Err(e), None) => Err(e),
                (Ok(v), None) => Ok(2.0 * PI * v),
            }
        }
    }
}

/// Photon emission rate `dΓ/dp` of a many-particle system (s⁻¹·cm).
///
/// White noise is converted to `γ` with the reference length of `corr`.
/// Non-stationary noise has no rate and is rejected.
#[allow(clippy::too_many_arguments)]
pub fn rate_general(
    k: &Constants,
    p: PhotonMomentum,
    system: &[ParticleSpec],
    config: &InternalConfiguration,
    noise: &NoiseSpec,
    corr: &SpatialCorrelation,
    mode: RateMode,
    tol: Tolerance,
) -> Result<f64> {
    validate(system, config)?;
    let gamma = noise.weight(corr.reference_length(), k.angular_frequency(p))?;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let moment = kernel_moment(system, config, p.get(), corr, mode, tol)?;
    Ok(rate_prefactor(k, p.get(), gamma) * moment)
}

/// A charged site with an isotropic Gaussian spread `sigma` per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalSite {
    pub charge: f64,
    pub position: [f64; 3],
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrystalCell {
    pub sites: Vec<CrystalSite>,
    pub n_cells: f64,
}

impl CrystalCell {
    pub fn new(sites: Vec<CrystalSite>, n_cells: f64) -> Result<Self> {
        if !(n_cells >= 1.0) || !n_cells.is_finite() {
            return Err(Error::Domain("n_cells must be at least 1"));
        }
        if sites.iter().any(|s| !(s.sigma >= 0.0) || !s.charge.is_finite()) {
            return Err(Error::Domain("site spreads must be non-negative"));
        }
        Ok(Self { sites, n_cells })
    }

    /// `⟨|f − ⟨f⟩|²⟩ = Σ_i e_i² (1 − e^{−p²σ_i²})` for independent sites.
    pub fn variance(&self, p: PhotonMomentum) -> f64 {
        let p2 = p.get() * p.get();
        self.sites
            .iter()
            .map(|s| s.charge * s.charge * -(-p2 * s.sigma * s.sigma).exp_m1())
            .sum()
    }

    /// Largest site separation within a cell.
    pub fn extent(&self) -> f64 {
        let mut ext = 0.0f64;
        for a in &self.sites {
            for b in &self.sites {
                ext = ext.max(norm(sub(a.position, b.position)));
            }
        }
        ext
    }

    /// Linear lattice size `extent · n_cells^{1/3}` when it exceeds `r_c`,
    /// beyond which the incoherent-cell formula is not established.
    pub fn size_warning(&self, r_c: f64) -> Option<f64> {
        let size = self.extent() * self.n_cells.cbrt();
        (size > r_c).then_some(size)
    }
}

/// Incoherent lattice rate `N_cell ⟨|f − ⟨f⟩|²⟩` times the single-charge rate.
pub fn crystal_rate(
    k: &Constants,
    p: PhotonMomentum,
    cell: &CrystalCell,
    noise: &NoiseSpec,
    corr: &SpatialCorrelation,
    tol: Tolerance,
) -> Result<f64> {
    let variance = cell.variance(p);
    if variance == 0.0 {
        return Ok(0.0);
    }
    let gamma = noise.weight(corr.reference_length(), k.angular_frequency(p))?;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let moment = corr.transverse_weight(tol)?;
    Ok(rate_prefactor(k, p.get(), gamma) * cell.n_cells * variance * moment)
}
