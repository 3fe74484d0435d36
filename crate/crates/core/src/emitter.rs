//! A single entry point over every implemented emitter.

use alloc::vec::Vec;
use core::fmt;

use crate::free_electron::{rate_closed_form, FreeParticle};
use crate::hydrogen::{
    ground_state_form_factor, high_p_warning, rate_high_p, rate_small_p, small_p_warning, HydrogenicAtom,
    RegimeWarning,
};
use crate::manybody::{
    crystal_rate, normalized_structure_factor, rate_general, CrystalCell, InternalConfiguration, ParticleSpec,
    RateMode,
};
use crate::noise::{nonstationary_weight, NoiseSpec, SpatialCorrelation};
use crate::quadrature::Tolerance;
use crate::units::{Constants, PhotonMomentum};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HydrogenRegime {
    SmallP,
    HighP,
}

#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Free(FreeParticle),
    Hydrogen { atom: HydrogenicAtom, regime: HydrogenRegime },
    ManyBody { particles: Vec<ParticleSpec>, config: InternalConfiguration, mode: RateMode },
    Crystal(CrystalCell),
}

/// Validity notes attached to a computed rate. They never make a rate fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    Regime(RegimeWarning),
    /// The lattice is larger than the noise correlation length.
    LatticeExceedsCorrelation { size: f64, r_c: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Regime(RegimeWarning::OutsideDipoleRegime { p_a0 }) => {
                write!(f, "p*a0 = {p_a0:.3e} exceeds 0.1; small-p dipole formula unreliable")
            }
            Warning::Regime(RegimeWarning::BelowHighMomentumRegime { photon_ev }) => {
                write!(f, "photon energy {photon_ev:.3e} eV below 100 eV; high-p formula unreliable")
            }
            Warning::LatticeExceedsCorrelation { size, r_c } => {
                write!(f, "lattice size {size:.3e} cm exceeds r_c = {r_c:.3e} cm")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    /// `dΓ/dp`, s⁻¹·cm.
    pub rate: f64,
    /// Coherent over incoherent squared structure factor.
    pub structure_factor: f64,
    pub warnings: Vec<Warning>,
}

impl System {
    pub fn free_electron(k: &Constants) -> Self {
        System::Free(FreeParticle::electron(k))
    }

    /// Rate, structure factor and regime warnings at momentum `p`.
    ///
    /// The closed-form free-particle and hydrogen formulas assume a Gaussian
    /// correlation; with a general kernel those systems go through
    /// [`rate_general`] instead.
    pub fn emission(
        &self,
        k: &Constants,
        p: PhotonMomentum,
        noise: &NoiseSpec,
        corr: &SpatialCorrelation,
        tol: Tolerance,
    ) -> Result<Emission> {
        let mut warnings = Vec::new();
        let omega = k.angular_frequency(p);
        let (rate, structure_factor) = match (self, corr) {
            (System::Free(particle), SpatialCorrelation::Gaussian { r_c }) => {
                let lambda = noise.effective_lambda(*r_c, omega)?;
                (rate_closed_form(k, p, particle, lambda, *r_c)?, 1.0)
            }
            (System::Free(particle), _) => {
                let sys = [ParticleSpec::new(particle.charge, particle.mass)?];
                let cfg = InternalConfiguration::FixedPositions(alloc::vec![[0.0; 3]]);
                (rate_general(k, p, &sys, &cfg, noise, corr, RateMode::W0, tol)?, 1.0)
            }
            (System::Hydrogen { atom, regime }, _) => {
                let f = ground_state_form_factor(p.get() * atom.a0_eff);
                let w = match regime {
                    HydrogenRegime::SmallP => small_p_warning(p, atom),
                    HydrogenRegime::HighP => high_p_warning(k, p),
                };
                warnings.extend(w.map(Warning::Regime));
                let rate = match (regime, corr) {
                    (HydrogenRegime::SmallP, SpatialCorrelation::Gaussian { r_c }) => {
                        rate_small_p(k, p, atom, noise.effective_lambda(*r_c, omega)?, *r_c)?
                    }
                    (HydrogenRegime::HighP, SpatialCorrelation::Gaussian { r_c }) => {
                        rate_high_p(k, p, atom, noise.effective_lambda(*r_c, omega)?, *r_c)?
                    }
                    (HydrogenRegime::HighP, _) => {
                        let sys = [
                            ParticleSpec::new(-atom.charge, atom.m1)?,
                            ParticleSpec::new(atom.charge, atom.m2)?,
                        ];
                        let cfg = InternalConfiguration::Hydrogenic1s { a0_eff: atom.a0_eff };
                        rate_general(k, p, &sys, &cfg, noise, corr, RateMode::W0, tol)?
                    }
                    (HydrogenRegime::SmallP, _) => {
                        return Err(Error::Contract("the dipole formula needs a Gaussian correlation"))
                    }
                };
                (rate, f)
            }
            (System::ManyBody { particles, config, mode }, _) => (
                rate_general(k, p, particles, config, noise, corr, *mode, tol)?,
                normalized_structure_factor(particles, config, p)?,
            ),
            (System::Crystal(cell), _) => {
                let r_c = corr.reference_length();
                if let Some(size) = cell.size_warning(r_c) {
                    warnings.push(Warning::LatticeExceedsCorrelation { size, r_c });
                }
                let incoherent: f64 = cell.sites.iter().map(|s| s.charge * s.charge).sum();
                let sf = if incoherent > 0.0 { cell.variance(p) / incoherent } else { 0.0 };
                (crystal_rate(k, p, cell, noise, corr, tol)?, sf)
            }
        };
        Ok(Emission { rate, structure_factor, warnings })
    }

    pub fn rate(
        &self,
        k: &Constants,
        p: PhotonMomentum,
        noise: &NoiseSpec,
        corr: &SpatialCorrelation,
        tol: Tolerance,
    ) -> Result<f64> {
        Ok(self.emission(k, p, noise, corr, tol)?.rate)
    }

    /// Expected photons per unit momentum after time `t` under a
    /// non-stationary correlator: the rate per unit γ times the real part of
    /// the time-integrated weight.
    pub fn nonstationary_count(
        &self,
        k: &Constants,
        p: PhotonMomentum,
        delta: &(dyn Fn(f64, f64) -> f64 + Sync),
        t: f64,
        corr: &SpatialCorrelation,
        tol: Tolerance,
    ) -> Result<f64> {
        let per_gamma = self.rate(k, p, &NoiseSpec::constant_spectrum(1.0), corr, tol)?;
        let w = nonstationary_weight(delta, t, k.angular_frequency(p), tol)?;
        Ok(per_gamma * w.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::gamma_from_lambda;

    const K: Constants = Constants::CODATA_2018;

    #[test]
    fn dispatch_matches_direct_calls() {
        let p = K.energy_to_momentum(11.0).unwrap();
        let corr = SpatialCorrelation::gaussian(1e-5).unwrap();
        let noise = NoiseSpec::white(2.2e-17).unwrap();
        let tol = Tolerance::DEFAULT_1D;
        let free = System::free_electron(&K).emission(&K, p, &noise, &corr, tol).unwrap();
        assert_eq!(free.rate, rate_closed_form(&K, p, &FreeParticle::electron(&K), 2.2e-17, 1e-5).unwrap());
        assert_eq!(free.structure_factor, 1.0);
        let atom = HydrogenicAtom::hydrogen(&K);
        let h = System::Hydrogen { atom, regime: HydrogenRegime::HighP };
        let e = h.emission(&K, p, &noise, &corr, tol).unwrap();
        assert!((e.rate / rate_high_p(&K, p, &atom, 2.2e-17, 1e-5).unwrap() - 1.0).abs() < 1e-14);
        assert!((e.structure_factor - 0.901).abs() < 1e-3);
        assert!(e.warnings.is_empty());
        let small = System::Hydrogen { atom, regime: HydrogenRegime::SmallP };
        assert_eq!(small.emission(&K, p, &noise, &corr, tol).unwrap().warnings.len(), 1);
    }

    #[test]
    fn constant_spectrum_equals_white() {
        let corr = SpatialCorrelation::gaussian(1e-5).unwrap();
        let gamma = gamma_from_lambda(2.2e-17, 1e-5).unwrap();
        let white = NoiseSpec::white(2.2e-17).unwrap();
        let flat = NoiseSpec::constant_spectrum(gamma);
        let p = K.energy_to_momentum(3.0).unwrap();
        let sys = System::free_electron(&K);
        let a = sys.rate(&K, p, &white, &corr, Tolerance::DEFAULT_1D).unwrap();
        let b = sys.rate(&K, p, &flat, &corr, Tolerance::DEFAULT_1D).unwrap();
        assert!((a / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonstationary_count_reduces_to_white() {
        // Δ(s,u) = γ δ_τ(s−u) with τ ≪ t gives γ t
        let corr = SpatialCorrelation::gaussian(1e-5).unwrap();
        let gamma = gamma_from_lambda(2.2e-17, 1e-5).unwrap();
        let (t, tau) = (1e-17, 1e-22);
        let delta = move |s: f64, u: f64| {
            let v = (s - u) / tau;
            gamma * (-0.5 * v * v).exp() / (tau * (2.0 * core::f64::consts::PI).sqrt())
        };
        let p = K.energy_to_momentum(11.0).unwrap();
        let sys = System::free_electron(&K);
        let n = sys
            .nonstationary_count(&K, p, &delta, t, &corr, Tolerance::rel(1e-6))
            .unwrap();
        let expect = sys.rate(&K, p, &NoiseSpec::white(2.2e-17).unwrap(), &corr, Tolerance::DEFAULT_1D).unwrap() * t;
        assert!((n / expect - 1.0).abs() < 1e-3, "{n:e} vs {expect:e}");
    }

    #[test]
    fn small_p_needs_gaussian() {
        let atom = HydrogenicAtom::hydrogen(&K);
        let corr = SpatialCorrelation::general(alloc::sync::Arc::new(|w: f64| (-w * w * 1e-10).exp()), 1e-5, None)
            .unwrap();
        let sys = System::Hydrogen { atom, regime: HydrogenRegime::SmallP };
        let p = K.energy_to_momentum(1.0).unwrap();
        let r = sys.rate(&K, p, &NoiseSpec::white(1e-16).unwrap(), &corr, Tolerance::DEFAULT_1D);
        assert!(matches!(r, Err(Error::Contract(_))));
    }
}
