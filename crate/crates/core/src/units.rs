//! Physical constants (CGS-Gaussian, unrationalized charge) and photon
//! energy/momentum conversions.

use crate::{Error, Result};

/// One keV in erg.
pub const KEV_IN_ERG: f64 = 1.602_176_634e-9;

/// Standard CSL collapse rate, s⁻¹.
pub const STANDARD_LAMBDA: f64 = 2.2e-17;

/// Conventional CSL correlation length, cm.
pub const STANDARD_R_C: f64 = 1.0e-5;

/// Constant table used by every rate formula.
///
/// `e2` is the unrationalized charge squared, `e²/(ħc) = α`. The
/// rationalized (Heaviside-Lorentz) convention corresponds to `e2 / (4π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// erg·s
    pub hbar: f64,
    /// cm/s
    pub c: f64,
    /// erg·cm
    pub e2: f64,
    /// g
    pub m_e: f64,
    /// g
    pub m_p: f64,
    /// Reference nucleon mass of the noise coupling, g.
    pub m_n: f64,
    /// Bohr radius (infinite nuclear mass), cm.
    pub a0: f64,
}

impl Constants {
    /// CODATA 2018 values; `m_n` is the proton mass.
    pub const CODATA_2018: Constants = Constants {
        hbar: 1.054_571_817e-27,
        c: 2.997_924_58e10,
        e2: 2.307_077_550_935_090_3e-19,
        m_e: 9.109_383_701_5e-28,
        m_p: 1.672_621_923_69e-24,
        m_n: 1.672_621_923_69e-24,
        a0: 5.291_772_109_03e-9,
    };

    pub const VERSION: &'static str = "CODATA-2018";

    /// Same table with a different nucleon reference mass.
    pub fn with_nucleon_mass(mut self, m_n: f64) -> Result<Self> {
        if !(m_n > 0.0) || !m_n.is_finite() {
            return Err(Error::Domain("nucleon mass must be positive"));
        }
        self.m_n = m_n;
        Ok(self)
    }

    pub fn fine_structure(&self) -> f64 {
        self.e2 / (self.hbar * self.c)
    }

    /// ħc in keV·cm.
    pub fn hbar_c_kev_cm(&self) -> f64 {
        self.hbar * self.c / KEV_IN_ERG
    }

    /// Relative mismatch between the stored Bohr radius and `ħ²/(m_e e²)`.
    pub fn bohr_radius_mismatch(&self) -> f64 {
        (self.a0 * self.m_e * self.e2 / (self.hbar * self.hbar) - 1.0).abs()
    }

    pub fn energy_to_momentum(&self, energy_kev: f64) -> Result<PhotonMomentum> {
        if !(energy_kev > 0.0) || !energy_kev.is_finite() {
            return Err(Error::Domain("photon energy must be positive"));
        }
        PhotonMomentum::new(energy_kev / self.hbar_c_kev_cm())
    }

    pub fn momentum_to_energy(&self, p: PhotonMomentum) -> f64 {
        p.get() * self.hbar_c_kev_cm()
    }

    /// Photon energy ħcp in erg.
    pub fn photon_energy_erg(&self, p: PhotonMomentum) -> f64 {
        self.hbar * self.c * p.get()
    }

    /// Angular frequency ω = cp, s⁻¹.
    pub fn angular_frequency(&self, p: PhotonMomentum) -> f64 {
        self.c * p.get()
    }

    /// `2mc²/(ħcp)`: how strongly ħcp dominates the recoil term of the
    /// free-particle energy denominator for back-to-back emission.
    pub fn approximation_ratio(&self, p: PhotonMomentum, mass: f64) -> Result<f64> {
        if !(mass > 0.0) {
            return Err(Error::Domain("mass must be positive"));
        }
        Ok(2.0 * mass * self.c * self.c / self.photon_energy_erg(p))
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Photon wavenumber magnitude, cm⁻¹. Always strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PhotonMomentum(f64);

impl PhotonMomentum {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p.is_finite() {
            Ok(Self(p))
        } else {
            Err(Error::Domain("photon momentum must be positive and finite"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn scaled(self, k: f64) -> Result<Self> {
        Self::new(self.0 * k)
    }

    pub fn wavelength_cm(self) -> f64 {
        2.0 * core::f64::consts::PI / self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: Constants = Constants::CODATA_2018;

    #[test]
    fn fine_structure_matches_137_04() {
        let inv = 1.0 / K.fine_structure();
        assert!((inv - 137.04).abs() < 0.005, "{inv}");
    }

    #[test]
    fn bohr_radius_consistent() {
        assert!(K.bohr_radius_mismatch() < 1e-4);
    }

    #[test]
    fn eleven_kev_momentum() {
        // mpmath with CODATA ħ, c: 5.574503791187640e8
        let p = K.energy_to_momentum(11.0).unwrap();
        assert!((p.get() / 5.574_503_791_187_64e8 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conversion_is_linear_and_round_trips() {
        let p1 = K.energy_to_momentum(1.0).unwrap().get();
        let pm = K.energy_to_momentum(0.001).unwrap().get();
        assert!((p1 / pm / 1000.0 - 1.0).abs() < 1e-14);
        for e in [1e-6, 0.3, 11.0, 511.0, 1e4] {
            let back = K.momentum_to_energy(K.energy_to_momentum(e).unwrap());
            assert!((back / e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_positive_energy_rejected() {
        assert!(K.energy_to_momentum(0.0).is_err());
        assert!(K.energy_to_momentum(-1.0).is_err());
        assert!(K.energy_to_momentum(f64::NAN).is_err());
    }

    #[test]
    fn approximation_ratio_values() {
        let p = K.energy_to_momentum(11.0).unwrap();
        let r = K.approximation_ratio(p, K.m_e).unwrap();
        // mpmath: 92.90889999930257
        assert!((r - 92.908_899_999_302_57).abs() < 1e-8);
        assert!(r > 50.0 && r < 200.0);
        let rest_kev = K.m_e * K.c * K.c / KEV_IN_ERG;
        let p2 = K.energy_to_momentum(2.0 * rest_kev).unwrap();
        assert!((K.approximation_ratio(p2, K.m_e).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nucleon_mass_is_configurable() {
        let k = K.with_nucleon_mass(1.66e-24).unwrap();
        assert_eq!(k.m_n, 1.66e-24);
        assert!(K.with_nucleon_mass(0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn energy_conversion_linear(e in 1e-6f64..1e6, k in 1e-3f64..1e3) {
            let a = K.energy_to_momentum(k * e).unwrap().get();
            let b = k * K.energy_to_momentum(e).unwrap().get();
            proptest::prop_assert!((a / b - 1.0).abs() < 1e-14);
        }
    }
}
