//! Emission from a single free charged particle initially at rest.

use core::f64::consts::PI;

// idle when std is linked and provides the inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::noise::gamma_from_lambda;
use crate::quadrature::{integrate_3d_gaussian, Tolerance};
use crate::units::{Constants, PhotonMomentum};
use crate::{Error, Result};

/// A point particle; `charge` in units of e, `mass` in g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParticle {
    pub charge: f64,
    pub mass: f64,
}

impl FreeParticle {
    pub fn new(charge: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::Domain("particle mass must be positive"));
        }
        if !charge.is_finite() {
            return Err(Error::Domain("particle charge must be finite"));
        }
        Ok(Self { charge, mass })
    }

    pub fn electron(k: &Constants) -> Self {
        Self { charge: -1.0, mass: k.m_e }
    }
}

fn check_lambda_rc(lambda: f64, r_c: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain("lambda must be non-negative"));
    }
    if !(r_c > 0.0) || !r_c.is_finite() {
        return Err(Error::Domain("r_c must be positive"));
    }
    Ok(())
}

/// `dΓ/dp = (ħ/c³) e² λ / (π r_c² m_N² p)`, times the squared charge.
///
/// Keeps only ħcp in the energy denominator, so the particle mass drops out.
pub fn rate_closed_form(
    k: &Constants,
    p: PhotonMomentum,
    particle: &FreeParticle,
    lambda: f64,
    r_c: f64,
) -> Result<f64> {
    check_lambda_rc(lambda, r_c)?;
    let q2 = particle.charge * particle.charge;
    Ok(q2 * k.hbar * k.e2 * lambda / (PI * k.c.powi(3) * r_c * r_c * k.m_n * k.m_n * p.get()))
}

/// Same rate with the full energy denominator
/// `ħcp − (ħ²/2m)(p² + 2p·q)` kept inside the electron-momentum integral.
///
/// The integral runs over `u = p + q` with the noise Gaussian `e^{−u² r_c²}`
/// as quadrature weight and the polarization sum `u² − (u·p̂)²`. Fails with
/// [`Error::SingularDenominator`] when the denominator reaches zero within
/// `|u| ≤ 6/r_c`.
pub fn rate_exact_quadrature(
    k: &Constants,
    p: PhotonMomentum,
    particle: &FreeParticle,
    lambda: f64,
    r_c: f64,
    tol: Tolerance,
) -> Result<f64> {
    check_lambda_rc(lambda, r_c)?;
    let pv = p.get();
    let photon = k.hbar * k.c * pv;
    let recoil = k.hbar * k.hbar / (2.0 * particle.mass);
    let denominator = |uz: f64| photon - recoil * (2.0 * pv * uz - pv * pv);
    let reach = 6.0 / r_c;
    let min_d = denominator(reach).min(denominator(-reach));
    if !(min_d > 0.0) {
        return Err(Error::SingularDenominator { p: pv, min_denominator: min_d });
    }
    // ∫ d³u e^{−u² r_c²} u⊥² (ħcp / D)²
    let integral = integrate_3d_gaussian(
        |u| {
            let ratio = photon / denominator(u[2]);
            (u[0] * u[0] + u[1] * u[1]) * ratio * ratio
        },
        r_c,
        tol,
    )?
    .value;
    let gamma = gamma_from_lambda(lambda, r_c)?;
    let q2 = particle.charge * particle.charge;
    let two_pi5 = (2.0 * PI).powi(5);
    // dΓ/dp = 4πp² · γ e² ħ³ / ((2π)⁵ m_N² c p) · ∫ u⊥² e^{−u² r_c²} / D²
    let pref = 4.0 * PI * pv * pv * gamma * q2 * k.e2 * k.hbar.powi(3) / (two_pi5 * k.m_n * k.m_n * k.c * pv);
    Ok(pref * integral / (photon * photon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_1d;

    const K: Constants = Constants::CODATA_2018;

    fn p11() -> PhotonMomentum {
        K.energy_to_momentum(11.0).unwrap()
    }

    #[test]
    fn golden_value_at_11_kev() {
        // mpmath evaluation of the closed form: 4.054593019943352e-46 s⁻¹·cm
        let r = rate_closed_form(&K, p11(), &FreeParticle::electron(&K), 2.2e-17, 1e-5).unwrap();
        assert!((r / 4.054_593_019_943_352e-46 - 1.0).abs() < 1e-12, "{r:e}");
    }

    #[test]
    fn simple_scalings() {
        let e = FreeParticle::electron(&K);
        let r1 = rate_closed_form(&K, p11(), &e, 1e-16, 1e-5).unwrap();
        let r2 = rate_closed_form(&K, p11().scaled(2.0).unwrap(), &e, 1e-16, 1e-5).unwrap();
        let r3 = rate_closed_form(&K, p11(), &e, 2e-16, 1e-5).unwrap();
        assert!((r1 / r2 - 2.0).abs() < 1e-14);
        assert!((r3 / r1 - 2.0).abs() < 1e-14);
        let heavy = FreeParticle::new(-1.0, K.m_p).unwrap();
        assert_eq!(rate_closed_form(&K, p11(), &heavy, 1e-16, 1e-5).unwrap(), r1);
    }

    #[test]
    fn exact_agrees_within_three_percent_at_11_kev() {
        let e = FreeParticle::electron(&K);
        let closed = rate_closed_form(&K, p11(), &e, 2.2e-17, 1e-5).unwrap();
        let exact = rate_exact_quadrature(&K, p11(), &e, 2.2e-17, 1e-5, Tolerance::DEFAULT_3D).unwrap();
        let rel = (exact / closed - 1.0).abs();
        assert!(rel < 0.03, "{rel}");
        // Leading correction is (1 + 1/R)^{-2} with R = 2mc²/ħcp.
        let r = K.approximation_ratio(p11(), K.m_e).unwrap();
        let lead = 1.0 / (1.0 + 1.0 / r).powi(2);
        assert!((exact / closed - lead).abs() < 1e-6);
    }

    #[test]
    fn infinite_mass_limit() {
        let heavy = FreeParticle::new(1.0, 1e12).unwrap();
        let closed = rate_closed_form(&K, p11(), &heavy, 1e-10, 1e-5).unwrap();
        let exact = rate_exact_quadrature(&K, p11(), &heavy, 1e-10, 1e-5, Tolerance::DEFAULT_3D).unwrap();
        assert!((exact / closed - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_lambda_zero_rate() {
        let e = FreeParticle::electron(&K);
        assert_eq!(rate_exact_quadrature(&K, p11(), &e, 0.0, 1e-5, Tolerance::DEFAULT_3D).unwrap(), 0.0);
        assert_eq!(rate_closed_form(&K, p11(), &e, 0.0, 1e-5).unwrap(), 0.0);
    }

    #[test]
    fn resonant_denominator_detected() {
        // Light particle and noise momenta ~1/r_c well above p: the
        // denominator crosses zero inside the Gaussian weight.
        let light = FreeParticle::new(1.0, 1e-30).unwrap();
        let err = rate_exact_quadrature(&K, p11(), &light, 1e-16, 1e-10, Tolerance::DEFAULT_3D);
        assert!(matches!(err, Err(Error::SingularDenominator { .. })), "{err:?}");
    }

    #[test]
    fn emission_is_back_to_back() {
        // Fraction of ∫ u⊥² e^{−u² r_c²} (ħcp/D)² d³u inside |u| < 5/r_c,
        // in spherical coordinates around p̂.
        let rc = 1e-5;
        let pv = p11().get();
        let photon = K.hbar * K.c * pv;
        let recoil = K.hbar * K.hbar / (2.0 * K.m_e);
        let shell = |y: f64| {
            let u = y / rc;
            integrate_1d(
                |mu: f64| {
                    let d = photon - recoil * (2.0 * pv * u * mu - pv * pv);
                    (1.0 - mu * mu) * (photon / d).powi(2)
                },
                -1.0,
                1.0,
                Tolerance::rel(1e-12),
            )
            .unwrap()
            .value
                * y.powi(4)
                * (-y * y).exp()
        };
        let inside = integrate_1d(shell, 0.0, 5.0, Tolerance::rel(1e-12)).unwrap().value;
        let total = inside + integrate_1d(shell, 5.0, 30.0, Tolerance::rel(1e-12)).unwrap().value;
        assert!(inside / total > 0.9999);
    }
}
