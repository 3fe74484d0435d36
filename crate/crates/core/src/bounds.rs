//! Upper bounds on λ from experimental rate limits.
//!
//! Every implemented rate is linear in the noise strength, so the bound is
//! a single division.

use alloc::string::String;

use crate::emitter::System;
use crate::noise::{NoiseSpec, SpatialCorrelation};
use crate::quadrature::Tolerance;
use crate::units::{Constants, STANDARD_LAMBDA};
use crate::{Error, Result};

/// Upper limit on `dΓ/dp` (s⁻¹·cm) at one photon energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentalLimit {
    pub energy_kev: f64,
    pub rate_limit: f64,
    pub description: String,
}

impl ExperimentalLimit {
    pub fn new(energy_kev: f64, rate_limit: f64, description: impl Into<String>) -> Result<Self> {
        if !(energy_kev > 0.0) || !energy_kev.is_finite() {
            return Err(Error::Domain("limit energy must be positive"));
        }
        if !(rate_limit > 0.0) || !rate_limit.is_finite() {
            return Err(Error::Domain("rate limit must be positive"));
        }
        Ok(Self { energy_kev, rate_limit, description: description.into() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaBound {
    Bounded(f64),
    /// The model predicts no emission at the limit's energy.
    Unconstrained,
}

impl LambdaBound {
    pub fn value(self) -> Option<f64> {
        match self {
            LambdaBound::Bounded(v) => Some(v),
            LambdaBound::Unconstrained => None,
        }
    }

    pub fn ratio_to_standard(self) -> Option<f64> {
        self.value().map(|v| v / STANDARD_LAMBDA)
    }
}

/// Largest λ compatible with `limit`.
///
/// White noise: the rate is evaluated at λ = 1 and inverted. Colored noise:
/// the spectrum's overall scale is bounded and reported as the equivalent
/// white-noise λ at the photon frequency; a vanishing spectrum there gives
/// [`LambdaBound::Unconstrained`].
pub fn lambda_bound(
    k: &Constants,
    limit: &ExperimentalLimit,
    system: &System,
    noise: &NoiseSpec,
    corr: &SpatialCorrelation,
    tol: Tolerance,
) -> Result<LambdaBound> {
    let p = k.energy_to_momentum(limit.energy_kev)?;
    match noise {
        NoiseSpec::White { .. } => {
            let per_lambda = system.rate(k, p, &NoiseSpec::white(1.0)?, corr, tol)?;
            if per_lambda == 0.0 {
                return Ok(LambdaBound::Unconstrained);
            }
            Ok(LambdaBound::Bounded(limit.rate_limit / per_lambda))
        }
        NoiseSpec::Colored { .. } => {
            let rate = system.rate(k, p, noise, corr, tol)?;
            if rate == 0.0 {
                return Ok(LambdaBound::Unconstrained);
            }
            let lambda = noise.effective_lambda(corr.reference_length(), k.angular_frequency(p))?;
            Ok(LambdaBound::Bounded(lambda * limit.rate_limit / rate))
        }
        NoiseSpec::NonStationary { .. } => Err(Error::Contract("non-stationary noise has no rate to bound")),
    }
}

/// `λ_bound · (r_new / r_old)²`.
pub fn bound_rescale_rc(lambda_bound: f64, r_c_old: f64, r_c_new: f64) -> Result<f64> {
    if !(r_c_old > 0.0) || !(r_c_new > 0.0) {
        return Err(Error::Domain("correlation lengths must be positive"));
    }
    let s = r_c_new / r_c_old;
    Ok(lambda_bound * s * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emitter::HydrogenRegime;
    use crate::hydrogen::HydrogenicAtom;
    use crate::manybody::{CrystalCell, CrystalSite};
    use proptest::prelude::*;

    const K: Constants = Constants::CODATA_2018;
    const TOL: Tolerance = Tolerance::DEFAULT_1D;

    fn gauss(r_c: f64) -> SpatialCorrelation {
        SpatialCorrelation::gaussian(r_c).unwrap()
    }

    fn white() -> NoiseSpec {
        NoiseSpec::white(STANDARD_LAMBDA).unwrap()
    }

    #[test]
    fn fixed_point_and_linearity() {
        let sys = System::free_electron(&K);
        let p = K.energy_to_momentum(11.0).unwrap();
        let lambda0 = 3.3e-12;
        let rate = sys.rate(&K, p, &NoiseSpec::white(lambda0).unwrap(), &gauss(1e-5), TOL).unwrap();
        let lim = ExperimentalLimit::new(11.0, rate, "synthetic").unwrap();
        let b = lambda_bound(&K, &lim, &sys, &white(), &gauss(1e-5), TOL).unwrap().value().unwrap();
        assert!((b / lambda0 - 1.0).abs() < 1e-14);
        let lim2 = ExperimentalLimit::new(11.0, 2.0 * rate, "doubled").unwrap();
        let b2 = lambda_bound(&K, &lim2, &sys, &white(), &gauss(1e-5), TOL).unwrap().value().unwrap();
        assert!((b2 / b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn germanium_bound_ratio() {
        // rate limit reproducing λ < 7e-11 s⁻¹ for a free electron at 11 keV
        let lim = ExperimentalLimit::new(11.0, 1.290_097_779_072_884_7e-39, "germanium").unwrap();
        let b = lambda_bound(&K, &lim, &System::free_electron(&K), &white(), &gauss(1e-5), TOL).unwrap();
        let ratio = b.ratio_to_standard().unwrap();
        assert!((b.value().unwrap() / 7e-11 - 1.0).abs() < 1e-12);
        assert!((2.5e6..=3.5e6).contains(&ratio), "{ratio}");
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(bound_rescale_rc(7e-11, 1e-5, 1e-4).unwrap() / 7e-11, 100.0);
        assert_eq!(bound_rescale_rc(7e-11, 1e-5, 1e-5).unwrap(), 7e-11);
        assert_eq!(bound_rescale_rc(8.0, 2.0, 1.0).unwrap(), 2.0);
        assert!(bound_rescale_rc(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn rescale_agrees_with_recomputation() {
        let lim = ExperimentalLimit::new(11.0, 1e-40, "x").unwrap();
        let atom = HydrogenicAtom::hydrogen(&K);
        for sys in [System::free_electron(&K), System::Hydrogen { atom, regime: HydrogenRegime::HighP }] {
            let a = lambda_bound(&K, &lim, &sys, &white(), &gauss(1e-5), TOL).unwrap().value().unwrap();
            let b = lambda_bound(&K, &lim, &sys, &white(), &gauss(1e-4), TOL).unwrap().value().unwrap();
            assert!((bound_rescale_rc(a, 1e-5, 1e-4).unwrap() / b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unconstrained_cases() {
        let lim = ExperimentalLimit::new(11.0, 1e-40, "x").unwrap();
        let rigid = CrystalCell::new(
            alloc::vec![CrystalSite { charge: 1.0, position: [0.0; 3], sigma: 0.0 }],
            100.0,
        )
        .unwrap();
        let b = lambda_bound(&K, &lim, &System::Crystal(rigid), &white(), &gauss(1e-5), TOL).unwrap();
        assert_eq!(b, LambdaBound::Unconstrained);
        let cut = NoiseSpec::colored(|_| 1e-30, Some(1e15));
        let b = lambda_bound(&K, &lim, &System::free_electron(&K), &cut, &gauss(1e-5), TOL).unwrap();
        assert_eq!(b, LambdaBound::Unconstrained);
        let flat = NoiseSpec::constant_spectrum(1e-30);
        assert!(lambda_bound(&K, &lim, &System::free_electron(&K), &flat, &gauss(1e-5), TOL)
            .unwrap()
            .value()
            .is_some());
        assert!(ExperimentalLimit::new(11.0, 0.0, "x").is_err());
    }

    proptest! {
        #[test]
        fn bound_inverts_rate(e in 1.0f64..100.0, limit in 1e-45f64..1e-35) {
            let sys = System::free_electron(&K);
            let lim = ExperimentalLimit::new(e, limit, "p").unwrap();
            let b = lambda_bound(&K, &lim, &sys, &white(), &gauss(1e-5), TOL).unwrap().value().unwrap();
            let p = K.energy_to_momentum(e).unwrap();
            let r = sys.rate(&K, p, &NoiseSpec::white(b).unwrap(), &gauss(1e-5), TOL).unwrap();
            prop_assert!((r / limit - 1.0).abs() < 1e-14);
        }
    }
}
