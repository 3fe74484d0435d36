//! Oracle comparisons run by `cslrad verify`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use cslrad_core::bounds::{bound_rescale_rc, lambda_bound};
use cslrad_core::emitter::System;
use cslrad_core::free_electron::{rate_closed_form, rate_exact_quadrature, FreeParticle};
use cslrad_core::hydrogen::{
    dipole_sum, form_factor_numeric, ground_state_form_factor, rate_high_p, DipoleSumMethod, HydrogenicAtom,
};
use cslrad_core::manybody::{rate_general, InternalConfiguration, ParticleSpec, RateMode};
use cslrad_core::noise::{gamma_from_lambda, nonstationary_weight, NoiseSpec, SpatialCorrelation};
use cslrad_core::quadrature::Tolerance;
use cslrad_core::units::{Constants, STANDARD_LAMBDA, STANDARD_R_C};

use crate::bound::LimitsFile;

/// 11 keV photon wavenumber from CODATA 2018 ħ and c, arbitrary precision.
const P_11_KEV: f64 = 5.574_503_791_187_64e8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub reference: f64,
    /// The quantity compared against `tolerance`.
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Excluded from the JSON report so that it stays reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub constants: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            match &c.error {
                Some(e) => s += &format!("[{status}] {}: error: {e}\n", c.name),
                None => s += &format!(
                    "[{status}] {}: value {:.10e}, reference {:.10e}, deviation {:.3e} (tolerance {:.1e}) in {:.2} s\n",
                    c.name, c.value, c.reference, c.deviation, c.tolerance, c.seconds
                ),
            }
        }
        s += &format!("{} of {} checks passed\n", self.checks.len() - self.failed(), self.checks.len());
        s
    }
}

type Outcome = cslrad_core::Result<(f64, f64, f64)>;

fn check(name: &'static str, tolerance: f64, f: impl FnOnce() -> Outcome) -> Check {
    let start = std::time::Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok((value, reference, deviation)) => Check {
            name,
            value,
            reference,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
            error: None,
            seconds,
        },
        Err(e) => Check {
            name,
            value: f64::NAN,
            reference: f64::NAN,
            deviation: f64::INFINITY,
            tolerance,
            passed: false,
            error: Some(e.to_string()),
            seconds,
        },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Monte-Carlo estimate of `⟨|f − ⟨f⟩|²⟩` for one site and its standard error.
pub fn crystal_variance_mc(p: f64, sigma: f64, charge: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma is non-negative");
    let mean = (-0.5 * p * p * sigma * sigma).exp();
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        // only the displacement along p enters
        let z: f64 = normal.sample(&mut rng);
        let (re, im) = ((p * z).cos() - mean, -(p * z).sin());
        let v = charge * charge * (re * re + im * im);
        s1 += v;
        s2 += v * v;
    }
    let n = samples as f64;
    let m = s1 / n;
    (m, ((s2 / n - m * m) / (n - 1.0)).sqrt())
}

pub fn run_verify(k: &Constants) -> VerifyReport {
    let tol = Tolerance::DEFAULT_1D;
    let (lambda, r_c) = (STANDARD_LAMBDA, STANDARD_R_C);
    let corr = SpatialCorrelation::gaussian(r_c).expect("valid r_c");
    let white = NoiseSpec::white(lambda).expect("valid lambda");
    let electron = FreeParticle::electron(k);
    let atom = HydrogenicAtom::hydrogen(k);
    let energies = [1.0, 3.0, 11.0, 30.0, 100.0];
    let mut checks = Vec::new();

    checks.push(check("inverse_fine_structure", 0.005, || {
        let v = 1.0 / k.fine_structure();
        Ok((v, 137.04, (v - 137.04).abs()))
    }));
    checks.push(check("bohr_radius_consistency", 1e-4, || Ok((k.a0, k.a0, k.bohr_radius_mismatch()))));
    checks.push(check("momentum_11kev", 1e-9, || {
        let p = k.energy_to_momentum(11.0)?.get();
        Ok((p, P_11_KEV, rel(p, P_11_KEV)))
    }));
    checks.push(check("dipole_sum_dalgarno_lewis", 1e-4, || {
        let v = dipole_sum(DipoleSumMethod::DalgarnoLewis)?.value;
        Ok((v, 43.0 / 8.0, (v - 43.0 / 8.0).abs()))
    }));
    checks.push(check("form_factor_numeric_vs_closed", 1e-8, || {
        let mut worst = (0.0, 0.0, 0.0);
        for i in 0..50 {
            let x = 10f64.powf(-2.0 + 4.0 * i as f64 / 49.0);
            let n = form_factor_numeric(x, Tolerance::rel(1e-11))?;
            let c = ground_state_form_factor(x);
            if (n - c).abs() >= worst.2 {
                worst = (n, c, (n - c).abs());
            }
        }
        Ok(worst)
    }));
    checks.push(check("exact_denominator_11kev", 0.03, || {
        let p = k.energy_to_momentum(11.0)?;
        let e = rate_exact_quadrature(k, p, &electron, lambda, r_c, Tolerance::DEFAULT_3D)?;
        let c = rate_closed_form(k, p, &electron, lambda, r_c)?;
        Ok((e, c, rel(e, c)))
    }));
    checks.push(check("exact_denominator_monotone", 0.0, || {
        let p = k.energy_to_momentum(11.0)?;
        let c = rate_closed_form(k, p, &electron, lambda, r_c)?;
        let mut last = f64::INFINITY;
        let mut violations = 0.0;
        for ratio in [10.0, 1e2, 1e3, 1e4] {
            // mass with 2mc²/ħcp = ratio
            let m = ratio * k.photon_energy_erg(p) / (2.0 * k.c * k.c);
            let e = rate_exact_quadrature(k, p, &FreeParticle::new(-1.0, m)?, lambda, r_c, Tolerance::DEFAULT_3D)?;
            let d = rel(e, c);
            if !(d < last) {
                violations += 1.0;
            }
            last = d;
        }
        Ok((last, 0.0, violations))
    }));
    checks.push(check("hydrogen_over_free_11kev", 0.01, || {
        let p = k.energy_to_momentum(11.0)?;
        let r = rate_high_p(k, p, &atom, lambda, r_c)? / rate_closed_form(k, p, &electron, lambda, r_c)?;
        Ok((r, 1.80, (r - 1.80).abs()))
    }));
    checks.push(check("many_body_reduces_to_free", 1e-6, || {
        let sys = [ParticleSpec::new(-1.0, k.m_e)?];
        let cfg = InternalConfiguration::FixedPositions(vec![[0.0; 3]]);
        let mut worst = (0.0, 0.0, 0.0);
        for e in energies {
            let p = k.energy_to_momentum(e)?;
            let g = rate_general(k, p, &sys, &cfg, &white, &corr, RateMode::W0, tol)?;
            let c = rate_closed_form(k, p, &electron, lambda, r_c)?;
            if rel(g, c) >= worst.2 {
                worst = (g, c, rel(g, c));
            }
        }
        Ok(worst)
    }));
    checks.push(check("many_body_reduces_to_hydrogen", 1e-6, || {
        let sys = [ParticleSpec::new(-1.0, k.m_e)?, ParticleSpec::new(1.0, k.m_p)?];
        let cfg = InternalConfiguration::Hydrogenic1s { a0_eff: atom.a0_eff };
        let mut worst = (0.0, 0.0, 0.0);
        for e in energies {
            let p = k.energy_to_momentum(e)?;
            let g = rate_general(k, p, &sys, &cfg, &white, &corr, RateMode::W0, tol)?;
            let h = rate_high_p(k, p, &atom, lambda, r_c)?;
            if rel(g, h) >= worst.2 {
                worst = (g, h, rel(g, h));
            }
        }
        Ok(worst)
    }));
    checks.push(check("crystal_variance_monte_carlo_sigmas", 3.0, || {
        let p = k.energy_to_momentum(11.0)?.get();
        let sigma = 1.0 / p;
        let analytic = 1.0 - (-p * p * sigma * sigma).exp();
        let (mc, se) = crystal_variance_mc(p, sigma, 1.0, 1_000_000, 7);
        Ok((mc, analytic, (mc - analytic).abs() / se))
    }));
    checks.push(check("colored_constant_equals_white", 1e-12, || {
        let p = k.energy_to_momentum(11.0)?;
        let flat = NoiseSpec::constant_spectrum(gamma_from_lambda(lambda, r_c)?);
        let sys = System::Free(electron);
        let a = sys.rate(k, p, &flat, &corr, tol)?;
        let b = sys.rate(k, p, &white, &corr, tol)?;
        Ok((a, b, rel(a, b)))
    }));
    checks.push(check("colored_cutoff_gives_zero", 0.0, || {
        let p = k.energy_to_momentum(11.0)?;
        let cut = NoiseSpec::colored(|_| 1e-30, Some(0.5 * k.angular_frequency(p)));
        let r = System::Free(electron).rate(k, p, &cut, &corr, tol)?;
        Ok((r, 0.0, r.abs()))
    }));
    checks.push(check("nonstationary_narrow_white_limit", 1e-3, || {
        let (t, tau, omega, gamma) = (1.0, 1e-5, 1e3, 2.0);
        let delta = move |s: f64, u: f64| gamma * gaussian(s - u, tau);
        let w = nonstationary_weight(&delta, t, omega, Tolerance::rel(1e-7))?;
        Ok((w.re, gamma * t, rel(w.re, gamma * t)))
    }));
    checks.push(check("nonstationary_wide_suppression", 1e-2, || {
        let (tau, omega) = (1.0, 3.0);
        let t = 1e4 * tau;
        let delta = move |s: f64, u: f64| gaussian(s - u, tau);
        let w = nonstationary_weight(&delta, t, omega, Tolerance::rel(1e-7))?;
        let expect = (-0.5 * omega * omega * tau * tau).exp();
        Ok((w.re / t, expect, rel(w.re / t, expect)))
    }));
    checks.push(check("bound_ratio_to_standard", 0.5e6, || {
        let lim = LimitsFile::bundled().get("germanium_11kev").expect("bundled entry");
        let b = lambda_bound(k, &lim, &System::Free(electron), &white, &corr, tol)?;
        let r = b.ratio_to_standard().unwrap_or(f64::INFINITY);
        Ok((r, 3e6, (r - 3e6).abs()))
    }));
    checks.push(check("bound_rescale_factor", 0.0, || {
        let f = bound_rescale_rc(7e-11, 1e-5, 1e-4)? / 7e-11;
        Ok((f, 100.0, (f - 100.0).abs()))
    }));

    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { version: crate::VERSION, constants: Constants::VERSION, passed, checks }
}

/// Unit-area Gaussian of width `tau`.
fn gaussian(v: f64, tau: f64) -> f64 {
    (-0.5 * (v / tau).powi(2)).exp() / (tau * (2.0 * PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_constants_pass() {
        let r = run_verify(&Constants::CODATA_2018);
        assert!(r.passed, "{}", r.to_text());
        let c = r.checks.iter().find(|c| c.name == "dipole_sum_dalgarno_lewis").unwrap();
        assert!(c.deviation < 1e-4);
    }

    #[test]
    fn perturbed_hbar_fails_matching_checks() {
        let mut k = Constants::CODATA_2018;
        k.hbar *= 1.01;
        let r = run_verify(&k);
        assert!(!r.passed);
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert!(failed.contains(&"inverse_fine_structure"), "{failed:?}");
        assert!(failed.contains(&"momentum_11kev"), "{failed:?}");
        assert!(!failed.contains(&"dipole_sum_dalgarno_lewis"));
    }
}
