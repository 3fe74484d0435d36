//! Hydrogenic atoms in the 1s ground state.
//!
//! Two limits are provided: the long-wavelength dipole regime, where the rate
//! grows as p³ and is controlled by `Σ_f |z_fi|²/E_fi²`, and the short
//! wavelength regime, where the rate is the free-particle rate times `2F`
//! with `F` the ground-state form factor. The crossover in between is not
//! modelled.

use core::f64::consts::PI;

// idle when std is linked and provides the inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::free_electron::{rate_closed_form, FreeParticle};
use crate::quadrature::{
    integrate_1d, integrate_1d_with_breakpoints, solve_radial_inhomogeneous, RadialFunction, Tolerance,
};
use crate::units::{Constants, PhotonMomentum};
use crate::{Error, Result};

/// `Σ_f |⟨f|z|1s⟩|² / E_fi²` in reduced-mass atomic units.
pub const DIPOLE_SUM_CLOSED_FORM: f64 = 43.0 / 8.0;

/// Two particles of opposite charge `±charge·e` bound in the 1s state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenicAtom {
    pub m1: f64,
    pub m2: f64,
    pub charge: f64,
    /// Bohr radius of the reduced system, `ħ²/(μ e² charge²)`, cm.
    pub a0_eff: f64,
}

impl HydrogenicAtom {
    pub fn new(k: &Constants, m1: f64, m2: f64, charge: f64) -> Result<Self> {
        if !(m1 > 0.0 && m2 > 0.0) {
            return Err(Error::Domain("hydrogenic masses must be positive"));
        }
        if !(charge != 0.0) || !charge.is_finite() {
            return Err(Error::Domain("hydrogenic charge must be nonzero"));
        }
        let mu = m1 * m2 / (m1 + m2);
        let a0_eff = k.hbar * k.hbar / (mu * k.e2 * charge * charge);
        Ok(Self { m1, m2, charge, a0_eff })
    }

    /// Electron and proton.
    pub fn hydrogen(k: &Constants) -> Self {
        Self::new(k, k.m_e, k.m_p, 1.0).expect("CODATA masses are positive")
    }

    pub fn total_mass(&self) -> f64 {
        self.m1 + self.m2
    }

    pub fn reduced_mass(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }

    pub fn swapped(&self) -> Self {
        Self { m1: self.m2, m2: self.m1, ..*self }
    }
}

/// `F(x) = 1 − 1/[1 + (x/2)²]²` with `x = p·a0`.
pub fn ground_state_form_factor(x: f64) -> f64 {
    let y = 0.25 * x * x;
    // (2y + y²)/(1+y)² avoids cancellation at small x
    y * (2.0 + y) / ((1.0 + y) * (1.0 + y))
}

/// `⟨1s| 1 − cos(x z) |1s⟩` (lengths in units of a0) by nested radial and
/// polar-angle quadrature.
pub fn form_factor_numeric(x: f64, tol: Tolerance) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain("form factor argument must be non-negative"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let inner_tol = Tolerance { rel: (tol.rel * 1e-2).max(1e-12), abs: tol.abs * 1e-2 };
    let mut failure = None;
    let radial = |r: f64| -> f64 {
        // (1/2)∫₋₁¹ dμ 2 sin²(x r μ / 2), even in μ
        let angular = integrate_1d(
            |mu| {
                let s = (0.5 * x * r * mu).sin();
                2.0 * s * s
            },
            0.0,
            1.0,
            inner_tol,
        );
        match angular {
            Ok(a) => 4.0 * r * r * (-2.0 * r).exp() * a.value,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        }
    };
    // 4r²e^{-2r} is below 1e-22 beyond r = 30
    let points = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 30.0];
    match integrate_1d_with_breakpoints(radial, &points, tol) {
        Ok(r) => Ok(r.value),
        Err(e) => Err(failure.unwrap_or(e)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DipoleSumMethod {
    ClosedForm,
    /// Solve `(H₀ − E₁ₛ) χ = z ψ₁ₛ` and take `⟨χ|χ⟩`.
    DalgarnoLewis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalStateSum {
    /// Reduced-mass atomic units.
    pub value: f64,
    pub method: DipoleSumMethod,
}

impl InternalStateSum {
    /// Restores units: `value · μ² a0⁶ / ħ⁴` (s⁴·cm²... i.e. cm²/erg²).
    pub fn in_cgs(&self, k: &Constants, atom: &HydrogenicAtom) -> f64 {
        let mu = atom.reduced_mass();
        self.value * mu * mu * atom.a0_eff.powi(6) / k.hbar.powi(4)
    }
}

pub fn dipole_sum(method: DipoleSumMethod) -> Result<InternalStateSum> {
    let value = match method {
        DipoleSumMethod::ClosedForm => DIPOLE_SUM_CLOSED_FORM,
        DipoleSumMethod::DalgarnoLewis => {
            // z ψ₁ₛ = r cosθ · 2e^{-r} Y₀₀ = (2/√3) r e^{-r} · r Y₁₀ → u(r) = (2/√3) r² e^{-r}
            let norm = 2.0 / 3f64.sqrt();
            let source = RadialFunction::sample_default(|r| norm * r * r * (-r).exp())?;
            let sol = solve_radial_inhomogeneous(-0.5, &source, 1, |r| -1.0 / r)?;
            sol.chi.norm_squared()
        }
    };
    Ok(InternalStateSum { value, method })
}

/// Regime diagnostics for the two limiting formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeWarning {
    /// `p·a0` above 0.1: the dipole expansion is unreliable.
    OutsideDipoleRegime { p_a0: f64 },
    /// Photon energy below 100 eV: `ħcp` no longer dominates atomic energies.
    BelowHighMomentumRegime { photon_ev: f64 },
}

pub fn small_p_warning(p: PhotonMomentum, atom: &HydrogenicAtom) -> Option<RegimeWarning> {
    let x = p.get() * atom.a0_eff;
    (x > 0.1).then_some(RegimeWarning::OutsideDipoleRegime { p_a0: x })
}

pub fn high_p_warning(k: &Constants, p: PhotonMomentum) -> Option<RegimeWarning> {
    let ev = k.momentum_to_energy(p) * 1e3;
    (ev < 100.0).then_some(RegimeWarning::BelowHighMomentumRegime { photon_ev: ev })
}

/// Long-wavelength rate `2p³ (ħ³/c) (1/m_N²) (e² λ / π r_c²) Σ_f |z_fi|²/E_fi²`.
pub fn rate_small_p(
    k: &Constants,
    p: PhotonMomentum,
    atom: &HydrogenicAtom,
    lambda: f64,
    r_c: f64,
) -> Result<f64> {
    let sum = dipole_sum(DipoleSumMethod::ClosedForm)?;
    rate_small_p_with(k, p, atom, lambda, r_c, &sum)
}

pub fn rate_small_p_with(
    k: &Constants,
    p: PhotonMomentum,
    atom: &HydrogenicAtom,
    lambda: f64,
    r_c: f64,
    sum: &InternalStateSum,
) -> Result<f64> {
    if !(lambda >= 0.0) || !(r_c > 0.0) {
        return Err(Error::Domain("need lambda >= 0 and r_c > 0"));
    }
    let pv = p.get();
    let q2 = atom.charge * atom.charge;
    let s = sum.in_cgs(k, atom);
    Ok(2.0 * pv.powi(3) * k.hbar.powi(3) / k.c / (k.m_n * k.m_n) * q2 * k.e2 * lambda / (PI * r_c * r_c) * s)
}

/// Short-wavelength rate: `2F(p·a0)` times the free-particle rate.
pub fn rate_high_p(
    k: &Constants,
    p: PhotonMomentum,
    atom: &HydrogenicAtom,
    lambda: f64,
    r_c: f64,
) -> Result<f64> {
    let free = rate_closed_form(k, p, &FreeParticle::new(atom.charge, atom.m1)?, lambda, r_c)?;
    Ok(2.0 * ground_state_form_factor(p.get() * atom.a0_eff) * free)
}
