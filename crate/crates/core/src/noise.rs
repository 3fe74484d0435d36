//! Noise models, spatial correlation kernels and the γ ↔ λ map.
//!
//! White noise is parameterized by the CSL rate λ; the Itô strength is
//! `γ = 8π^{3/2} r_c³ λ`. Colored noise supplies `γ(ω)` directly and enters
//! rates through its value at the photon frequency. Non-stationary noise
//! replaces `t·γ(ω)` by the time-integrated weight of
//! [`nonstationary_weight`].

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::PI;
use core::fmt;

// idle when std is linked and provides the inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::quadrature::{integrate_1d_with_breakpoints, Tolerance};
use crate::{Error, Result};

pub type SpectralFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type CorrelatorFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `8π^{3/2}`
pub const GAMMA_PER_LAMBDA_RC3: f64 = 44.546_623_974_653_66;

pub fn gamma_from_lambda(lambda: f64, r_c: f64) -> Result<f64> {
    if !(r_c > 0.0) {
        return Err(Error::Domain("r_c must be positive"));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Domain("lambda must be non-negative"));
    }
    Ok(GAMMA_PER_LAMBDA_RC3 * r_c * r_c * r_c * lambda)
}

pub fn lambda_from_gamma(gamma: f64, r_c: f64) -> Result<f64> {
    if !(r_c > 0.0) {
        return Err(Error::Domain("r_c must be positive"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::Domain("gamma must be non-negative"));
    }
    Ok(gamma / (GAMMA_PER_LAMBDA_RC3 * r_c * r_c * r_c))
}

/// What a tabulated function returns outside its sampled range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailRule {
    #[default]
    Zero,
    /// Hold the first/last sampled value.
    Hold,
}

/// Piecewise-linear interpolant through `(x, y)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
    tail: TailRule,
}

impl Tabulated {
    pub fn new(points: &[(f64, f64)], tail: TailRule) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain("a table needs at least two points"));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Domain("table abscissae must be strictly increasing"));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Domain("table entries must be finite"));
        }
        Ok(Self {
            xs: points.iter().map(|p| p.0).collect(),
            ys: points.iter().map(|p| p.1).collect(),
            tail,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] {
            return match self.tail {
                TailRule::Zero => 0.0,
                TailRule::Hold => self.ys[0],
            };
        }
        if x > self.xs[n - 1] {
            return match self.tail {
                TailRule::Zero => 0.0,
                TailRule::Hold => self.ys[n - 1],
            };
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.ys[i],
            Err(i) => i,
        };
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let t = (x - x0) / (x1 - x0);
        self.ys[i - 1] + t * (self.ys[i] - self.ys[i - 1])
    }

    /// Largest abscissa with a nonzero value, when the tail is zero.
    pub fn support_end(&self) -> Option<f64> {
        match self.tail {
            TailRule::Zero => self.xs.last().copied(),
            TailRule::Hold => None,
        }
    }

    pub fn min_value(&self) -> f64 {
        self.ys.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn into_fn(self) -> SpectralFn {
        Arc::new(move |x| self.eval(x))
    }
}

/// Temporal structure and strength of the noise.
#[derive(Clone)]
pub enum NoiseSpec {
    /// White noise with CSL rate λ (s⁻¹).
    White { lambda: f64 },
    /// Spectral density γ(ω) (cm³·s⁻¹), optionally cut off above `cutoff` (s⁻¹).
    Colored { gamma: SpectralFn, cutoff: Option<f64> },
    /// Correlator Δ(t, t′) (cm³·s⁻²) without time-translation invariance.
    NonStationary { delta: CorrelatorFn },
}

impl fmt::Debug for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::White { lambda } => f.debug_struct("White").field("lambda", lambda).finish(),
            NoiseSpec::Colored { cutoff, .. } => {
                f.debug_struct("Colored").field("cutoff", cutoff).finish_non_exhaustive()
            }
            NoiseSpec::NonStationary { .. } => f.debug_struct("NonStationary").finish_non_exhaustive(),
        }
    }
}

impl NoiseSpec {
    pub fn white(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Domain("lambda must be non-negative"));
        }
        Ok(NoiseSpec::White { lambda })
    }

    pub fn colored<F>(gamma: F, cutoff: Option<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        NoiseSpec::Colored { gamma: Arc::new(gamma), cutoff }
    }

    /// Colored noise with a flat spectrum γ₀; behaves as white noise with
    /// `λ = γ₀ / (8π^{3/2} r_c³)`.
    pub fn constant_spectrum(gamma0: f64) -> Self {
        Self::colored(move |_| gamma0, None)
    }

    pub fn nonstationary<F>(delta: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        NoiseSpec::NonStationary { delta: Arc::new(delta) }
    }

    /// γ at angular frequency `omega`; `r_c` converts λ for white noise.
    pub fn weight(&self, r_c: f64, omega: f64) -> Result<f64> {
        match self {
            NoiseSpec::White { lambda } => gamma_from_lambda(*lambda, r_c),
            NoiseSpec::Colored { gamma, cutoff } => {
                if let Some(c) = cutoff {
                    if omega > *c {
                        return Ok(0.0);
                    }
                }
                let g = gamma(omega);
                if !(g >= 0.0) || !g.is_finite() {
                    return Err(Error::Domain("spectral density must be non-negative"));
                }
                Ok(g)
            }
            NoiseSpec::NonStationary { .. } => Err(Error::Contract(
                "non-stationary noise has no spectral weight; use nonstationary_weight",
            )),
        }
    }

    /// The white-noise λ that gives the same rate at frequency `omega`.
    pub fn effective_lambda(&self, r_c: f64, omega: f64) -> Result<f64> {
        lambda_from_gamma(self.weight(r_c, omega)?, r_c)
    }
}

/// Free function form of [`NoiseSpec::weight`].
pub fn noise_weight(spec: &NoiseSpec, r_c: f64, omega: f64) -> Result<f64> {
    spec.weight(r_c, omega)
}

/// Real and imaginary parts of `∫₀ᵗ ds ∫₀ᵗ du Δ(s,u) e^{i(s−u)ω}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonstationaryWeight {
    pub re: f64,
    pub im: f64,
    pub error_estimate: f64,
}

/// Time-integrated noise weight for a correlator without time-translation
/// invariance (cm³ when Δ is in cm³·s⁻²).
///
/// The square is folded onto the triangle `u < s`, so the integrand of the
/// imaginary part is `[Δ(s,u) − Δ(u,s)] sin((s−u)ω)` and vanishes identically
/// for symmetric correlators. Both nested integrals start from breakpoints
/// graded geometrically toward the diagonal and toward `s = 0`, which
/// resolves correlators much narrower than `t`.
pub fn nonstationary_weight(
    delta: &(dyn Fn(f64, f64) -> f64 + Sync),
    t: f64,
    omega: f64,
    tol: Tolerance,
) -> Result<NonstationaryWeight> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain("integration time must be positive"));
    }
    let inner_tol = Tolerance { rel: tol.rel * 1e-2, abs: tol.abs * 1e-2 / t };
    let failure: Cell<Option<Error>> = Cell::new(None);

    let part = |imaginary: bool| -> Result<(f64, f64)> {
        let outer = |s: f64| -> f64 {
            if s <= 0.0 {
                return 0.0;
            }
            let g = |v: f64| {
                let u = s - v;
                if imaginary {
                    (delta(s, u) - delta(u, s)) * (v * omega).sin()
                } else {
                    (delta(s, u) + delta(u, s)) * (v * omega).cos()
                }
            };
            match integrate_1d_with_breakpoints(g, &graded(s, t), inner_tol) {
                Ok(r) => r.value,
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            }
        };
        match integrate_1d_with_breakpoints(outer, &graded(t, t), tol) {
            Ok(r) => Ok((r.value, r.error_estimate)),
            Err(e) => Err(failure.take().unwrap_or(e)),
        }
    };

    let (re, re_err) = part(false)?;
    let (im, im_err) = part(true)?;
    Ok(NonstationaryWeight { re, im, error_estimate: re_err + im_err })
}

/// `[0, len·2⁻ᴷ, …, len/4, len/2, len]` with the finest point near `1e-13·scale`.
fn graded(len: f64, scale: f64) -> Vec<f64> {
    let mut pts = Vec::with_capacity(48);
    pts.push(0.0);
    let floor = 1e-13 * scale;
    let mut x = len;
    let mut levels = Vec::with_capacity(46);
    while x > floor && levels.len() < 45 {
        levels.push(x);
        x *= 0.5;
    }
    pts.extend(levels.iter().rev());
    pts
}

/// Fourier-space spatial correlation `G[w]`, normalized to `G[0] = 1`.
#[derive(Clone)]
pub enum SpatialCorrelation {
    /// Self-convolved Gaussian smearing of width `r_c`; `G[w] = e^{−w² r_c²}`.
    Gaussian { r_c: f64 },
    /// Arbitrary isotropic kernel. `length` is the reference length used to
    /// express white noise through λ and to scale radial integrals; `support`
    /// is a wavenumber beyond which the kernel vanishes, if any.
    General {
        kernel: SpectralFn,
        length: f64,
        support: Option<f64>,
    },
}

impl fmt::Debug for SpatialCorrelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpatialCorrelation::Gaussian { r_c } => f.debug_struct("Gaussian").field("r_c", r_c).finish(),
            SpatialCorrelation::General { length, support, .. } => f
                .debug_struct("General")
                .field("length", length)
                .field("support", support)
                .finish_non_exhaustive(),
        }
    }
}

impl SpatialCorrelation {
    pub fn gaussian(r_c: f64) -> Result<Self> {
        if !(r_c > 0.0) || !r_c.is_finite() {
            return Err(Error::Domain("r_c must be positive"));
        }
        Ok(SpatialCorrelation::Gaussian { r_c })
    }

    pub fn general(kernel: SpectralFn, length: f64, support: Option<f64>) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Domain("reference length must be positive"));
        }
        if let Some(s) = support {
            if !(s > 0.0) {
                return Err(Error::Domain("kernel support must be positive"));
            }
        }
        if (kernel(0.0) - 1.0).abs() > 1e-6 {
            return Err(Error::Domain("spatial kernel must satisfy G[0] = 1"));
        }
        Ok(SpatialCorrelation::General { kernel, length, support })
    }

    pub fn from_table(table: Tabulated, length: f64) -> Result<Self> {
        let support = table.support_end();
        Self::general(table.into_fn(), length, support)
    }

    pub fn kernel(&self, w: f64) -> f64 {
        match self {
            SpatialCorrelation::Gaussian { r_c } => (-(w * w) * r_c * r_c).exp(),
            SpatialCorrelation::General { kernel, .. } => kernel(w.abs()),
        }
    }

    pub fn reference_length(&self) -> f64 {
        match self {
            SpatialCorrelation::Gaussian { r_c } => *r_c,
            SpatialCorrelation::General { length, .. } => *length,
        }
    }

    /// `∫₀^∞ G[w] g(w) dw`, integrated in the scaled variable `w·length`.
    pub fn radial_integral<F: FnMut(f64) -> f64>(&self, mut g: F, tol: Tolerance) -> Result<f64> {
        let len = self.reference_length();
        let inv = 1.0 / len;
        let mut h = |y: f64| {
            let w = y * inv;
            let k = self.kernel(w);
            if k == 0.0 {
                0.0
            } else {
                k * g(w) * inv
            }
        };
        let r = match self {
            SpatialCorrelation::Gaussian { .. } => {
                integrate_1d_with_breakpoints(&mut h, &[0.0, 1.0, 2.5, 5.0, 10.0, 40.0], tol)?
            }
            SpatialCorrelation::General { support: Some(s), .. } => {
                let end = s * len;
                integrate_1d_with_breakpoints(&mut h, &[0.0, 0.25 * end, 0.5 * end, end], tol)?
            }
            SpatialCorrelation::General { support: None, .. } => {
                crate::quadrature::integrate_semi_infinite(&mut h, 0.0, tol)?
            }
        };
        Ok(r.value)
    }

    /// `∫ d³w G[w] [w² − (w·p̂)²] = (8π/3) ∫₀^∞ G[w] w⁴ dw` (cm⁻⁵).
    pub fn transverse_weight(&self, tol: Tolerance) -> Result<f64> {
        let radial = self.radial_integral(|w| w.powi(4), tol)?;
        Ok(8.0 * PI / 3.0 * radial)
    }
}

/// Free function form of [`SpatialCorrelation::kernel`].
pub fn spatial_kernel(corr: &SpatialCorrelation, w: f64) -> f64 {
    corr.kernel(w)
}
