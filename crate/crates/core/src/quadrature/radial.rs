//! Radial inhomogeneous Schrödinger equation on a logarithmic grid.
//!
//! Solves `−½u'' + [l(l+1)/(2r²) + V(r) − E] u = s(r)` for the radial function
//! `u = r·R` in units where ħ and the (reduced) mass are 1. With `r = eˣ` and
//! `u = √r·y` the equation becomes `y'' = K(x) y + S(x)`, which Numerov's
//! three-point formula turns into a tridiagonal system. Regular boundary
//! conditions are imposed as `y = 0` at both grid ends.

use alloc::vec::Vec;

// idle when std is linked and provides the inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub const DEFAULT_R_MIN: f64 = 1e-4;
pub const DEFAULT_R_MAX: f64 = 50.0;
pub const DEFAULT_POINTS: usize = 2001;
const MIN_POINTS: usize = 200;
const RESIDUAL_LIMIT: f64 = 1e-6;

/// A function sampled on a logarithmic radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    r: Vec<f64>,
    values: Vec<f64>,
}

impl RadialFunction {
    /// Samples `f` on `n` log-spaced points in `[r_min, r_max]`.
    pub fn sample<F: FnMut(f64) -> f64>(r_min: f64, r_max: f64, n: usize, mut f: F) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::Domain("radial grid needs 0 < r_min < r_max"));
        }
        if n < MIN_POINTS {
            return Err(Error::Domain("radial grid needs at least 200 points"));
        }
        let step = (r_max / r_min).ln() / (n - 1) as f64;
        let r: Vec<f64> = (0..n).map(|i| r_min * (step * i as f64).exp()).collect();
        let values = r.iter().map(|&x| f(x)).collect();
        Self::from_samples(r, values)
    }

    /// Samples `f` on the default grid `[1e-4, 50]` with 2001 points.
    pub fn sample_default<F: FnMut(f64) -> f64>(f: F) -> Result<Self> {
        Self::sample(DEFAULT_R_MIN, DEFAULT_R_MAX, DEFAULT_POINTS, f)
    }

    pub fn from_samples(r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() != values.len() {
            return Err(Error::Domain("grid and values differ in length"));
        }
        if r.len() < MIN_POINTS {
            return Err(Error::Domain("radial grid needs at least 200 points"));
        }
        if !(r[0] > 0.0) || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("radial grid must be positive and strictly increasing"));
        }
        let step = (r[1] / r[0]).ln();
        if r.windows(2).any(|w| ((w[1] / w[0]).ln() / step - 1.0).abs() > 1e-6) {
            return Err(Error::Domain("radial grid must be logarithmically spaced"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("radial function has non-finite values"));
        }
        Ok(Self { r, values })
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    fn log_step(&self) -> f64 {
        (self.r[self.r.len() - 1] / self.r[0]).ln() / (self.r.len() - 1) as f64
    }

    /// `∫ f g dr` over the grid (Simpson's rule in the log variable).
    pub fn inner(&self, other: &RadialFunction) -> Result<f64> {
        if self.r != other.r {
            return Err(Error::Domain("radial functions live on different grids"));
        }
        let g: Vec<f64> = (0..self.len())
            .map(|i| self.values[i] * other.values[i] * self.r[i])
            .collect();
        Ok(simpson(&g, self.log_step()))
    }

    /// `∫ u² dr`.
    pub fn norm_squared(&self) -> f64 {
        self.inner(self).unwrap_or(0.0)
    }
}

fn simpson(g: &[f64], h: f64) -> f64 {
    let n = g.len();
    if n < 2 {
        return 0.0;
    }
    let intervals = n - 1;
    let (even, tail) = if intervals % 2 == 0 || intervals < 3 {
        (intervals - intervals % 2, None)
    } else {
        (intervals - 3, Some(intervals - 3))
    };
    let mut s = 0.0;
    let mut i = 0;
    while i + 2 <= even {
        s += g[i] + 4.0 * g[i + 1] + g[i + 2];
        i += 2;
    }
    s *= h / 3.0;
    if let Some(k) = tail {
        s += 3.0 * h / 8.0 * (g[k] + 3.0 * g[k + 1] + 3.0 * g[k + 2] + g[k + 3]);
    } else if intervals % 2 == 1 {
        s += 0.5 * h * (g[n - 2] + g[n - 1]);
    }
    s
}

/// Solution of the inhomogeneous radial equation together with the relative
/// residual of the discrete Numerov operator.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub chi: RadialFunction,
    pub residual: f64,
}

/// Solves `(H_l − E) χ = source` with `H_l = −½ d²/dr² + l(l+1)/(2r²) + V(r)`.
///
/// `source` and the returned `chi` are radial functions `u = r·R`. The energy
/// must lie below `V(r_max)`, and the source must have decayed by the edge of
/// the grid.
pub fn solve_radial_inhomogeneous<V: Fn(f64) -> f64>(
    energy: f64,
    source: &RadialFunction,
    l: u32,
    potential: V,
) -> Result<RadialSolution> {
    let n = source.len();
    let r = source.r();
    let s = source.values();
    let r_max = r[n - 1];
    if !(energy < potential(r_max)) {
        return Err(Error::Domain("energy must lie below the continuum threshold"));
    }
    let peak = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(RadialSolution {
            chi: RadialFunction::from_samples(r.to_vec(), alloc::vec![0.0; n])?,
            residual: 0.0,
        });
    }
    if s[n - 1].abs() > 1e-8 * peak {
        return Err(Error::Domain("source does not decay at the edge of the radial grid"));
    }

    let h = source.log_step();
    let h12 = h * h / 12.0;
    let ll = (l * (l + 1)) as f64;
    let k: Vec<f64> = r
        .iter()
        .map(|&x| 0.25 + ll + 2.0 * x * x * (potential(x) - energy))
        .collect();
    let src: Vec<f64> = r.iter().zip(s).map(|(&x, &v)| -2.0 * x.powf(1.5) * v).collect();
    let a: Vec<f64> = k.iter().map(|&kk| 1.0 - h12 * kk).collect();
    let b: Vec<f64> = k.iter().map(|&kk| 2.0 * (1.0 + 5.0 * h12 * kk)).collect();
    let rhs: Vec<f64> = (1..n - 1)
        .map(|i| h12 * (src[i + 1] + 10.0 * src[i] + src[i - 1]))
        .collect();

    // Thomas algorithm on the interior unknowns y[1..n-1]:
    //   a[i-1] y[i-1] − b[i] y[i] + a[i+1] y[i+1] = rhs
    let m = n - 2;
    let mut c_prime = alloc::vec![0.0; m];
    let mut d_prime = alloc::vec![0.0; m];
    for j in 0..m {
        let i = j + 1;
        let lower = if j > 0 { a[i - 1] } else { 0.0 };
        let upper = if j + 1 < m { a[i + 1] } else { 0.0 };
        let diag = -b[i];
        let (cp, dp) = if j == 0 { (0.0, 0.0) } else { (c_prime[j - 1], d_prime[j - 1]) };
        let denom = diag - lower * cp;
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::Solver { what: "radial Numerov solve", residual: f64::INFINITY });
        }
        c_prime[j] = upper / denom;
        d_prime[j] = (rhs[j] - lower * dp) / denom;
    }
    let mut y = alloc::vec![0.0; n];
    for j in (0..m).rev() {
        let next = if j + 1 < m { y[j + 2] } else { 0.0 };
        y[j + 1] = d_prime[j] - c_prime[j] * next;
    }

    let mut res_norm = 0.0;
    let mut rhs_norm = 0.0;
    for i in 1..n - 1 {
        let lhs = a[i - 1] * y[i - 1] - b[i] * y[i] + a[i + 1] * y[i + 1];
        let d = lhs - rhs[i - 1];
        res_norm += d * d;
        rhs_norm += rhs[i - 1] * rhs[i - 1];
    }
    let residual = (res_norm / rhs_norm).sqrt();
    let u: Vec<f64> = r.iter().zip(&y).map(|(&x, &v)| x.sqrt() * v).collect();
    if !(residual < RESIDUAL_LIMIT) || u.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver { what: "radial Numerov solve", residual });
    }
    Ok(RadialSolution {
        chi: RadialFunction::from_samples(r.to_vec(), u)?,
        residual,
    })
}
