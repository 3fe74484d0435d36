//! Deterministic numerical integration and the radial inhomogeneous solver.

mod gauss_hermite;
mod gauss_kronrod;
mod radial;

pub use gauss_hermite::{gauss_hermite_rule, integrate_3d_gaussian, GAUSS_HERMITE_ORDERS};
pub use gauss_kronrod::{integrate_1d, integrate_1d_with_breakpoints, integrate_semi_infinite};
pub use radial::{solve_radial_inhomogeneous, RadialFunction, RadialSolution};

/// Value, error estimate and number of integrand evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub const ZERO: QuadratureResult = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
}

/// Stopping rule: accept when `error <= max(rel * |value|, abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT_1D: Tolerance = Tolerance { rel: 1e-8, abs: 1e-30 };
    pub const DEFAULT_3D: Tolerance = Tolerance { rel: 1e-6, abs: 1e-30 };

    pub fn rel(rel: f64) -> Self {
        Tolerance { rel, abs: 1e-30 }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        (self.rel * value.abs()).max(self.abs)
    }
}
