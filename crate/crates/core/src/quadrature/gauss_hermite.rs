//! Gauss–Hermite rules and tensor-product integration against `e^{−w² r_c²}`.

use alloc::vec;
use alloc::vec::Vec;

// idle when std is linked and provides the inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use super::{QuadratureResult, Tolerance};
use crate::{Error, Result};

/// Orders tried in turn by [`integrate_3d_gaussian`].
pub const GAUSS_HERMITE_ORDERS: [usize; 3] = [20, 40, 80];

/// Nodes and weights of the `n`-point rule for `∫ e^{−x²} f(x) dx`,
/// nodes in descending order.
pub fn gauss_hermite_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PI_M4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let m = (n + 1) / 2;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-0.166_67),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p1 = PI_M4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            dp = (2.0 * nf).sqrt() * p2;
            let step = p1 / dp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫ d³w e^{−w² r_c²} f(w)` by tensor-product Gauss–Hermite, escalating the
/// order through [`GAUSS_HERMITE_ORDERS`] until two successive orders agree.
pub fn integrate_3d_gaussian<F: FnMut([f64; 3]) -> f64>(
    mut f: F,
    r_c: f64,
    tol: Tolerance,
) -> Result<QuadratureResult> {
    if !(r_c > 0.0) || !r_c.is_finite() {
        return Err(Error::Domain("Gaussian width r_c must be positive"));
    }
    let scale = 1.0 / r_c;
    let jac = scale * scale * scale;
    let mut previous: Option<f64> = None;
    let mut evaluations = 0;
    let mut last = (0.0, f64::INFINITY);
    for &n in GAUSS_HERMITE_ORDERS.iter() {
        let (x, w) = gauss_hermite_rule(n);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let wij = w[i] * w[j];
                let mut row = 0.0;
                let mut row_abs = 0.0;
                for k in 0..n {
                    let v = f([x[i] * scale, x[j] * scale, x[k] * scale]);
                    row += w[k] * v;
                    row_abs += w[k] * v.abs();
                }
                sum += wij * row;
                abs_sum += wij * row_abs;
            }
        }
        evaluations += n * n * n;
        let value = sum * jac;
        if !value.is_finite() {
            return Err(Error::Domain("integrand is not finite on the Gauss-Hermite grid"));
        }
        if let Some(prev) = previous {
            let change = (value - prev).abs();
            let roundoff = 100.0 * f64::EPSILON * abs_sum * jac;
            last = (value, change);
            if change <= tol.target(value).max(roundoff) {
                return Ok(QuadratureResult {
                    value,
                    error_estimate: change.max(roundoff),
                    evaluations,
                });
            }
        }
        previous = Some(value);
    }
    Err(Error::Tolerance {
        what: "tensor Gauss-Hermite",
        estimate: last.0,
        error: last.1,
    })
}
