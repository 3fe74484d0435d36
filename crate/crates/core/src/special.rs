//! Spherical Bessel functions of low order.

// idle when std is linked and provides the inherent methods
#[allow(unused_imports)]
use num_traits::Float;

/// Power series `xⁿ Σ_k (−x²/2)^k / (k! (2n+2k+1)!!)`, used for `|x| < 1`.
fn series(n: u32, x: f64) -> f64 {
    let mut double_fact = 1.0;
    for k in 1..=n {
        double_fact *= (2 * k + 1) as f64;
    }
    let mut term = x.powi(n as i32) / double_fact;
    let mut sum = term;
    let q = -0.5 * x * x;
    for k in 1..40u32 {
        term *= q / (k as f64 * (2 * (n + k) + 1) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn j0(x: f64) -> f64 {
    if x.abs() < 1.0 {
        series(0, x)
    } else {
        x.sin() / x
    }
}

/// `j₀(x) − 1` without cancellation near the origin.
pub fn j0_minus_one(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let q = -0.5 * x * x;
        let mut term = q / 3.0;
        let mut sum = term;
        for k in 2..40u32 {
            term *= q / (k as f64 * (2 * k + 1) as f64);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x.sin() / x - 1.0
    }
}

pub fn j1(x: f64) -> f64 {
    if x.abs() < 1.0 {
        series(1, x)
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

/// `j₁(x)/x`, finite at the origin where it equals 1/3.
pub fn j1_over_x(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // series(1, x) / x without the division
        let mut term = 1.0 / 3.0;
        let mut sum = term;
        let q = -0.5 * x * x;
        for k in 1..40u32 {
            term *= q / (k as f64 * (2 * (1 + k) + 1) as f64);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        j1(x) / x
    }
}

pub fn j2(x: f64) -> f64 {
    if x.abs() < 1.0 {
        series(2, x)
    } else {
        let (s, c) = (x.sin(), x.cos());
        ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x) / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuous_at_series_switch() {
        for (f, name) in [(j0 as fn(f64) -> f64, "j0"), (j1, "j1"), (j2, "j2"), (j1_over_x, "j1/x")] {
            let below = f(1.0 - 1e-12);
            let above = f(1.0 + 1e-12);
            assert!((below - above).abs() < 1e-11, "{name}: {below} vs {above}");
        }
    }

    #[test]
    fn known_values() {
        // scipy.special.spherical_jn at x = 2.5
        assert!((j0(2.5) - 0.239_388_857_641_582_63).abs() < 1e-14);
        assert!((j1(2.5) - 0.416_212_989_275_406_56).abs() < 1e-14);
        assert!((j2(2.5) - 0.260_066_729_488_905_25).abs() < 1e-14);
        assert_eq!(j0(0.0), 1.0);
        assert_eq!(j1(0.0), 0.0);
        assert!((j1_over_x(0.0) - 1.0 / 3.0).abs() < 1e-16);
        assert!((j2(0.3) - 0.005_961_524_868_620_22).abs() < 1e-15);
    }

    #[test]
    fn j0_minus_one_small_argument() {
        // leading terms −x²/6 + x⁴/120
        let x = 1e-5;
        assert!((j0_minus_one(x) / (-x * x / 6.0 + x.powi(4) / 120.0) - 1.0).abs() < 1e-14);
        for x in [0.3, 0.999, 1.001, 4.0] {
            assert!((j0_minus_one(x) - (j0(x) - 1.0)).abs() < 1e-15);
        }
    }
}
