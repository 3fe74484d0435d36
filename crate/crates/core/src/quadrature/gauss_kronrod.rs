//! Globally adaptive 15-point Gauss–Kronrod integration with bisection.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{QuadratureResult, Tolerance};
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss 7-point weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_value = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_value += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kronrod.is_finite() {
        return Err(Error::Domain("integrand is not finite on the interval"));
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        abs_value: abs_value * half.abs(),
    })
}

/// Integrates `f` over `[a, b]`.
///
/// The error estimate is the Gauss–Kronrod difference summed over the final
/// partition, floored at the rounding level `50 ε ∫|f|`.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<QuadratureResult> {
    integrate_1d_with_breakpoints(f, &[a, b], tol)
}

/// Integrates over `[points[0], points[last]]`, starting from the partition
/// given by `points`. Interior points mark kinks or localized structure.
pub fn integrate_1d_with_breakpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<QuadratureResult> {
    if !(tol.rel > 0.0) || tol.abs < 0.0 {
        return Err(Error::Domain("tolerance must be positive"));
    }
    if points.len() < 2 {
        return Ok(QuadratureResult::ZERO);
    }
    let (lo, hi) = (points[0], points[points.len() - 1]);
    if lo == hi {
        return Ok(QuadratureResult::ZERO);
    }
    if lo > hi {
        let reversed: Vec<f64> = points.iter().rev().copied().collect();
        let r = integrate_1d_with_breakpoints(f, &reversed, tol)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    if points.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Domain("breakpoints must be sorted"));
    }

    let mut segments: Vec<Segment> = Vec::with_capacity(points.len() + 64);
    for w in points.windows(2) {
        if w[1] > w[0] {
            segments.push(gk15(&mut f, w[0], w[1])?);
        }
    }
    let mut evaluations = 15 * segments.len();
    let mut heap: BinaryHeap<Worst> = segments.iter().enumerate().map(|(i, s)| Worst(s.error, i)).collect();
    // running error and magnitude sums; the final answer is re-summed exactly
    let (mut error_sum, mut value_sum, mut abs_sum) = totals(&segments);

    loop {
        let roundoff = 50.0 * f64::EPSILON * abs_sum;
        if error_sum <= tol.target(value_sum).max(roundoff) {
            let (error, value, abs_value) = totals_ordered(&segments);
            let roundoff = 50.0 * f64::EPSILON * abs_value;
            if error <= tol.target(value).max(roundoff) {
                return Ok(QuadratureResult { value, error_estimate: error.max(roundoff), evaluations });
            }
            (error_sum, value_sum, abs_sum) = (error, value, abs_value);
        }
        if segments.len() >= MAX_SEGMENTS {
            let (error, value, _) = totals_ordered(&segments);
            return Err(Error::Tolerance { what: "adaptive Gauss-Kronrod", estimate: value, error });
        }
        let worst = heap.pop().expect("one entry per segment").1;
        let s = segments[worst];
        let mid = 0.5 * (s.a + s.b);
        if !(mid > s.a && mid < s.b) {
            // Interval can no longer be split in floating point.
            let (error, value, _) = totals_ordered(&segments);
            return Err(Error::Tolerance {
                what: "adaptive Gauss-Kronrod (interval underflow)",
                estimate: value,
                error,
            });
        }
        let left = gk15(&mut f, s.a, mid)?;
        let right = gk15(&mut f, mid, s.b)?;
        error_sum += left.error + right.error - s.error;
        value_sum += left.value + right.value - s.value;
        abs_sum += left.abs_value + right.abs_value - s.abs_value;
        segments[worst] = left;
        heap.push(Worst(left.error, worst));
        heap.push(Worst(right.error, segments.len()));
        segments.push(right);
        evaluations += 30;
    }
}

/// Heap entry ordered by segment error.
struct Worst(f64, usize);

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Worst {}

impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

/// (error, value, ∫|f|) in arbitrary order.
fn totals(segments: &[Segment]) -> (f64, f64, f64) {
    segments.iter().fold((0.0, 0.0, 0.0), |(e, v, r), s| (e + s.error, v + s.value, r + s.abs_value))
}

fn totals_ordered(segments: &[Segment]) -> (f64, f64, f64) {
    // Sum in position order so the result does not depend on refinement history.
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by(|&i, &j| segments[i].a.total_cmp(&segments[j].a));
    order.iter().fold((0.0, 0.0, 0.0), |(e, v, r), &i| {
        let s = &segments[i];
        (e + s.error, v + s.value, r + s.abs_value)
    })
}

/// Integrates `f` over `[a, ∞)` through `x = a + t/(1 − t)`.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    tol: Tolerance,
) -> Result<QuadratureResult> {
    integrate_1d(
        |t| {
            let one_minus = 1.0 - t;
            let x = a + t / one_minus;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (one_minus * one_minus)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial() {
        let r = integrate_1d(|x| x * x, 0.0, 1.0, Tolerance::DEFAULT_1D).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_fourth_moment_semi_infinite() {
        // ∫₀^∞ w⁴ e^{−w²} dw = 3√π/8 = 0.66467019408956851
        let r = integrate_semi_infinite(|w| w.powi(4) * (-w * w).exp(), 0.0, Tolerance::DEFAULT_1D)
            .unwrap();
        assert!((r.value - 0.664_670_194_089_568_5).abs() < 1e-8 * 0.66);
    }

    #[test]
    fn sine_over_period_vanishes() {
        let tol = Tolerance::DEFAULT_1D.with_abs(1e-12);
        let r = integrate_1d(|x| x.sin(), 0.0, 2.0 * PI, tol).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn degenerate_interval_is_exact_zero() {
        let r = integrate_1d(|x| x.exp(), 2.0, 2.0, Tolerance::DEFAULT_1D).unwrap();
        assert_eq!(r, QuadratureResult::ZERO);
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let r = integrate_1d(|x| x, 1.0, 0.0, Tolerance::DEFAULT_1D).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn unresolvable_integrand_hits_subdivision_limit() {
        let err = integrate_1d(|x| (1e8 * x).cos(), 0.0, 1.0, Tolerance::rel(1e-10));
        assert!(matches!(err, Err(Error::Tolerance { .. })), "{err:?}");
    }

    #[test]
    fn breakpoints_resolve_narrow_peak() {
        let w = 1e-7;
        let g = |x: f64| (-(x - 0.3) * (x - 0.3) / (2.0 * w * w)).exp() / (w * (2.0 * PI).sqrt());
        let r = integrate_1d_with_breakpoints(g, &[0.0, 0.3 - 1e-6, 0.3 + 1e-6, 1.0], Tolerance::rel(1e-9)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{}", r.value);
    }

    /// Twenty integrals with known values; the reported error must bound the
    /// actual error on each of them.
    #[test]
    fn error_estimate_bounds_true_error() {
        type Case = (fn(f64) -> f64, f64, f64, f64);
        let cases: [Case; 20] = [
            (|x| x * x, 0.0, 1.0, 1.0 / 3.0),
            (|x| x.powi(5) - 2.0 * x, -1.0, 2.0, 7.5),
            (|x| x.powi(9), 0.0, 1.0, 0.1),
            (|x| (-x * x).exp(), -6.0, 6.0, 1.772_453_850_905_516),
            (|x| (-x * x).exp(), 0.0, 1.0, 0.746_824_132_812_427_03),
            (|x| x * x * (-x * x).exp(), -8.0, 8.0, 0.886_226_925_452_758),
            (|x| x.exp(), 0.0, 1.0, 1.718_281_828_459_045),
            (|x| 1.0 / (1.0 + x * x), 0.0, 1.0, PI / 4.0),
            (|x| 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0, 0.549_360_306_778_006),
            (|x| x.sin(), 0.0, PI, 2.0),
            (|x| (10.0 * x).cos(), 0.0, 1.0, -0.054_402_111_088_936_98),
            (|x| (50.0 * x).sin() * x, 0.0, 1.0, -0.019_404_270_511_323_84),
            (|x| (x * x).cos(), 0.0, 3.0, 0.702_863_557_730_268_7),
            (|x| x.sqrt(), 0.0, 1.0, 2.0 / 3.0),
            (|x| x.ln(), 1.0, 2.0, 0.386_294_361_119_890_6),
            (|x| 1.0 / x, 1.0, 10.0, core::f64::consts::LN_10),
            (|x| x.abs(), -1.0, 2.0, 2.5),
            (|x| (x.sin()).powi(2), 0.0, 2.0 * PI, PI),
            (|x| (-x).exp() * (3.0 * x).sin(), 0.0, 20.0, 0.300_000_000_651_747),
            (|x| 1.0 / (x.cosh() * x.cosh()), -5.0, 5.0, 1.999_818_408_525_190_3),
        ];
        for (k, (f, a, b, exact)) in cases.iter().enumerate() {
            let r = integrate_1d(f, *a, *b, Tolerance::rel(1e-10)).unwrap();
            let actual = (r.value - exact).abs();
            assert!(
                actual <= r.error_estimate.max(1e-15 * exact.abs()) + 1e-15,
                "case {k}: value {} exact {exact} actual {actual:e} estimate {:e}",
                r.value,
                r.error_estimate
            );
        }
    }
}
