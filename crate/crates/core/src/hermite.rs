//! Hermite polynomials and normalized harmonic-oscillator eigenfunctions.

use std::f64::consts::PI;

/// Centroid and inverse width of a shifted oscillator function, in grid units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorShape {
    pub a: f64,
    pub x0: f64,
}

impl OscillatorShape {
    pub fn new(a: f64, x0: f64) -> Option<Self> {
        (a.is_finite() && a > 0.0 && x0.is_finite()).then_some(OscillatorShape { a, x0 })
    }
}

/// Physicists' Hermite polynomial by the three-term recurrence.
///
/// Only meant for small `n`: the raw values outgrow binary64 around n ≈ 150.
pub fn hermite_poly(n: u32, xi: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * xi);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n(ξ) e^{-ξ²/2} / (√π 2ⁿ n!)^{1/2}` via the normalized recurrence.
pub fn normalized_hermite_function(n: u32, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = xi * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(a/(√π 2ⁿ n!))^{1/2} H_n(a(x-x0)) e^{-a²(x-x0)²/2}`.
pub fn oscillator_wf(n: u32, shape: OscillatorShape, x: f64) -> f64 {
    shape.a.sqrt() * normalized_hermite_function(n, shape.a * (x - shape.x0))
}

/// Like [`oscillator_wf`] but with the Hermite factor evaluated at `hermite_arg`
/// while the Gaussian keeps `a(x - x0)`.
pub fn oscillator_wf_split(n: u32, shape: OscillatorShape, hermite_arg: f64, x: f64) -> f64 {
    let xi = shape.a * (x - shape.x0);
    let correction = (0.5 * (hermite_arg * hermite_arg - xi * xi)).exp();
    shape.a.sqrt() * normalized_hermite_function(n, hermite_arg) * correction
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
        let n = ((hi - lo) / step).round() as usize;
        let mut acc = 0.5 * (f(lo) + f(hi));
        for i in 1..n {
            acc += f(lo + i as f64 * step);
        }
        acc * step
    }

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn low_order_polynomials() {
        assert_eq!(hermite_poly(0, 3.7), 1.0);
        assert_eq!(hermite_poly(1, 0.5), 1.0);
        assert_eq!(hermite_poly(2, 1.0), 2.0);
        assert_eq!(hermite_poly(3, 2.0), 8.0 * 8.0 - 12.0 * 2.0);
    }

    #[test]
    fn wf_special_values() {
        let unit = OscillatorShape::new(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(oscillator_wf(0, unit, 0.0), PI.powf(-0.25), epsilon = 1e-15);
        assert_abs_diff_eq!(oscillator_wf(0, unit, 0.0), 0.751126, epsilon = 1e-6);
        let shape = OscillatorShape::new(0.37, 2.5).unwrap();
        assert_eq!(oscillator_wf(1, shape, 2.5), 0.0);
        assert!(OscillatorShape::new(0.0, 1.0).is_none());
    }

    #[test]
    fn normalized_recurrence_matches_raw_polynomial() {
        let shape = OscillatorShape::new(0.8, -1.3).unwrap();
        for n in 0..15 {
            for &x in &[-4.0, -1.3, 0.2, 1.7, 3.9] {
                let xi = shape.a * (x - shape.x0);
                let raw = (shape.a / (PI.sqrt() * 2f64.powi(n as i32) * factorial(n))).sqrt()
                    * hermite_poly(n, xi)
                    * (-0.5 * xi * xi).exp();
                assert_abs_diff_eq!(oscillator_wf(n, shape, x), raw, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn unit_grid_normalization() {
        let unit = OscillatorShape::new(1.0, 0.0).unwrap();
        let sum: f64 = (0..=1600).map(|i| -8.0 + 0.01 * i as f64).map(|x| oscillator_wf(0, unit, x).powi(2) * 0.01).sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn normalization_and_orthogonality() {
        for &(a, x0) in &[(1.0, 0.0), (0.3, 4.0), (2.5, -1.0)] {
            let shape = OscillatorShape::new(a, x0).unwrap();
            let (lo, hi, step) = (x0 - 12.0 / a, x0 + 12.0 / a, 0.01 / a);
            for n in 0..=20 {
                let norm = trapezoid(|x| oscillator_wf(n, shape, x).powi(2), lo, hi, step);
                assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-6);
            }
            for n in 0..=10 {
                for k in (n + 1)..=10 {
                    let overlap = trapezoid(|x| oscillator_wf(n, shape, x) * oscillator_wf(k, shape, x), lo, hi, step);
                    assert!(overlap.abs() <= 1e-6, "n={n} k={k} overlap={overlap}");
                }
            }
        }
    }

    #[test]
    fn parity() {
        let shape = OscillatorShape::new(0.7, 1.25).unwrap();
        for n in 0..30 {
            for &t in &[0.1, 1.0, 3.3, 7.0] {
                let plus = oscillator_wf(n, shape, shape.x0 + t);
                let minus = oscillator_wf(n, shape, shape.x0 - t);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(plus, sign * minus, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn stable_for_high_order() {
        let unit = OscillatorShape::new(1.0, 0.0).unwrap();
        for n in [50, 100, 150, 200] {
            let mut peak: f64 = 0.0;
            for i in -300..=300 {
                let v = oscillator_wf(n, unit, i as f64 * 0.1);
                assert!(v.is_finite());
                peak = peak.max(v.abs());
            }
            assert!(peak < 1.0);
        }
    }

    #[test]
    fn split_form_reduces_to_plain_form() {
        let shape = OscillatorShape::new(0.45, 0.7).unwrap();
        for n in 0..8 {
            for &x in &[-3.0, 0.0, 2.0] {
                let xi = shape.a * (x - shape.x0);
                assert_abs_diff_eq!(oscillator_wf_split(n, shape, xi, x), oscillator_wf(n, shape, x), epsilon = 1e-15);
            }
        }
    }
}
