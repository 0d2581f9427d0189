//! Closed-form stretched SU(2) coefficients (S = s1+s2, M = 0) and their Gaussian limit.
//!
//! `⟨s1, −m; s2, m | s1+s2, 0⟩ =
//!   √[ (2s1)!(2s2)!((s1+s2)!)² / ((2s1+2s2)!(s1+m)!(s1−m)!(s2+m)!(s2−m)!) ]`

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::half::HalfInt;

/// Largest `s1+s2` evaluated with exact big integers.
pub const EXACT_PATH_LIMIT: i64 = 40;

/// `√(num/den)` with an exact rational radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigRationalSqrt {
    pub num: BigUint,
    pub den: BigUint,
}

impl BigRationalSqrt {
    /// Rounds only at the end: the ratio is rescaled to keep 64+ significant bits.
    pub fn value(&self) -> f64 {
        if self.num.bits() == 0 {
            return 0.0;
        }
        let shift = self.den.bits() as i64 - self.num.bits() as i64 + 64;
        let scaled = if shift >= 0 { (&self.num << shift as u64) / &self.den } else { (&self.num >> (-shift) as u64) / &self.den };
        let ratio = scaled.to_f64().unwrap_or(f64::INFINITY);
        // ratio · 2^(−shift), square-rooted; split the power so it stays in range.
        (ratio.sqrt()) * 2f64.powf(-(shift as f64) / 2.0)
    }
}

fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `ln n!` by compensated (Kahan) summation of `ln k`.
fn ln_factorial(n: u64) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 2..=n {
        let y = (k as f64).ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// The factorial arguments `{2s1, 2s2, s1+s2, s1+s2}` over `{2s1+2s2, s1±m, s2±m}`, each sorted,
/// or `None` outside the support.
fn factorial_args(s1: HalfInt, s2: HalfInt, m: HalfInt) -> Result<Option<([u64; 4], [u64; 5])>> {
    if s1.twice() < 0 || s2.twice() < 0 {
        return Err(Error::Domain { field: "s", reason: format!("spins must be non-negative, got {s1}, {s2}") });
    }
    if !(s1 + m).is_integral() || !(s2 + m).is_integral() {
        return Err(Error::Parity(format!("s1+m and s2+m must be integers (s1={s1}, s2={s2}, m={m})")));
    }
    let bound = s1.twice().min(s2.twice());
    if m.twice().abs() > bound {
        return Ok(None);
    }
    let int = |h: HalfInt| h.as_int().expect("integral by parity check") as u64;
    let sum = int(s1 + s2);
    let mut top = [s1.twice() as u64, s2.twice() as u64, sum, sum];
    let mut bottom = [2 * sum, int(s1 + m), int(s1 - m), int(s2 + m), int(s2 - m)];
    // Canonical order makes the result bitwise invariant under s1↔s2 and m↔−m.
    top.sort_unstable();
    bottom.sort_unstable();
    Ok(Some((top, bottom)))
}

/// Exact radicand as a big rational; `None` outside the support.
pub fn stretched_cg_radicand(s1: HalfInt, s2: HalfInt, m: HalfInt) -> Result<Option<BigRationalSqrt>> {
    Ok(factorial_args(s1, s2, m)?.map(|(top, bottom)| BigRationalSqrt {
        num: top.iter().map(|&k| factorial(k)).product(),
        den: bottom.iter().map(|&k| factorial(k)).product(),
    }))
}

/// Log-factorial evaluation, usable for any size.
pub fn stretched_cg_log_path(s1: HalfInt, s2: HalfInt, m: HalfInt) -> Result<f64> {
    Ok(match factorial_args(s1, s2, m)? {
        None => 0.0,
        Some((top, bottom)) => {
            let log = top.iter().map(|&k| ln_factorial(k)).sum::<f64>() - bottom.iter().map(|&k| ln_factorial(k)).sum::<f64>();
            (0.5 * log).exp()
        }
    })
}

/// Exact stretched coefficient `⟨s1, −m; s2, m | s1+s2, 0⟩`; zero for `|m| > min(s1, s2)`.
pub fn stretched_cg_exact(s1: HalfInt, s2: HalfInt, m: HalfInt) -> Result<f64> {
    if (s1 + s2).twice() <= 2 * EXACT_PATH_LIMIT {
        Ok(stretched_cg_radicand(s1, s2, m)?.map_or(0.0, |r| r.value()))
    } else {
        stretched_cg_log_path(s1, s2, m)
    }
}

/// Gaussian limit `((s1+s2)/(π s1 s2))^{1/4} exp(−m²(s1+s2)/(2 s1 s2))`.
pub fn stretched_cg_asymptotic(s1: f64, s2: f64, m: f64) -> Result<f64> {
    if !(s1 > 0.0 && s2 > 0.0 && s1.is_finite() && s2.is_finite()) {
        return Err(Error::Domain { field: "s", reason: format!("spins must be positive, got {s1}, {s2}") });
    }
    let width = (s1 + s2) / (s1 * s2);
    Ok((width / PI).powf(0.25) * (-0.5 * m * m * width).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Context;
    use crate::tridiag::exact_cg;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn spin_one_values() {
        let one = HalfInt::from_int(1);
        assert_abs_diff_eq!(stretched_cg_exact(one, one, HalfInt::ZERO).unwrap(), 0.816497, epsilon = 1e-6);
        assert_abs_diff_eq!(stretched_cg_exact(one, one, HalfInt::ZERO).unwrap(), (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(stretched_cg_exact(one, one, one).unwrap(), 0.408248, epsilon = 1e-6);
        assert_abs_diff_eq!(stretched_cg_exact(one, one, one).unwrap(), 1.0 / 6f64.sqrt(), epsilon = 1e-15);
        let r = stretched_cg_radicand(one, one, HalfInt::ZERO).unwrap().unwrap();
        assert_eq!((r.num, r.den), (BigUint::from(16u32), BigUint::from(24u32)));
    }

    #[test]
    fn support_and_parity() {
        assert_eq!(stretched_cg_exact(h(4), h(2), h(4)).unwrap(), 0.0);
        assert_eq!(stretched_cg_exact(h(4), h(2), h(-4)).unwrap(), 0.0);
        assert!(matches!(stretched_cg_exact(h(4), h(2), h(1)), Err(Error::Parity(_))));
        assert!(stretched_cg_exact(h(3), h(1), h(1)).unwrap() > 0.0);
    }

    #[test]
    fn asymptotic_values() {
        let equal_spin = stretched_cg_asymptotic(50.0, 50.0, 0.0).unwrap();
        assert_abs_diff_eq!(equal_spin, (2.0 / (PI * 50.0)).powf(0.25), epsilon = 1e-15);
        assert_abs_diff_eq!(equal_spin, 0.33591, epsilon = 1e-5);
        let ratio = stretched_cg_exact(h(100), h(100), HalfInt::ZERO).unwrap() / stretched_cg_asymptotic(50.0, 50.0, 0.0).unwrap();
        assert!((0.99..=1.01).contains(&ratio), "{ratio}");
        assert!(stretched_cg_asymptotic(0.0, 1.0, 0.0).is_err());
        let mut prev = f64::INFINITY;
        for m in 0..40 {
            let v = stretched_cg_asymptotic(12.0, 7.5, m as f64).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn ratio_improves_with_spin() {
        let errors: Vec<f64> = [10, 20, 40, 80]
            .iter()
            .map(|&s| {
                let exact = stretched_cg_exact(HalfInt::from_int(s), HalfInt::from_int(s), HalfInt::ZERO).unwrap();
                (exact / stretched_cg_asymptotic(s as f64, s as f64, 0.0).unwrap() - 1.0).abs()
            })
            .collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    }

    #[test]
    fn large_spins_use_log_path() {
        let v = stretched_cg_exact(h(400), h(300), h(10)).unwrap();
        assert_eq!(v, stretched_cg_log_path(h(400), h(300), h(10)).unwrap());
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn matches_tridiagonal_oracle() {
        for t1 in 1..=30 {
            for t2 in 1..=30 {
                if (t1 + t2) % 2 != 0 {
                    continue;
                }
                let table = exact_cg(&Context::su2(h(t1), h(t2), HalfInt::ZERO).unwrap(), 0).unwrap();
                for (m, v) in table.grid.iter().zip(&table.values) {
                    // The table is indexed by m2 = m, so m1 = −m.
                    let closed = stretched_cg_exact(h(t1), h(t2), *m).unwrap();
                    assert!((closed - v).abs() <= 1e-10, "s1={} s2={} m={m}: {closed} vs {v}", h(t1), h(t2));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn exact_and_log_paths_agree(t1 in 0i64..=40, t2 in 0i64..=40, pick in any::<u16>()) {
            prop_assume!((t1 + t2) % 2 == 0 && t1 + t2 <= 80);
            let bound = t1.min(t2);
            let m = -bound + 2 * (pick as i64 % (bound + 1));
            let exact = stretched_cg_radicand(h(t1), h(t2), h(m)).unwrap().unwrap().value();
            let log = stretched_cg_log_path(h(t1), h(t2), h(m)).unwrap();
            prop_assert!((exact - log).abs() <= 1e-10);
        }

        #[test]
        fn symmetric_in_spins_and_m(t1 in 0i64..=60, t2 in 0i64..=60, pick in any::<u16>()) {
            prop_assume!((t1 + t2) % 2 == 0);
            let bound = t1.min(t2);
            let m = h(-bound + 2 * (pick as i64 % (bound + 1)));
            let v = stretched_cg_exact(h(t1), h(t2), m).unwrap();
            prop_assert_eq!(v, stretched_cg_exact(h(t2), h(t1), m).unwrap());
            prop_assert_eq!(v, stretched_cg_exact(h(t1), h(t2), -m).unwrap());
        }
    }
}
