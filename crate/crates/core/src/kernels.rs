//! Group-specific three-term kernels for Ŝ₊Ŝ₋ (SU(2)) and K̂₊K̂₋ (SU(1,1)).
//!
//! Both operators act on the fixed-M (resp. fixed-N) subspace as
//!
//! ```text
//! (Tψ)(m) = f0(m) ψ(m) + f1(m) ψ(m+1) + f1(m-1) ψ(m-1)
//! ```
//!
//! and both kernels factor into products of linear polynomials in m, which is
//! how they are stored here: `f0 = l0·l1 + l2·l3` and `f1 = ±√(r0·r1·r2·r3)`.
//! Keeping the factored form makes the boundary zeros of `f1` exact and gives
//! closed-form derivatives of `F(x) = f0(x) + f1(x) + f1(x-1)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::half::HalfInt;

/// Radicand values in `[-RADICAND_TOL, 0)` are treated as roundoff and clamped to zero.
pub const RADICAND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Su2,
    Su11,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Su2 => f.write_str("su2"),
            Group::Su11 => f.write_str("su11"),
        }
    }
}

/// Two spins `s1`, `s2` coupled at fixed total projection `M = m1 + m2`, with grid variable `m = m2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Su2Context {
    pub s1: HalfInt,
    pub s2: HalfInt,
    #[serde(rename = "M")]
    pub total_m: HalfInt,
    pub sigma1: f64,
    pub sigma2: f64,
    pub m_min: HalfInt,
    pub m_max: HalfInt,
    pub dim: usize,
}

/// Two positive-discrete-series irreps `k1`, `k2` at fixed `N = n1 + n2`, with
/// grid variable `m = (n2 - n1)/2` running over `-N/2..=N/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Su11Context {
    pub k1: f64,
    pub k2: f64,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub kappa1: f64,
    pub kappa2: f64,
}

pub fn make_su2_context(s1: HalfInt, s2: HalfInt, total_m: HalfInt) -> Result<Su2Context> {
    if s1.twice() < 0 {
        return Err(Error::Domain { field: "s1", reason: format!("spin must be non-negative, got {s1}") });
    }
    if s2.twice() < 0 {
        return Err(Error::Domain { field: "s2", reason: format!("spin must be non-negative, got {s2}") });
    }
    if !(s1 + s2 + total_m).is_integral() {
        return Err(Error::Domain {
            field: "M",
            reason: format!("s1 + s2 + M must be an integer (s1={s1}, s2={s2}, M={total_m})"),
        });
    }
    if total_m.abs() > s1 + s2 {
        return Err(Error::Domain {
            field: "M",
            reason: format!("|M| = {} exceeds s1 + s2 = {}", total_m.abs(), s1 + s2),
        });
    }
    let m_min = (-s2).max(total_m - s1);
    let m_max = s2.min(total_m + s1);
    let dim = ((m_max - m_min).twice() / 2 + 1) as usize;
    let (a, b) = (s1.to_f64(), s2.to_f64());
    Ok(Su2Context {
        s1,
        s2,
        total_m,
        sigma1: (a * (a + 1.0)).sqrt(),
        sigma2: (b * (b + 1.0)).sqrt(),
        m_min,
        m_max,
        dim,
    })
}

pub fn make_su11_context(k1: f64, k2: f64, big_n: i64) -> Result<Su11Context> {
    if !(k1.is_finite() && k1 > 0.0) {
        return Err(Error::Domain { field: "k1", reason: format!("Bargmann index must be positive, got {k1}") });
    }
    if !(k2.is_finite() && k2 > 0.0) {
        return Err(Error::Domain { field: "k2", reason: format!("Bargmann index must be positive, got {k2}") });
    }
    if big_n < 0 || big_n > u32::MAX as i64 {
        return Err(Error::Domain { field: "N", reason: format!("N must be a non-negative integer, got {big_n}") });
    }
    let quarter = big_n as f64 / 4.0;
    Ok(Su11Context { k1, k2, big_n: big_n as u32, kappa1: k1 + quarter, kappa2: k2 + quarter })
}

/// `c0 + c1·x`
#[derive(Clone, Copy, Debug)]
struct Linear {
    c0: f64,
    c1: f64,
}

impl Linear {
    const fn new(c0: f64, c1: f64) -> Self {
        Linear { c0, c1 }
    }

    fn at(self, x: f64) -> f64 {
        self.c0 + self.c1 * x
    }
}

/// Value, first and second derivative of a product of linear factors.
fn product_derivs(factors: &[Linear], x: f64) -> (f64, f64, f64) {
    let vals: Vec<f64> = factors.iter().map(|l| l.at(x)).collect();
    let k = factors.len();
    let mut p = 1.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for v in &vals {
        p *= v;
    }
    for i in 0..k {
        let rest: f64 = (0..k).filter(|&j| j != i).map(|j| vals[j]).product();
        d1 += factors[i].c1 * rest;
        for j in (i + 1)..k {
            let rest: f64 = (0..k).filter(|&l| l != i && l != j).map(|l| vals[l]).product();
            d2 += 2.0 * factors[i].c1 * factors[j].c1 * rest;
        }
    }
    (p, d1, d2)
}

/// F and its first two derivatives at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FDerivs {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Validated problem parameters for either group.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum Context {
    Su2(Su2Context),
    Su11(Su11Context),
}

impl From<Su2Context> for Context {
    fn from(c: Su2Context) -> Self {
        Context::Su2(c)
    }
}

impl From<Su11Context> for Context {
    fn from(c: Su11Context) -> Self {
        Context::Su11(c)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::Su2(c) => write!(f, "su2(s1={},s2={},M={})", c.s1, c.s2, c.total_m),
            Context::Su11(c) => write!(f, "su11(k1={},k2={},N={})", c.k1, c.k2, c.big_n),
        }
    }
}

impl Context {
    pub fn su2(s1: HalfInt, s2: HalfInt, total_m: HalfInt) -> Result<Self> {
        make_su2_context(s1, s2, total_m).map(Context::Su2)
    }

    pub fn su11(k1: f64, k2: f64, big_n: i64) -> Result<Self> {
        make_su11_context(k1, k2, big_n).map(Context::Su11)
    }

    pub fn as_su2(&self) -> Option<&Su2Context> {
        match self {
            Context::Su2(c) => Some(c),
            Context::Su11(_) => None,
        }
    }

    pub fn as_su11(&self) -> Option<&Su11Context> {
        match self {
            Context::Su11(c) => Some(c),
            Context::Su2(_) => None,
        }
    }

    pub fn group(&self) -> Group {
        match self {
            Context::Su2(_) => Group::Su2,
            Context::Su11(_) => Group::Su11,
        }
    }

    pub fn m_min(&self) -> HalfInt {
        match self {
            Context::Su2(c) => c.m_min,
            Context::Su11(c) => HalfInt::from_twice(-(c.big_n as i64)),
        }
    }

    pub fn m_max(&self) -> HalfInt {
        match self {
            Context::Su2(c) => c.m_max,
            Context::Su11(c) => HalfInt::from_twice(c.big_n as i64),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Context::Su2(c) => c.dim,
            Context::Su11(c) => c.big_n as usize + 1,
        }
    }

    /// The m values `m_min, m_min+1, ..., m_max`.
    pub fn grid(&self) -> Vec<HalfInt> {
        let lo = self.m_min();
        (0..self.dim() as i64).map(|i| lo + HalfInt::from_int(i)).collect()
    }

    /// Largest admissible `n` (the number of coupled states in this subspace, minus one).
    pub fn max_n(&self) -> u32 {
        (self.dim() - 1) as u32
    }

    fn f0_factors(&self) -> [Linear; 4] {
        match self {
            Context::Su2(c) => {
                let (s1, s2, m) = (c.s1.to_f64(), c.s2.to_f64(), c.total_m.to_f64());
                [
                    Linear::new(s1 + m, -1.0),
                    Linear::new(s1 - m + 1.0, 1.0),
                    Linear::new(s2, 1.0),
                    Linear::new(s2 + 1.0, -1.0),
                ]
            }
            Context::Su11(c) => {
                let h = c.big_n as f64 / 2.0;
                [
                    Linear::new(2.0 * c.kappa1 - 1.0, -1.0),
                    Linear::new(h, -1.0),
                    Linear::new(2.0 * c.kappa2 - 1.0, 1.0),
                    Linear::new(h, 1.0),
                ]
            }
        }
    }

    fn radicand_factors(&self) -> [Linear; 4] {
        match self {
            Context::Su2(c) => {
                let (s1, s2, m) = (c.s1.to_f64(), c.s2.to_f64(), c.total_m.to_f64());
                [
                    Linear::new(s1 + m, -1.0),
                    Linear::new(s1 - m + 1.0, 1.0),
                    Linear::new(s2, -1.0),
                    Linear::new(s2 + 1.0, 1.0),
                ]
            }
            Context::Su11(c) => {
                let h = c.big_n as f64 / 2.0;
                [
                    Linear::new(2.0 * c.kappa1 - 1.0, -1.0),
                    Linear::new(h, -1.0),
                    Linear::new(2.0 * c.kappa2, 1.0),
                    Linear::new(h + 1.0, 1.0),
                ]
            }
        }
    }

    /// +1 for SU(2) (non-negative off-diagonal), -1 for the SU(1,1) ψ-phase convention.
    pub fn f1_sign(&self) -> f64 {
        match self {
            Context::Su2(_) => 1.0,
            Context::Su11(_) => -1.0,
        }
    }

    pub fn f0(&self, x: f64) -> f64 {
        let l = self.f0_factors();
        l[0].at(x) * l[1].at(x) + l[2].at(x) * l[3].at(x)
    }

    fn radicand(&self, x: f64) -> Result<f64> {
        let (p, _, _) = product_derivs(&self.radicand_factors(), x);
        if p >= 0.0 {
            Ok(p)
        } else if p >= -RADICAND_TOL {
            Ok(0.0)
        } else {
            Err(Error::Domain {
                field: "x",
                reason: format!("f1 radicand {p:.3e} < 0 at x = {x} (outside the physical window of {self})"),
            })
        }
    }

    pub fn f1(&self, x: f64) -> Result<f64> {
        Ok(self.f1_sign() * self.radicand(x)?.sqrt())
    }

    /// `(f0(x), f1(x))`.
    pub fn kernels(&self, x: f64) -> Result<(f64, f64)> {
        Ok((self.f0(x), self.f1(x)?))
    }

    fn f1_derivs(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (p, dp, d2p) = product_derivs(&self.radicand_factors(), x);
        if p.is_nan() || p <= 0.0 {
            return Err(Error::Domain {
                field: "x",
                reason: format!("f1 is not differentiable at x = {x} (radicand {p:.3e}) for {self}"),
            });
        }
        let root = p.sqrt();
        let sign = self.f1_sign();
        let d1 = dp / (2.0 * root);
        let d2 = (2.0 * p * d2p - dp * dp) / (4.0 * p * root);
        Ok((sign * root, sign * d1, sign * d2))
    }

    /// `F(x) = f0(x) + f1(x) + f1(x-1)` with analytic first and second derivatives.
    pub fn f_and_derivs(&self, x: f64) -> Result<FDerivs> {
        let (lo, hi) = (self.m_min().to_f64(), self.m_max().to_f64());
        if !(x > lo && x < hi) {
            return Err(Error::Domain {
                field: "x",
                reason: format!("F requires m_min < x < m_max, got x = {x} on [{lo}, {hi}]"),
            });
        }
        let (q0, dq0, d2q0) = {
            let l = self.f0_factors();
            let (a, da, d2a) = product_derivs(&l[..2], x);
            let (b, db, d2b) = product_derivs(&l[2..], x);
            (a + b, da + db, d2a + d2b)
        };
        let (up, dup, d2up) = self.f1_derivs(x)?;
        let (dn, ddn, d2dn) = self.f1_derivs(x - 1.0)?;
        Ok(FDerivs { value: q0 + up + dn, d1: dq0 + dup + ddn, d2: d2q0 + d2up + d2dn })
    }

    /// Open interval on which F is real and twice differentiable.
    ///
    /// For SU(1,1) with `2k < 1` the factors `2κ1-1-x` and `2κ2-1+x` vanish
    /// strictly inside the grid span, which trims the interval.
    pub fn smooth_interval(&self) -> (f64, f64) {
        match self {
            Context::Su2(c) => (c.m_min.to_f64(), c.m_max.to_f64()),
            Context::Su11(c) => {
                let h = c.big_n as f64 / 2.0;
                ((-h).max(-h + 1.0 - 2.0 * c.k2), h.min(h - 1.0 + 2.0 * c.k1))
            }
        }
    }

    /// Analytically known eigenvalue of the tridiagonal operator for coupled state `n`.
    ///
    /// SU(2): `S(S+1) - M(M-1)` with `S = s1 + s2 - n`. SU(1,1): `(2K + n - 1)n`
    /// with `K = N - n + k1 + k2`.
    pub fn target_eigenvalue(&self, n: u32) -> Result<f64> {
        match self {
            Context::Su2(c) => {
                let s = c.s1 + c.s2 - HalfInt::from_int(n as i64);
                if HalfInt::from_int(n as i64) > HalfInt::from_twice(2 * c.s1.min(c.s2).twice()) {
                    return Err(Error::Range {
                        what: "n",
                        reason: format!("n = {n} exceeds 2·min(s1, s2) for {self}"),
                    });
                }
                if c.total_m.abs() > s {
                    return Err(Error::Range {
                        what: "n",
                        reason: format!("S = s1 + s2 - n = {s} is below |M| = {}", c.total_m.abs()),
                    });
                }
                let (s, m) = (s.to_f64(), c.total_m.to_f64());
                Ok(s * (s + 1.0) - m * (m - 1.0))
            }
            Context::Su11(c) => {
                if n > c.big_n {
                    return Err(Error::Range { what: "n", reason: format!("n = {n} exceeds N = {}", c.big_n) });
                }
                let nf = n as f64;
                let k = (c.big_n - n) as f64 + c.k1 + c.k2;
                Ok((2.0 * k + nf - 1.0) * nf)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn su2(s1: i64, s2: i64, m: i64) -> Context {
        Context::su2(HalfInt::from_int(s1), HalfInt::from_int(s2), HalfInt::from_int(m)).unwrap()
    }

    #[test]
    fn su2_context_bounds() {
        let c = make_su2_context(HalfInt::from_int(20), HalfInt::from_int(15), HalfInt::ZERO).unwrap();
        assert_eq!(c.m_min, HalfInt::from_int(-15));
        assert_eq!(c.m_max, HalfInt::from_int(15));
        assert_eq!(c.dim, 31);
        assert_relative_eq!(c.sigma1, 420f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.sigma2, 240f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.sigma1 * c.sigma1, 420.0, max_relative = 1e-15);

        let c = make_su2_context(h(1), h(1), HalfInt::ZERO).unwrap();
        assert_eq!((c.m_min, c.m_max, c.dim), (h(-1), h(1), 2));
    }

    #[test]
    fn su2_context_rejects_bad_input() {
        let err = make_su2_context(HalfInt::from_int(1), HalfInt::from_int(1), HalfInt::from_int(5)).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "M", .. }));
        let err = make_su2_context(h(1), HalfInt::from_int(1), HalfInt::ZERO).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "M", .. }));
        let err = make_su2_context(h(-2), HalfInt::from_int(1), HalfInt::ZERO).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "s1", .. }));
    }

    #[test]
    fn su11_context() {
        let c = make_su11_context(0.5, 1.5, 10).unwrap();
        assert_eq!(c.kappa1, 3.0);
        assert_eq!(c.kappa2, 4.0);
        let ctx = Context::Su11(c);
        assert_eq!(ctx.dim(), 11);
        assert_eq!(ctx.grid().first().copied(), Some(HalfInt::from_int(-5)));
        assert_eq!(ctx.grid().last().copied(), Some(HalfInt::from_int(5)));

        let c = make_su11_context(10.0, 17.0, 100).unwrap();
        assert_eq!((c.kappa1, c.kappa2), (35.0, 42.0));
        assert_eq!(Context::Su11(c).dim(), 101);

        assert!(matches!(make_su11_context(0.0, 1.0, 4), Err(Error::Domain { field: "k1", .. })));
        assert!(matches!(make_su11_context(1.0, 1.0, -1), Err(Error::Domain { field: "N", .. })));
    }

    #[test]
    fn su11_odd_n_grid_is_half_integral() {
        let ctx = Context::su11(0.5, 0.5, 1).unwrap();
        assert_eq!(ctx.grid(), vec![h(-1), h(1)]);
    }

    #[test]
    fn su2_kernel_values() {
        let ctx = su2(20, 15, 0);
        let (f0, f1) = ctx.kernels(0.0).unwrap();
        assert_eq!(f0, 660.0);
        assert_relative_eq!(f1, 100800f64.sqrt(), max_relative = 1e-15);
        assert_eq!(ctx.f1(15.0).unwrap(), 0.0);
        assert_eq!(ctx.f1(-16.0).unwrap(), 0.0);
        assert!(ctx.f1(15.5).is_err());

        let half = Context::su2(h(1), h(1), HalfInt::ZERO).unwrap();
        assert_eq!(half.kernels(-0.5).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn su11_kernel_values() {
        let ctx = Context::su11(0.5, 0.5, 1).unwrap();
        assert_eq!(ctx.kernels(-0.5).unwrap(), (1.0, -1.0));
        let (f0, f1) = ctx.kernels(0.5).unwrap();
        assert_eq!(f0, 1.0);
        assert_eq!(f1, 0.0);
        let ctx = Context::su11(3.7, 0.2, 12).unwrap();
        assert_eq!(ctx.f1(6.0).unwrap(), 0.0);
    }

    #[test]
    fn big_f_at_symmetric_point() {
        let ctx = su2(20, 15, 0);
        let f = ctx.f_and_derivs(0.0).unwrap();
        assert_relative_eq!(f.value, 660.0 + 2.0 * 100800f64.sqrt(), max_relative = 1e-14);
        assert!(f.d2 < 0.0);

        let sym = su2(7, 7, 0);
        assert_eq!(sym.f_and_derivs(0.0).unwrap().d1, 0.0);
        assert!(ctx.f_and_derivs(15.0).is_err());
        assert!(ctx.f_and_derivs(-15.0).is_err());
    }

    #[test]
    fn target_eigenvalues() {
        assert_eq!(su2(20, 15, 0).target_eigenvalue(0).unwrap(), 1260.0);
        let c = Context::su11(0.5, 1.5, 10).unwrap();
        assert_eq!(c.target_eigenvalue(0).unwrap(), 0.0);
        assert_eq!(c.target_eigenvalue(2).unwrap(), 42.0);
        assert!(c.target_eigenvalue(11).is_err());
        assert!(su2(20, 15, 0).target_eigenvalue(31).is_err());
        assert!(su2(2, 2, 3).target_eigenvalue(2).is_err());
        assert!(su2(2, 2, 3).target_eigenvalue(1).is_ok());
    }

    fn su2_strategy() -> impl Strategy<Value = Context> {
        (0i64..=80, 0i64..=80, -80i64..=80).prop_filter_map("valid su2", |(a, b, m)| {
            Context::su2(h(a), h(b), h(m)).ok().filter(|c| c.dim() >= 3)
        })
    }

    fn su11_strategy() -> impl Strategy<Value = Context> {
        (0.05f64..40.0, 0.05f64..40.0, 2i64..120).prop_map(|(a, b, n)| Context::su11(a, b, n).unwrap())
    }

    fn check_fd(ctx: &Context, t: f64) -> std::result::Result<(), TestCaseError> {
        let (lo, hi) = ctx.smooth_interval();
        let width = hi - lo;
        let x = lo + 1e-3 * width + t * 0.998 * width;
        let h = 1e-6;
        let (Ok(f), Ok(fp), Ok(fm)) =
            (ctx.f_and_derivs(x), ctx.f_and_derivs(x + h), ctx.f_and_derivs(x - h))
        else {
            return Err(TestCaseError::fail(format!("F undefined near {x} for {ctx}")));
        };
        let fd1 = (fp.value - fm.value) / (2.0 * h);
        let fd2 = (fp.d1 - fm.d1) / (2.0 * h);
        let scale1 = f.d1.abs().max(f.value.abs() * 1e-6);
        let scale2 = f.d2.abs().max(f.d1.abs() * 1e-3).max(1.0);
        prop_assert!((fd1 - f.d1).abs() <= 1e-5 * scale1, "F' {} vs fd {} at {} for {}", f.d1, fd1, x, ctx);
        prop_assert!((fd2 - f.d2).abs() <= 1e-5 * scale2, "F'' {} vs fd {} at {} for {}", f.d2, fd2, x, ctx);
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn su2_derivatives_match_finite_differences(ctx in su2_strategy(), t in 0.0f64..1.0) {
            check_fd(&ctx, t)?;
        }

        #[test]
        fn su11_derivatives_match_finite_differences(ctx in su11_strategy(), t in 0.0f64..1.0) {
            check_fd(&ctx, t)?;
        }

        #[test]
        fn su2_f1_sign_and_curvature(ctx in su2_strategy(), t in 0.0f64..1.0) {
            let (lo, hi) = ctx.smooth_interval();
            let x = lo + (hi - lo) * (0.01 + 0.98 * t);
            prop_assert!(ctx.f1(x).unwrap() >= 0.0);
            prop_assert!(ctx.f_and_derivs(x).unwrap().d2 < 0.0);
        }

        #[test]
        fn su11_f1_non_positive(ctx in su11_strategy()) {
            for m in ctx.grid() {
                prop_assert!(ctx.f1(m.to_f64()).unwrap() <= 0.0);
            }
            prop_assert_eq!(ctx.f1(ctx.m_max().to_f64()).unwrap(), 0.0);
        }

        #[test]
        fn eigenvalues_pairwise_distinct(ctx in prop_oneof![su2_strategy(), su11_strategy()]) {
            let mut lams: Vec<f64> = (0..=ctx.max_n()).map(|n| ctx.target_eigenvalue(n).unwrap()).collect();
            lams.sort_by(f64::total_cmp);
            for w in lams.windows(2) {
                prop_assert!(w[1] - w[0] > 1e-6);
            }
        }
    }

    #[test]
    fn su2_boundary_zeros_on_grid() {
        for (a, b, m) in [(20, 15, 0), (7, 3, 5), (3, 7, -5), (1, 9, 2)] {
            let ctx = su2(a, b, m);
            assert_eq!(ctx.f1(ctx.m_max().to_f64()).unwrap(), 0.0);
            assert_eq!(ctx.f1(ctx.m_min().to_f64() - 1.0).unwrap(), 0.0);
        }
    }
}
