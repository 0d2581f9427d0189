//! Shifted harmonic approximation (SHA) of the tridiagonal CG operators.
//!
//! Near its centroid `x0` the operator `F(x) + D f1(x) D` is replaced by a
//! shifted oscillator with kinetic coefficient `A = ±2 f1(x0)` and stiffness
//! `B = ∓F''(x0)`; the centroid is the root of `F'`. The simplified variant uses
//! the closed-form large-spin (large-N) limits of `A`, `B` and `C`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermite::{oscillator_wf, oscillator_wf_split, OscillatorShape};
use crate::kernels::{Context, Group};
use crate::table::{CoeffTable, Method, Phase};

/// Absolute tolerance on the centroid.
pub const X0_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Full,
    Simplified,
}

impl Variant {
    pub fn method(self) -> Method {
        match self {
            Variant::Full => Method::ShaFull,
            Variant::Simplified => Method::ShaSimplified,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShaParams {
    pub group: Group,
    pub variant: Variant,
    pub x0: f64,
    /// `F(x0)` for the full variant; the simplified limit leaves the constant unspecified.
    pub energy: Option<f64>,
    /// A (or A₀).
    pub kinetic: f64,
    /// B (or B₀).
    pub stiffness: f64,
    /// Full: the residual `F'(x0)`. Simplified: C₀, already folded into `x0`.
    pub linear: f64,
    pub a: f64,
    pub hbar_omega: f64,
}

impl ShaParams {
    pub fn shape(&self) -> OscillatorShape {
        OscillatorShape { a: self.a, x0: self.x0 }
    }
}

/// Which variable feeds the Hermite polynomial in an SU(2) approximate table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HermiteArg {
    /// `a(m - x0)`.
    #[default]
    Grid,
    /// `a(σ1 m2 - σ2 m1)/(σ1 + σ2)` with `m2 = m`, `m1 = M - m`; odd under the spin exchange.
    Swapform,
}

fn derivative(ctx: &Context, x: f64) -> Result<f64> {
    Ok(ctx.f_and_derivs(x)?.d1)
}

/// Locate the root of F' inside the smooth interval, starting near `guess`.
fn find_centroid(ctx: &Context, guess: f64) -> Result<f64> {
    let (lo, hi) = ctx.smooth_interval();
    let eta = 1e-9 * (hi - lo).max(1.0);
    let (lo, hi) = (lo + eta, hi - eta);
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::NoBracket { lo, hi });
    }
    let start = if guess.is_finite() { guess.clamp(lo, hi) } else { 0.5 * (lo + hi) };
    let g0 = derivative(ctx, start)?;
    if g0 == 0.0 {
        return Ok(start);
    }
    // F' decreases through the root for SU(2) and increases for SU(1,1).
    let increasing = ctx.group() == Group::Su11;
    let dir = if (g0 > 0.0) != increasing { 1.0 } else { -1.0 };
    let limit = if dir > 0.0 { hi } else { lo };

    let mut near = (start, g0);
    let mut step = 0.5;
    let far = loop {
        let x = (start + dir * step).clamp(lo, hi);
        let g = derivative(ctx, x)?;
        if g == 0.0 {
            return Ok(x);
        }
        if (g > 0.0) != (g0 > 0.0) {
            break (x, g);
        }
        if x == limit {
            return Err(Error::NoBracket { lo, hi });
        }
        near = (x, g);
        step *= 2.0;
    };

    // Safeguarded Newton on the bracket.
    let (mut a, mut b) = if near.0 < far.0 { (near, far) } else { (far, near) };
    let mut x = 0.5 * (a.0 + b.0);
    for _ in 0..200 {
        let f = ctx.f_and_derivs(x)?;
        if f.d1 == 0.0 {
            return Ok(x);
        }
        if (f.d1 > 0.0) == (a.1 > 0.0) {
            a = (x, f.d1);
        } else {
            b = (x, f.d1);
        }
        if b.0 - a.0 <= X0_TOL {
            return Ok(if a.1.abs() < b.1.abs() { a.0 } else { b.0 });
        }
        let newton = x - f.d1 / f.d2;
        let next = if newton > a.0 && newton < b.0 { newton } else { 0.5 * (a.0 + b.0) };
        if (next - x).abs() <= 0.1 * X0_TOL {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Full SHA: centroid from `F'(x0) = 0`, then `E, A, B` from the exact kernels at `x0`.
pub fn solve_sha_full(ctx: &Context) -> Result<ShaParams> {
    if ctx.dim() < 3 {
        return Err(Error::Domain { field: "dim", reason: format!("SHA needs at least 3 grid points, {ctx} has {}", ctx.dim()) });
    }
    let guess = simplified_params(ctx).map(|p| p.x0).unwrap_or(f64::NAN);
    let x0 = find_centroid(ctx, guess)?;
    let f = ctx.f_and_derivs(x0)?;
    let f1 = ctx.f1(x0)?;
    let (kinetic, stiffness) = match ctx.group() {
        Group::Su2 => (2.0 * f1, -f.d2),
        Group::Su11 => (-2.0 * f1, f.d2),
    };
    if !(kinetic > 0.0 && stiffness > 0.0) {
        return Err(Error::NegativeCurvature { x0, kinetic, stiffness });
    }
    log::debug!("full SHA for {ctx}: x0={x0} F'={} A={kinetic} B={stiffness}", f.d1);
    Ok(ShaParams {
        group: ctx.group(),
        variant: Variant::Full,
        x0,
        energy: Some(f.value),
        kinetic,
        stiffness,
        linear: f.d1,
        a: (stiffness / kinetic).powf(0.25),
        hbar_omega: (kinetic * stiffness).sqrt(),
    })
}

/// Closed-form large-spin (SU(2)) or large-N (SU(1,1)) limit of the SHA parameters.
pub fn simplified_params(ctx: &Context) -> Result<ShaParams> {
    match ctx {
        Context::Su2(c) => {
            let (s1, s2) = (c.sigma1, c.sigma2);
            let m = c.total_m.to_f64();
            let sum = s1 + s2;
            let bracket = sum * sum - m * m;
            if bracket.is_nan() || bracket <= 0.0 || s1 * s2 == 0.0 {
                return Err(Error::Domain {
                    field: "M",
                    reason: format!("simplified SHA needs σ1σ2 > 0 and (σ1+σ2)² > M² for {ctx}"),
                });
            }
            let kinetic = 2.0 * s1 * s2 * (1.0 - m * m / (sum * sum));
            let linear = 2.0 * sum * m / s1;
            let stiffness = 2.0 * sum * sum / (s1 * s2);
            let a4 = sum.powi(4) / (s1 * s1 * s2 * s2 * bracket);
            Ok(ShaParams {
                group: Group::Su2,
                variant: Variant::Simplified,
                x0: s2 * m / sum,
                energy: None,
                kinetic,
                stiffness,
                linear,
                a: a4.powf(0.25),
                hbar_omega: (kinetic * stiffness).sqrt(),
            })
        }
        Context::Su11(c) => {
            if c.big_n == 0 {
                return Err(Error::Domain { field: "N", reason: "simplified SHA needs N > 0".into() });
            }
            let n = c.big_n as f64;
            let r = (c.kappa1 * c.kappa2).sqrt();
            let kinetic = 2.0 * n * r;
            let linear = (n + 4.0 * r) / (2.0 * r) * (c.k2 - c.k1);
            let stiffness = (n + 4.0 * r).powi(2) / (2.0 * n * r);
            let a2 = (n + 4.0 * r) / (2.0 * n * r);
            Ok(ShaParams {
                group: Group::Su11,
                variant: Variant::Simplified,
                x0: n * (c.k1 - c.k2) / (n + 4.0 * r),
                energy: None,
                kinetic,
                stiffness,
                linear,
                a: a2.sqrt(),
                hbar_omega: (kinetic * stiffness).sqrt(),
            })
        }
    }
}

/// Gaussian mass `∫ φ0²` outside `[m_min, m_max]`.
pub fn boundary_spill(ctx: &Context, shape: OscillatorShape) -> f64 {
    let upper = shape.a * (ctx.m_max().to_f64() - shape.x0);
    let lower = shape.a * (ctx.m_min().to_f64() - shape.x0);
    (0.5 * (libm::erfc(upper) + libm::erfc(-lower))).max(0.0)
}

/// Oscillator-function approximation to the CG table for coupled state `n`.
pub fn approx_cg(ctx: &Context, n: u32, params: &ShaParams, hermite_arg: HermiteArg) -> Result<CoeffTable> {
    if params.group != ctx.group() {
        return Err(Error::Mismatch(format!("{} SHA parameters used with {ctx}", params.group)));
    }
    let shape = OscillatorShape::new(params.a, params.x0)
        .ok_or_else(|| Error::Domain { field: "a", reason: format!("invalid oscillator shape a={}, x0={}", params.a, params.x0) })?;
    let grid = ctx.grid();
    let values = match (ctx, hermite_arg) {
        (Context::Su2(_), HermiteArg::Grid) => {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            grid.iter().map(|m| sign * oscillator_wf(n, shape, m.to_f64())).collect()
        }
        (Context::Su2(c), HermiteArg::Swapform) => {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            let sum = c.sigma1 + c.sigma2;
            grid.iter()
                .map(|&m| {
                    let m2 = m.to_f64();
                    let m1 = (c.total_m - m).to_f64();
                    let arg = shape.a * (c.sigma1 * m2 - c.sigma2 * m1) / sum;
                    sign * oscillator_wf_split(n, shape, arg, m2)
                })
                .collect()
        }
        (Context::Su11(_), HermiteArg::Grid) => grid.iter().map(|m| oscillator_wf(n, shape, m.to_f64())).collect(),
        (Context::Su11(_), HermiteArg::Swapform) => {
            return Err(Error::Mismatch("the swapped Hermite argument is defined for SU(2) only".into()));
        }
    };
    Ok(CoeffTable {
        context: ctx.clone(),
        n,
        method: params.variant.method(),
        phase: Phase::for_group(ctx.group()),
        grid,
        values,
        boundary_spill: Some(boundary_spill(ctx, shape)),
    })
}

/// Convenience: compute parameters for `variant` and emit the table.
pub fn sha_table(ctx: &Context, n: u32, variant: Variant, hermite_arg: HermiteArg) -> Result<CoeffTable> {
    let params = match variant {
        Variant::Full => solve_sha_full(ctx)?,
        Variant::Simplified => simplified_params(ctx)?,
    };
    approx_cg(ctx, n, &params, hermite_arg)
}
