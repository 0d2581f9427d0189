//! Exact CG coefficients as eigenvectors of the fixed-M (fixed-N) tridiagonal operator.
//!
//! The eigenvalue belonging to each coupled state is known in closed form, so
//! each eigenvector is extracted independently by shifted inverse iteration.

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::hermite::oscillator_wf;
use crate::kernels::{Context, Group};
use crate::sha::simplified_params;
use crate::table::{CoeffTable, Method, Phase};

/// Relative residual at which inverse iteration stops early.
const TARGET_RESIDUAL: f64 = 1e-11;
/// Relative residual above which extraction is reported as failed.
const ACCEPT_RESIDUAL: f64 = 1e-9;
/// Residual at which further polishing is pointless (a few ulps of ‖T‖).
const POLISHED_RESIDUAL: f64 = 1e-15;
const MAX_ITERATIONS: usize = 20;
/// Components smaller than this fraction of the largest are skipped when fixing the sign.
const SIGN_FLOOR: f64 = 1e-13;

/// Symmetric tridiagonal matrix on the m-grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub grid: Vec<HalfInt>,
}

pub fn build_matrix(ctx: &Context) -> SymTridiag {
    let grid = ctx.grid();
    let diag = grid.iter().map(|m| ctx.f0(m.to_f64())).collect();
    let offdiag = grid[..grid.len() - 1]
        .iter()
        .map(|m| ctx.f1(m.to_f64()).expect("interior grid points have non-negative radicands"))
        .collect();
    SymTridiag { diag, offdiag, grid }
}

impl SymTridiag {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i + 1 < d {
                    acc += self.offdiag[i] * v[i + 1];
                }
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                acc
            })
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let up = self.offdiag.get(i).map_or(0.0, |x| x.abs());
                let down = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                self.diag[i].abs() + up + down
            })
            .fold(0.0, f64::max)
    }

    /// `‖Tv − λv‖₂ / ‖T‖∞`.
    pub fn relative_residual(&self, v: &[f64], lambda: f64) -> f64 {
        let tv = self.apply(v);
        let r: f64 = tv.iter().zip(v).map(|(t, x)| (t - lambda * x).powi(2)).sum::<f64>().sqrt();
        let norm = self.norm_inf();
        if norm > 0.0 {
            r / norm
        } else {
            r
        }
    }

    fn shifted_lu(&self, shift: f64) -> ShiftedLu {
        let n = self.dim();
        let tiny = f64::EPSILON * self.norm_inf().max(f64::MIN_POSITIVE);
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - shift).collect();
        let mut dl = self.offdiag.clone();
        let mut du = self.offdiag.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs().max(dl[i].abs()) < tiny {
                d[i] = tiny;
            }
            if d[i].abs() >= dl[i].abs() {
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].abs() < tiny {
            d[n - 1] = tiny;
        }
        ShiftedLu { d, dl, du, du2, swapped }
    }
}

/// LU factors of `T - σI` with partial pivoting (LAPACK `gttrf` layout).
struct ShiftedLu {
    d: Vec<f64>,
    dl: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm.is_finite() && norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
        true
    } else {
        false
    }
}

fn start_vectors(ctx: &Context, n: u32) -> Vec<Vec<f64>> {
    let grid = ctx.grid();
    let mut starts = Vec::new();
    let centre = match simplified_params(ctx) {
        Ok(p) => {
            let guess: Vec<f64> = grid.iter().map(|m| oscillator_wf(n, p.shape(), m.to_f64())).collect();
            starts.push(guess);
            p.x0
        }
        Err(_) => 0.5 * (ctx.m_min().to_f64() + ctx.m_max().to_f64()),
    };
    let nearest = grid
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1.to_f64() - centre).abs().total_cmp(&(b.1.to_f64() - centre).abs()))
        .map_or(0, |(i, _)| i);
    let mut unit = vec![0.0; grid.len()];
    unit[nearest] = 1.0;
    starts.push(unit);
    // Dense fallback with no special symmetry.
    starts.push((0..grid.len()).map(|i| 1.0 + 0.618_033_988_749_895 * ((i * 7 + 3) % 11) as f64).collect());
    starts
}

fn inverse_iteration(t: &SymTridiag, lambda: f64, start: &[f64]) -> Option<(Vec<f64>, f64)> {
    let lu = t.shifted_lu(lambda * (1.0 + 1e-10) + 1e-300);
    let mut v = start.to_vec();
    if !normalize(&mut v) {
        return None;
    }
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        lu.solve(&mut v);
        if !normalize(&mut v) {
            return None;
        }
        let previous = residual;
        residual = t.relative_residual(&v, lambda);
        // Below target, keep polishing while the residual still halves: the
        // eigenvector error is the residual amplified by ‖T‖/gap, and close
        // eigenvalues need the residual at roundoff level for orthogonality.
        if residual < TARGET_RESIDUAL && (residual > 0.5 * previous || residual < POLISHED_RESIDUAL) {
            break;
        }
    }
    Some((v, residual))
}

/// Fix the overall sign: the outermost significant component at the upper grid
/// edge is `(-1)^n` for SU(2) (Condon–Shortley) and `+1` for the SU(1,1) ψ-phase.
fn fix_sign(group: Group, n: u32, v: &mut [f64]) {
    let peak = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let want = match group {
        Group::Su2 if n % 2 == 1 => -1.0,
        _ => 1.0,
    };
    if let Some(&pivot) = v.iter().rev().find(|x| x.abs() > SIGN_FLOOR * peak) {
        if pivot * want < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Exact CG table for coupled state `n`, as a unit eigenvector of [`build_matrix`].
pub fn exact_cg(ctx: &Context, n: u32) -> Result<CoeffTable> {
    let lambda = ctx.target_eigenvalue(n)?;
    let t = build_matrix(ctx);
    let values = if t.dim() == 1 {
        vec![1.0]
    } else {
        let mut best: Option<(Vec<f64>, f64)> = None;
        for start in start_vectors(ctx, n) {
            if let Some((v, res)) = inverse_iteration(&t, lambda, &start) {
                let better = best.as_ref().is_none_or(|(_, r)| res < *r);
                if better {
                    best = Some((v, res));
                }
                if res < TARGET_RESIDUAL {
                    break;
                }
            }
        }
        match best {
            Some((mut v, res)) if res <= ACCEPT_RESIDUAL => {
                fix_sign(ctx.group(), n, &mut v);
                v
            }
            Some((_, res)) => return Err(Error::Convergence { residual: res, iterations: MAX_ITERATIONS }),
            None => return Err(Error::Convergence { residual: f64::INFINITY, iterations: 0 }),
        }
    };
    Ok(CoeffTable {
        context: ctx.clone(),
        n,
        method: Method::Exact,
        phase: Phase::for_group(ctx.group()),
        grid: t.grid,
        values,
        boundary_spill: None,
    })
}

/// All exact tables of a context, `n = 0..=max_n`.
pub fn exact_cg_all(ctx: &Context) -> Result<Vec<CoeffTable>> {
    (0..=ctx.max_n()).map(|n| exact_cg(ctx, n)).collect()
}

/// `max |⟨v_n, v_n'⟩ − δ_nn'|` over all pairs, including each table with itself.
pub fn gram_residual(tables: &[CoeffTable]) -> Result<f64> {
    let Some(first) = tables.first() else {
        return Ok(0.0);
    };
    if let Some(other) = tables.iter().find(|t| t.context != first.context) {
        return Err(Error::Mismatch(format!("tables from {} and {}", first.context, other.context)));
    }
    let mut worst: f64 = 0.0;
    for (i, a) in tables.iter().enumerate() {
        for b in &tables[i..] {
            let target = if a.n == b.n { 1.0 } else { 0.0 };
            worst = worst.max((a.dot(b) - target).abs());
        }
    }
    Ok(worst)
}
