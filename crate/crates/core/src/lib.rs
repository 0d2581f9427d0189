//! Exact and asymptotic SU(2) and SU(1,1) Clebsch–Gordan coefficients.
//!
//! Exact coefficients come from the tridiagonal eigenproblem of Ŝ₊Ŝ₋ (K̂₊K̂₋)
//! on a fixed-M (fixed-N) subspace; asymptotic ones from the shifted harmonic
//! approximation of the same operator.

pub mod error;
pub mod figures;
pub mod half;
pub mod hermite;
pub mod kernels;
pub mod report;
pub mod sha;
pub mod spectra;
pub mod stretched;
pub mod table;
pub mod tridiag;

pub use error::{Error, Result};
pub use figures::{figure_preset, write_figure, FigureId, FigureOverrides, FigurePreset};
pub use half::HalfInt;
pub use kernels::{make_su11_context, make_su2_context, Context, Group, Su11Context, Su2Context};
pub use report::{compare, compute_table, ComparisonReport};
pub use sha::{approx_cg, simplified_params, solve_sha_full, HermiteArg, ShaParams, Variant};
pub use spectra::{argmin, CouplingParams, Labels, SpectrumLevel, SpectrumMethod};
pub use stretched::{stretched_cg_asymptotic, stretched_cg_exact, BigRationalSqrt};
pub use table::{CoeffTable, Method, Phase};
pub use tridiag::{build_matrix, exact_cg, gram_residual, SymTridiag};
