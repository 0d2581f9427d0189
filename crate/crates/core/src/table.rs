use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::half::HalfInt;
use crate::kernels::{Context, Group};

/// How a coefficient table was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    ShaFull,
    ShaSimplified,
}

impl Method {
    /// Short name used on the command line and in `table` column headers.
    pub fn cli_name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ShaFull => "sha",
            Method::ShaSimplified => "simplified",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::ShaFull => "sha_full",
            Method::ShaSimplified => "sha_simplified",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "exact" => Ok(Method::Exact),
            "sha" | "sha_full" | "full" => Ok(Method::ShaFull),
            "simplified" | "sha_simplified" => Ok(Method::ShaSimplified),
            other => Err(format!("unknown method `{other}` (expected exact, sha or simplified)")),
        }
    }
}

/// Sign convention of the stored values.
///
/// SU(2) tables hold Condon–Shortley CG coefficients. SU(1,1) tables hold
/// `ψ(m) = (-1)^(N+m)` times the CG coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    CondonShortley,
    PsiPhase,
}

impl Phase {
    pub fn for_group(group: Group) -> Self {
        match group {
            Group::Su2 => Phase::CondonShortley,
            Group::Su11 => Phase::PsiPhase,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::CondonShortley => "condon_shortley",
            Phase::PsiPhase => "psi_phase",
        })
    }
}

/// CG coefficients for one coupled state `n`, indexed by the context grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoeffTable {
    pub context: Context,
    pub n: u32,
    pub method: Method,
    pub phase: Phase,
    pub grid: Vec<HalfInt>,
    pub values: Vec<f64>,
    /// Mass of the ground-state Gaussian lying outside `[m_min, m_max]`; set for SHA tables.
    pub boundary_spill: Option<f64>,
}

impl CoeffTable {
    pub fn value_at(&self, m: HalfInt) -> Option<f64> {
        let i = (m - self.grid[0]).twice();
        if i < 0 || i % 2 != 0 {
            return None;
        }
        self.values.get((i / 2) as usize).copied()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn dot(&self, other: &CoeffTable) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum()
    }
}
