//! Figure presets: panel data comparing exact and asymptotic coefficients.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::kernels::Context;
use crate::report::{compute_table, fmt_f64, fmt_m};
use crate::sha::HermiteArg;
use crate::table::{Method, Phase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5, FigureId::Fig6];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = FigureId::ALL.iter().position(|x| x == self).expect("listed") + 1;
        write!(f, "fig{i}")
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        FigureId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string() == s.trim())
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1..fig6)"))
    }
}

/// One plotted curve set: a context and a coupled state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Panel {
    /// File stem, e.g. `fig2_M15_n0`.
    pub name: String,
    pub context: Context,
    pub n: u32,
}

/// Preset panels of one figure; every panel carries all three methods.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigurePreset {
    pub id: FigureId,
    pub panels: Vec<Panel>,
    pub methods: Vec<Method>,
}

/// Flags replacing a preset's parameter lists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FigureOverrides {
    pub n: Option<Vec<u32>>,
    /// Total M values (fig2 only).
    pub m_values: Option<Vec<HalfInt>>,
    /// `(k1, k2)` pairs (fig5 only).
    pub k_pairs: Option<Vec<(f64, f64)>>,
}

fn su2(s1: i64, s2: i64, m: HalfInt) -> Result<Context> {
    Context::su2(HalfInt::from_int(s1), HalfInt::from_int(s2), m)
}

fn k_label(k: f64) -> String {
    k.to_string().replace('.', "p")
}

/// Builds the preset for `id`, with optional overrides of its n-, M- or (k1,k2)-lists.
pub fn figure_preset(id: FigureId, overrides: &FigureOverrides) -> Result<FigurePreset> {
    if overrides.m_values.is_some() && id != FigureId::Fig2 {
        return Err(Error::Domain { field: "--m-values", reason: format!("only applies to fig2, not {id}") });
    }
    if overrides.k_pairs.is_some() && id != FigureId::Fig5 {
        return Err(Error::Domain { field: "--k-pairs", reason: format!("only applies to fig5, not {id}") });
    }
    let ns = |default: &[u32]| overrides.n.clone().unwrap_or_else(|| default.to_vec());
    let mut panels = Vec::new();
    let mut push = |name: String, context: Context, n: u32| panels.push(Panel { name, context, n });
    match id {
        FigureId::Fig1 => {
            for n in ns(&[0, 1, 5]) {
                push(format!("fig1_n{n}"), su2(20, 15, HalfInt::ZERO)?, n);
            }
        }
        FigureId::Fig2 => {
            let ms = overrides.m_values.clone().unwrap_or_else(|| [0, 15, 30, 45].map(HalfInt::from_int).to_vec());
            for m in ms {
                for n in ns(&[0]) {
                    push(format!("fig2_M{}_n{n}", fmt_m(m)), su2(60, 40, m)?, n);
                }
            }
        }
        FigureId::Fig3 => {
            for n in ns(&[0, 1, 2]) {
                push(format!("fig3_n{n}"), su2(10, 7, HalfInt::ZERO)?, n);
            }
        }
        FigureId::Fig4 => {
            for n in ns(&[10]) {
                push(format!("fig4_n{n}"), Context::su11(10.0, 17.0, 100)?, n);
            }
        }
        FigureId::Fig5 => {
            let pairs = overrides.k_pairs.clone().unwrap_or_else(|| vec![(5.0, 50.0), (25.0, 30.0), (30.0, 25.0), (50.0, 5.0)]);
            for (k1, k2) in pairs {
                for n in ns(&[0]) {
                    push(format!("fig5_k{}_{}_n{n}", k_label(k1), k_label(k2)), Context::su11(k1, k2, 80)?, n);
                }
            }
        }
        FigureId::Fig6 => {
            for n in ns(&[0, 2]) {
                push(format!("fig6_n{n}"), Context::su11(0.5, 1.5, 10)?, n);
            }
        }
    }
    for p in &panels {
        if p.n > p.context.max_n() {
            return Err(Error::Range { what: "n", reason: format!("n={} exceeds {} for {}", p.n, p.context.max_n(), p.context) });
        }
    }
    Ok(FigurePreset { id, panels, methods: vec![Method::Exact, Method::ShaFull, Method::ShaSimplified] })
}

/// Manifest entry for one written panel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PanelRecord {
    pub file: String,
    pub context: Context,
    pub n: u32,
    pub phase: Phase,
    pub rows: usize,
    /// Per-method failures; the corresponding CSV column is left empty.
    pub failures: Vec<(Method, String)>,
    /// Gaussian mass outside the grid for the full and simplified SHA tables.
    pub boundary_spill: Vec<(Method, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureManifest {
    pub figure: FigureId,
    pub columns: Vec<String>,
    pub panels: Vec<PanelRecord>,
}

/// Renders one panel as CSV with columns `m,exact,sha_full,sha_simplified`.
pub fn render_panel(panel: &Panel, methods: &[Method]) -> (String, PanelRecord) {
    let phase = Phase::for_group(panel.context.group());
    let mut failures = Vec::new();
    let mut spill = Vec::new();
    let columns: Vec<Option<Vec<f64>>> = methods
        .iter()
        .map(|&method| match compute_table(&panel.context, panel.n, method, HermiteArg::Grid) {
            Ok(t) => {
                if let Some(s) = t.boundary_spill {
                    spill.push((method, s));
                }
                Some(t.values)
            }
            Err(e) => {
                log::warn!("{}: {method} unavailable: {e}", panel.name);
                failures.push((method, e.to_string()));
                None
            }
        })
        .collect();
    let mut out = format!("# phase={phase} context={} n={}\nm", panel.context, panel.n);
    for m in methods {
        out.push_str(&format!(",{m}"));
    }
    out.push('\n');
    let grid = panel.context.grid();
    for (i, m) in grid.iter().enumerate() {
        out.push_str(&fmt_m(*m));
        for col in &columns {
            out.push(',');
            if let Some(values) = col {
                out.push_str(&fmt_f64(values[i]));
            }
        }
        out.push('\n');
    }
    let record = PanelRecord {
        file: format!("{}.csv", panel.name),
        context: panel.context.clone(),
        n: panel.n,
        phase,
        rows: grid.len(),
        failures,
        boundary_spill: spill,
    };
    (out, record)
}

/// Writes every panel CSV and `<id>_manifest.json` into `dir` (created if missing).
pub fn write_figure(preset: &FigurePreset, dir: &Path) -> std::io::Result<FigureManifest> {
    std::fs::create_dir_all(dir)?;
    let mut records = Vec::new();
    for panel in &preset.panels {
        let (csv, record) = render_panel(panel, &preset.methods);
        std::fs::write(dir.join(&record.file), csv)?;
        log::info!("wrote {} ({} rows)", record.file, record.rows);
        records.push(record);
    }
    let manifest = FigureManifest {
        figure: preset.id,
        columns: std::iter::once("m".to_string()).chain(preset.methods.iter().map(|m| m.to_string())).collect(),
        panels: records,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    std::fs::write(dir.join(format!("{}_manifest.json", preset.id)), json + "\n")?;
    Ok(manifest)
}
