//! `cg-asym`: exact and asymptotic Clebsch–Gordan tables, comparisons, figure data and spectra.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cg_asym::figures::{figure_preset, write_figure, FigureId, FigureOverrides};
use cg_asym::report::{compare, compute_table, fmt_f64, tables_to_csv};
use cg_asym::spectra::{argmin, su11_spectrum, su2_spectrum, CouplingParams, SpectrumLevel, SpectrumMethod, DEFAULT_LEVEL_CAP};
use cg_asym::{CoeffTable, Context, Error, HalfInt, HermiteArg, Method};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_IO: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "cg-asym", version, about = "Exact and shifted-harmonic asymptotic SU(2)/SU(1,1) Clebsch-Gordan coefficients")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (for `figure`: output directory). Defaults to stdout (`figure`: current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Su2,
    Su11,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient tables for one context, one column per (method, n).
    Table {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Comma-separated coupled-state indices.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        n: Vec<u32>,
        /// Comma-separated methods: exact, sha, simplified.
        #[arg(long, value_delimiter = ',', default_value = "exact")]
        methods: Vec<Method>,
        /// SU(2) only: Hermite argument in the exchange-symmetric form.
        #[arg(long)]
        swapform: bool,
    },
    /// Error metrics of the second method against the first.
    Compare {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Exactly two methods: reference,candidate.
        #[arg(long, value_delimiter = ',', default_value = "exact,sha")]
        methods: Vec<Method>,
        #[arg(long)]
        swapform: bool,
    },
    /// Panel CSVs and a manifest for a figure preset.
    Figure {
        id: FigureId,
        /// Replace the preset's n list.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u32>>,
        /// Replace fig2's total-M list.
        #[arg(long = "m-values", value_delimiter = ',', allow_hyphen_values = true)]
        m_values: Option<Vec<HalfInt>>,
        /// Replace fig5's (k1,k2) list, e.g. `5:50,25:30`.
        #[arg(long = "k-pairs", value_delimiter = ',', value_parser = parse_k_pair)]
        k_pairs: Option<Vec<(f64, f64)>>,
    },
    /// Energy levels of αS0 + χS+S- (or αK0 + χK+K-).
    Spectrum {
        group: GroupArg,
        #[arg(long)]
        s1: Option<HalfInt>,
        #[arg(long)]
        s2: Option<HalfInt>,
        #[arg(long)]
        k1: Option<f64>,
        #[arg(long)]
        k2: Option<f64>,
        /// SU(1,1): enumerate N = 0..=n-max.
        #[arg(long = "n-max")]
        n_max: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        chi: f64,
        /// Comma-separated methods: exact, rpa, sha_limit.
        #[arg(long, value_delimiter = ',', default_value = "exact")]
        methods: Vec<SpectrumMethod>,
        /// Maximum number of enumerated levels.
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        cap: u64,
    },
}

#[derive(Args, Debug)]
struct ContextArgs {
    group: GroupArg,
    #[arg(long)]
    s1: Option<HalfInt>,
    #[arg(long)]
    s2: Option<HalfInt>,
    /// SU(2) total projection.
    #[arg(long = "M", allow_hyphen_values = true)]
    total_m: Option<HalfInt>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    /// SU(1,1) total quanta.
    #[arg(long = "N")]
    big_n: Option<i64>,
}

fn parse_k_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected k1:k2, got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad k `{x}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

/// Errors raised while computing; argument validation maps to usage errors via [`invalid_args`].
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_NUMERIC, message: e.to_string() }
    }
}

/// Rejected command-line values, except the enumeration cap, which is a numeric limit.
fn invalid_args(e: Error) -> Failure {
    match e {
        Error::EnumerationCap { .. } => e.into(),
        other => Failure::usage(other.to_string()),
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("I/O error: {e}") }
    }
}

fn require<T>(value: Option<T>, flag: &str, group: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("{group} requires --{flag}")))
}

fn reject<T>(value: &Option<T>, flag: &str, group: &str) -> Result<(), Failure> {
    match value {
        Some(_) => Err(Failure::usage(format!("--{flag} does not apply to {group}"))),
        None => Ok(()),
    }
}

impl ContextArgs {
    fn build(&self) -> Result<Context, Failure> {
        match self.group {
            GroupArg::Su2 => {
                reject(&self.k1, "k1", "su2")?;
                reject(&self.k2, "k2", "su2")?;
                reject(&self.big_n, "N", "su2")?;
                let s1 = require(self.s1, "s1", "su2")?;
                let s2 = require(self.s2, "s2", "su2")?;
                let m = require(self.total_m, "M", "su2")?;
                Context::su2(s1, s2, m).map_err(invalid_args)
            }
            GroupArg::Su11 => {
                reject(&self.s1, "s1", "su11")?;
                reject(&self.s2, "s2", "su11")?;
                reject(&self.total_m, "M", "su11")?;
                let k1 = require(self.k1, "k1", "su11")?;
                let k2 = require(self.k2, "k2", "su11")?;
                let n = require(self.big_n, "N", "su11")?;
                Context::su11(k1, k2, n).map_err(invalid_args)
            }
        }
    }
}

fn hermite_arg(ctx: &Context, swapform: bool) -> Result<HermiteArg, Failure> {
    match (swapform, ctx) {
        (false, _) => Ok(HermiteArg::Grid),
        (true, Context::Su2(_)) => Ok(HermiteArg::Swapform),
        (true, Context::Su11(_)) => Err(Failure::usage("--swapform applies to su2 only")),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes") + "\n"
}

fn check_n(ctx: &Context, ns: &[u32]) -> Result<(), Failure> {
    if let Some(bad) = ns.iter().find(|&&n| n > ctx.max_n()) {
        return Err(Failure::usage(format!("n={bad} exceeds {} for {ctx}", ctx.max_n())));
    }
    Ok(())
}

fn run_table(cli: &Cli, ctx: &ContextArgs, ns: &[u32], methods: &[Method], swapform: bool) -> Result<(), Failure> {
    let ctx = ctx.build()?;
    check_n(&ctx, ns)?;
    let hermite = hermite_arg(&ctx, swapform)?;
    let mut tables: Vec<CoeffTable> = Vec::new();
    for &method in methods {
        for &n in ns {
            tables.push(compute_table(&ctx, n, method, hermite)?);
        }
    }
    let text = match cli.format {
        Format::Csv => tables_to_csv(&tables)?,
        Format::Json => to_json(&tables),
    };
    emit(cli.out.as_deref(), &text)
}

fn run_compare(cli: &Cli, ctx: &ContextArgs, n: u32, methods: &[Method], swapform: bool) -> Result<(), Failure> {
    let &[reference, candidate] = methods else {
        return Err(Failure::usage(format!("--methods needs exactly two entries, got {}", methods.len())));
    };
    let ctx = ctx.build()?;
    check_n(&ctx, &[n])?;
    let report = compare(&ctx, n, reference, candidate, hermite_arg(&ctx, swapform)?)?;
    let text = match cli.format {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "# max_abs_err={} rms_err={} argmax_m={} boundary_spill={}\n{}",
            fmt_f64(report.max_abs_err),
            fmt_f64(report.rms_err),
            report.argmax_m,
            fmt_f64(report.boundary_spill),
            tables_to_csv(&report.tables)?
        ),
    };
    emit(cli.out.as_deref(), &text)
}

fn run_figure(cli: &Cli, id: FigureId, overrides: FigureOverrides) -> Result<(), Failure> {
    if cli.format == Format::Json {
        return Err(Failure::usage("figure writes CSV panels and a JSON manifest; --format json is not supported"));
    }
    let preset = figure_preset(id, &overrides).map_err(invalid_args)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let manifest = write_figure(&preset, &dir)?;
    for p in &manifest.panels {
        log::info!("{}: {} rows", p.file, p.rows);
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    levels: &'a [SpectrumLevel],
    argmin: Vec<&'a SpectrumLevel>,
}

#[allow(clippy::too_many_arguments)]
fn run_spectrum(
    cli: &Cli,
    group: GroupArg,
    s: (Option<HalfInt>, Option<HalfInt>),
    k: (Option<f64>, Option<f64>),
    n_max: Option<u64>,
    params: CouplingParams,
    methods: &[SpectrumMethod],
    cap: u64,
) -> Result<(), Failure> {
    let mut per_method: Vec<Vec<SpectrumLevel>> = Vec::new();
    for &method in methods {
        per_method.push(match group {
            GroupArg::Su2 => {
                reject(&k.0, "k1", "su2")?;
                reject(&k.1, "k2", "su2")?;
                reject(&n_max, "n-max", "su2")?;
                su2_spectrum(require(s.0, "s1", "su2")?, require(s.1, "s2", "su2")?, params, method, cap).map_err(invalid_args)?
            }
            GroupArg::Su11 => {
                reject(&s.0, "s1", "su11")?;
                reject(&s.1, "s2", "su11")?;
                let (k1, k2) = (require(k.0, "k1", "su11")?, require(k.1, "k2", "su11")?);
                su11_spectrum(k1, k2, require(n_max, "n-max", "su11")?, params, method, cap).map_err(invalid_args)?
            }
        });
    }
    let levels: Vec<SpectrumLevel> = per_method.iter().flatten().cloned().collect();
    let minima: Vec<&SpectrumLevel> = per_method.iter().filter_map(|l| argmin(l)).collect();
    let text = match cli.format {
        Format::Json => to_json(&SpectrumOutput { levels: &levels, argmin: minima }),
        Format::Csv => {
            let mut out = String::from("method,labels,energy,outside_validity\n");
            for l in &levels {
                out.push_str(&format!("{},{},{},{}\n", l.method, l.labels, fmt_f64(l.energy), l.outside_validity.as_deref().unwrap_or("")));
            }
            for l in minima {
                out.push_str(&format!("# argmin method={} {} energy={}\n", l.method, l.labels, fmt_f64(l.energy)));
            }
            out
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Table { ctx, n, methods, swapform } => run_table(cli, ctx, n, methods, *swapform),
        Command::Compare { ctx, n, methods, swapform } => run_compare(cli, ctx, *n, methods, *swapform),
        Command::Figure { id, n, m_values, k_pairs } => {
            let overrides = FigureOverrides { n: n.clone(), m_values: m_values.clone(), k_pairs: k_pairs.clone() };
            run_figure(cli, *id, overrides)
        }
        Command::Spectrum { group, s1, s2, k1, k2, n_max, alpha, chi, methods, cap } => {
            let params = CouplingParams::new(*alpha, *chi).map_err(invalid_args)?;
            run_spectrum(cli, *group, (*s1, *s2), (*k1, *k2), *n_max, params, methods, *cap)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CG_ASYM_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cg-asym: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
