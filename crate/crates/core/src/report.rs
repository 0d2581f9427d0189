//! Exact-vs-asymptotic comparisons and the CSV table format.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::kernels::Context;
use crate::sha::{sha_table, HermiteArg, Variant};
use crate::table::{CoeffTable, Method};
use crate::tridiag::exact_cg;

/// Computes one coefficient table by the given method.
pub fn compute_table(ctx: &Context, n: u32, method: Method, hermite_arg: HermiteArg) -> Result<CoeffTable> {
    match method {
        Method::Exact => exact_cg(ctx, n),
        Method::ShaFull => sha_table(ctx, n, Variant::Full, hermite_arg),
        Method::ShaSimplified => sha_table(ctx, n, Variant::Simplified, hermite_arg),
    }
}

/// Pointwise error metrics between two tables of the same context and `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub context: Context,
    pub n: u32,
    pub tables: Vec<CoeffTable>,
    pub max_abs_err: f64,
    pub rms_err: f64,
    pub argmax_m: HalfInt,
    /// Gaussian mass outside the grid for the SHA member of the pair (0 when both are exact).
    pub boundary_spill: f64,
}

impl ComparisonReport {
    pub fn from_tables(reference: CoeffTable, candidate: CoeffTable) -> Result<Self> {
        if reference.context != candidate.context || reference.n != candidate.n {
            return Err(Error::Mismatch(format!(
                "cannot compare {} n={} with {} n={}",
                reference.context, reference.n, candidate.context, candidate.n
            )));
        }
        let mut max_abs_err = 0.0;
        let mut argmax = 0;
        let mut sum_sq = 0.0;
        for (i, (a, b)) in reference.values.iter().zip(&candidate.values).enumerate() {
            let err = (a - b).abs();
            sum_sq += err * err;
            if err > max_abs_err {
                max_abs_err = err;
                argmax = i;
            }
        }
        let rms_err = (sum_sq / reference.values.len() as f64).sqrt();
        let boundary_spill = candidate.boundary_spill.or(reference.boundary_spill).unwrap_or(0.0);
        Ok(ComparisonReport {
            context: reference.context.clone(),
            n: reference.n,
            argmax_m: reference.grid[argmax],
            tables: vec![reference, candidate],
            max_abs_err,
            rms_err,
            boundary_spill,
        })
    }
}

/// Compares `candidate` against `reference` for one coupled state.
pub fn compare(
    ctx: &Context,
    n: u32,
    reference: Method,
    candidate: Method,
    hermite_arg: HermiteArg,
) -> Result<ComparisonReport> {
    ComparisonReport::from_tables(compute_table(ctx, n, reference, hermite_arg)?, compute_table(ctx, n, candidate, hermite_arg)?)
}

/// Shortest decimal that round-trips to the same binary64.
pub fn fmt_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

/// Grid label: integers as `-3`, half-integers as `-2.5`.
pub fn fmt_m(m: HalfInt) -> String {
    // Half-integers are exact in binary64 and `Display` never uses exponents.
    m.to_f64().to_string()
}

/// Renders tables of one context as CSV: a `# phase=… context=…` line, a header
/// `m,<method>_<n>,…` and one row per grid point.
pub fn tables_to_csv(tables: &[CoeffTable]) -> Result<String> {
    let Some(first) = tables.first() else {
        return Err(Error::Mismatch("no tables to write".into()));
    };
    if let Some(other) = tables.iter().find(|t| t.context != first.context) {
        return Err(Error::Mismatch(format!("tables from {} and {}", first.context, other.context)));
    }
    let mut out = format!("# phase={} context={}\nm", first.phase, first.context);
    for t in tables {
        out.push_str(&format!(",{}_{}", t.method.cli_name(), t.n));
    }
    out.push('\n');
    for (i, m) in first.grid.iter().enumerate() {
        out.push_str(&fmt_m(*m));
        for t in tables {
            out.push(',');
            out.push_str(&fmt_f64(t.values[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parsed CSV: comment lines, header names, the m column and one value column per header entry.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedCsv {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub m: Vec<f64>,
    /// `columns[j][i]` is row `i` of header entry `j+1`; empty cells parse as `None`.
    pub columns: Vec<Vec<Option<f64>>>,
}

/// Inverse of the CSV emitters in this crate.
pub fn parse_csv(text: &str) -> Result<ParsedCsv> {
    let bad = |line: usize, why: &str| Error::Mismatch(format!("CSV line {line}: {why}"));
    let mut comments = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut m = Vec::new();
    let mut columns: Vec<Vec<Option<f64>>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match &header {
            None => {
                columns = vec![Vec::new(); fields.len() - 1];
                header = Some(fields.iter().map(|s| s.to_string()).collect());
            }
            Some(h) => {
                if fields.len() != h.len() {
                    return Err(bad(i + 1, "wrong field count"));
                }
                m.push(fields[0].parse().map_err(|_| bad(i + 1, "bad m"))?);
                for (col, f) in columns.iter_mut().zip(&fields[1..]) {
                    col.push(if f.is_empty() { None } else { Some(f.parse().map_err(|_| bad(i + 1, "bad value"))?) });
                }
            }
        }
    }
    Ok(ParsedCsv { comments, header: header.ok_or_else(|| bad(0, "missing header"))?, m, columns })
}
