//! Deterministic CSV reports and the per-suite pass/fail summary.
//!
//! Floats are written as shortest round-trip decimals (`Display` for `f64`),
//! infinities as `inf`, so identical runs produce byte-identical files and
//! parsing a file back recovers the exact values.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::config::Suite;
use crate::error::{Error, Result};
use crate::wong::{SweepRow, TradeoffPoint};
use crate::mollifier::MollifierKind;

pub const WONG_HEADER: &str = "suite,s,t,p,q,n,N,T,mollifier,R,epsilon,C,test_fn,lhs,mid,base,margin";
pub const QUASINORM_HEADER: &str = "suite,k,l,m,p,R,seed,epsilon,C,bound1,bound2,additivity_err";
pub const CONSTANTS_HEADER: &str = "suite,s,t,mollifier,R,epsilon,C";

/// One inclusion-witness record.
#[derive(Debug, Clone)]
pub struct QuasinormRow {
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub p: f64,
    pub r: f64,
    pub seed: u64,
    pub epsilon: f64,
    pub c: f64,
    pub bound1: f64,
    pub bound2: f64,
    pub additivity_err: f64,
}

/// One `(R, eps, C)` record of a constants sweep.
#[derive(Debug, Clone)]
pub struct ConstantsRow {
    pub s: f64,
    pub t: f64,
    pub kind: MollifierKind,
    pub point: TradeoffPoint,
}

/// Outcome of one suite: row and check counts, failures with their parameter
/// tuples, and the most binding check value.
#[derive(Debug, Clone)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub rows: usize,
    pub checks: usize,
    pub failures: usize,
    /// Description and value of the worst observed margin.
    pub worst: Option<(String, f64)>,
    /// Parameter tuples of failed checks.
    pub failed: Vec<String>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Full result of a run: rows per schema plus per-suite summaries.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub wong_rows: Vec<SweepRow>,
    pub quasinorm_rows: Vec<QuasinormRow>,
    pub constants_rows: Vec<ConstantsRow>,
    pub summaries: Vec<SuiteSummary>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summaries.iter().all(SuiteSummary::passed)
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.summaries.is_empty() {
            return writeln!(f, "no suites selected");
        }
        for s in &self.summaries {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            write!(
                f,
                "{status} {:<16} rows={:<6} checks={:<6} failures={}",
                s.suite.label(),
                s.rows,
                s.checks,
                s.failures
            )?;
            if let Some((desc, value)) = &s.worst {
                write!(f, "  worst {desc} = {value:.3e}")?;
            }
            writeln!(f)?;
            for tuple in &s.failed {
                writeln!(f, "    failed: {tuple}")?;
            }
        }
        Ok(())
    }
}

/// Shortest round-trip decimal; infinities rendered as `inf`.
pub fn fmt_float(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_owned()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_owned()
    } else {
        format!("{v}")
    }
}

fn wong_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(WONG_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "wong-sweep,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_float(r.s),
            fmt_float(r.t),
            fmt_float(r.p),
            fmt_float(r.q),
            r.grid.dim(),
            r.grid.size(),
            fmt_float(r.grid.period()),
            r.kind.label(),
            fmt_float(r.r),
            fmt_float(r.epsilon),
            fmt_float(r.c),
            r.test_fn,
            fmt_float(r.lhs),
            fmt_float(r.mid),
            fmt_float(r.base),
            fmt_float(r.margin),
        );
    }
    out
}

fn quasinorm_csv(rows: &[QuasinormRow]) -> String {
    let mut out = String::with_capacity(48 * (rows.len() + 1));
    out.push_str(QUASINORM_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "quasinorm-check,{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            r.l,
            r.m,
            fmt_float(r.p),
            fmt_float(r.r),
            r.seed,
            fmt_float(r.epsilon),
            fmt_float(r.c),
            fmt_float(r.bound1),
            fmt_float(r.bound2),
            fmt_float(r.additivity_err),
        );
    }
    out
}

fn constants_csv(rows: &[ConstantsRow]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(CONSTANTS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "constants-sweep,{},{},{},{},{},{}",
            fmt_float(r.s),
            fmt_float(r.t),
            r.kind.label(),
            fmt_float(r.point.r),
            fmt_float(r.point.epsilon),
            fmt_float(r.point.c),
        );
    }
    out
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    let io_err = |source| Error::Io {
        path: path.clone(),
        source,
    };
    let mut file = std::fs::File::create(&path).map_err(io_err)?;
    file.write_all(contents.as_bytes()).map_err(io_err)?;
    Ok(path)
}

/// Writes `wong_sweep.csv`, `quasinorm.csv` and `constants.csv` into `dir`
/// (header-only when a section is empty). Returns the written paths.
pub fn emit_csv(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    Ok(vec![
        write_file(dir, "wong_sweep.csv", &wong_csv(&report.wong_rows))?,
        write_file(dir, "quasinorm.csv", &quasinorm_csv(&report.quasinorm_rows))?,
        write_file(dir, "constants.csv", &constants_csv(&report.constants_rows))?,
    ])
}

/// Suites that were requested but are not yet reflected in a summary; used
/// by the driver to keep summary order canonical.
pub fn canonical_suite_order(selected: &BTreeSet<Suite>) -> Vec<Suite> {
    Suite::ALL
        .into_iter()
        .filter(|s| selected.contains(s))
        .collect()
}
