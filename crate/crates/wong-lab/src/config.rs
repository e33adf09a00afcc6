//! Flat `key = value` run configuration.
//!
//! One key per line, `#` starts a comment, lists are comma-separated and
//! order pairs are written `(s,t)`. Unknown keys are rejected. Keys:
//! `n, N, T, orders, q, mollifier, R, catalog, random_count, decay, seed,
//! suites`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use crate::catalog::CatalogSelection;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mollifier::MollifierKind;

/// Verification suites the driver can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    GroupLaw,
    KernelMass,
    WongSweep,
    ConstantsSweep,
    QuasinormCheck,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::GroupLaw,
        Suite::KernelMass,
        Suite::WongSweep,
        Suite::ConstantsSweep,
        Suite::QuasinormCheck,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Suite::GroupLaw => "group-law",
            Suite::KernelMass => "kernel-mass",
            Suite::WongSweep => "wong-sweep",
            Suite::ConstantsSweep => "constants-sweep",
            Suite::QuasinormCheck => "quasinorm-check",
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A validated run configuration. The output directory comes from the CLI,
/// not the config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: Grid,
    /// Order pairs, each `0 < s < t`.
    pub orders: Vec<(f64, f64)>,
    /// Norm exponents in `[1, inf]`.
    pub exponents: Vec<f64>,
    pub kind: MollifierKind,
    /// Ascending positive mollifier scales.
    pub scales: Vec<f64>,
    pub catalog: CatalogSelection,
    pub random_count: u32,
    pub decay: f64,
    pub seed: u64,
    pub suites: BTreeSet<Suite>,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: Grid::new(1, 4096, 40.0).expect("default grid is valid"),
            orders: vec![(0.5, 1.0), (1.0, 2.0), (1.0, 3.0)],
            exponents: vec![1.0, 2.0, 4.0, f64::INFINITY],
            kind: MollifierKind::Bump,
            scales: vec![2.0, 8.0, 16.0],
            catalog: CatalogSelection::All,
            random_count: 5,
            decay: 2.0,
            seed: 0,
            suites: Suite::ALL.into_iter().collect(),
            out_dir: None,
        }
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_number<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse::<T>()
        .map_err(|_| config_err(line, format!("invalid value `{raw}` for key `{key}`")))
}

fn parse_exponent_token(line: usize, raw: &str) -> Result<f64> {
    let token = raw.trim();
    let value = if token == "inf" {
        f64::INFINITY
    } else {
        parse_number::<f64>(line, "q", token)?
    };
    if value.is_nan() || value < 1.0 {
        return Err(config_err(line, format!("q requires 1 <= q <= inf, got {token}")));
    }
    Ok(value)
}

fn parse_order_pairs(line: usize, raw: &str) -> Result<Vec<(f64, f64)>> {
    let compact: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pairs = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| config_err(line, format!("orders expects `(s,t)` pairs, got `{raw}`")))?;
        let close = open
            .find(')')
            .ok_or_else(|| config_err(line, "unclosed `(` in orders"))?;
        let body = &open[..close];
        let (s_raw, t_raw) = body
            .split_once(',')
            .ok_or_else(|| config_err(line, format!("order pair `({body})` needs two entries")))?;
        let s: f64 = parse_number(line, "orders", s_raw)?;
        let t: f64 = parse_number(line, "orders", t_raw)?;
        if !t.is_finite() || s.is_nan() || s <= 0.0 || s >= t {
            return Err(config_err(
                line,
                format!("orders requires 0 < s < t, got ({s},{t})"),
            ));
        }
        pairs.push((s, t));
        rest = &open[close + 1..];
        rest = rest.strip_prefix(',').unwrap_or(rest);
    }
    if pairs.is_empty() {
        return Err(config_err(line, "orders list is empty"));
    }
    Ok(pairs)
}

fn parse_suites(line: usize, raw: &str) -> Result<BTreeSet<Suite>> {
    let trimmed = raw.trim();
    if trimmed.is_empty() || trimmed == "none" {
        return Ok(BTreeSet::new());
    }
    if trimmed == "all" {
        return Ok(Suite::ALL.into_iter().collect());
    }
    let mut out = BTreeSet::new();
    for token in trimmed.split(',') {
        let token = token.trim();
        let suite = Suite::ALL
            .iter()
            .find(|s| s.label() == token)
            .ok_or_else(|| config_err(line, format!("unknown suite `{token}`")))?;
        out.insert(*suite);
    }
    Ok(out)
}

fn parse_catalog(line: usize, raw: &str) -> Result<CatalogSelection> {
    let trimmed = raw.trim();
    match trimmed {
        "all" => Ok(CatalogSelection::All),
        "none" | "" => Ok(CatalogSelection::None),
        _ => Ok(CatalogSelection::Named(
            trimmed.split(',').map(|t| t.trim().to_owned()).collect(),
        )),
    }
    .and_then(|sel| {
        // surface unknown names as config errors with the line number
        if let CatalogSelection::Named(list) = &sel {
            for name in list {
                if !crate::catalog::NAMED_FUNCTIONS.contains(&name.as_str()) {
                    return Err(config_err(line, format!("unknown catalog function `{name}`")));
                }
            }
        }
        Ok(sel)
    })
}

/// Parses and validates a run configuration; every omitted key takes its
/// documented default.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen = BTreeSet::new();
    let (mut dim, mut size, mut period) = (cfg.grid.dim(), cfg.grid.size(), cfg.grid.period());
    let mut grid_line = 0usize;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected `key = value`, got `{stripped}`")))?;
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_owned()) {
            return Err(config_err(line, format!("duplicate key `{key}`")));
        }
        match key {
            "n" => {
                dim = parse_number(line, "n", value)?;
                grid_line = line;
            }
            "N" => {
                size = parse_number(line, "N", value)?;
                grid_line = line;
            }
            "T" => {
                period = parse_number(line, "T", value)?;
                grid_line = line;
            }
            "orders" => cfg.orders = parse_order_pairs(line, value)?,
            "q" => {
                let mut exps = Vec::new();
                for token in value.split(',') {
                    exps.push(parse_exponent_token(line, token)?);
                }
                if exps.is_empty() {
                    return Err(config_err(line, "q list is empty"));
                }
                cfg.exponents = exps;
            }
            "mollifier" => {
                cfg.kind = value
                    .parse::<MollifierKind>()
                    .map_err(|e| config_err(line, e))?;
            }
            "R" => {
                let mut scales = Vec::new();
                for token in value.split(',') {
                    let r: f64 = parse_number(line, "R", token)?;
                    if !r.is_finite() || r <= 0.0 {
                        return Err(config_err(line, format!("R requires positive scales, got {r}")));
                    }
                    scales.push(r);
                }
                if scales.is_empty() {
                    return Err(config_err(line, "R list is empty"));
                }
                if scales.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(config_err(line, "R list must be strictly ascending"));
                }
                cfg.scales = scales;
            }
            "catalog" => cfg.catalog = parse_catalog(line, value)?,
            "random_count" => cfg.random_count = parse_number(line, "random_count", value)?,
            "decay" => {
                let a: f64 = parse_number(line, "decay", value)?;
                if a.is_nan() || a <= 0.0 {
                    return Err(config_err(line, format!("decay requires a > 0, got {a}")));
                }
                cfg.decay = a;
            }
            "seed" => cfg.seed = parse_number(line, "seed", value)?,
            "suites" => cfg.suites = parse_suites(line, value)?,
            _ => return Err(config_err(line, format!("unknown key `{key}`"))),
        }
    }

    cfg.grid = Grid::new(dim, size, period)
        .map_err(|e| config_err(grid_line, e.to_string()))?;
    Ok(cfg)
}
