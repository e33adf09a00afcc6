//! Suite driver: runs the selected verification suites for one
//! configuration and assembles the report.
//!
//! Rows of a sweep are independent and are computed in parallel; output
//! ordering is the lexicographic parameter order, independent of the
//! execution schedule.

use rayon::prelude::*;

use crate::bessel::{bessel_potential, kernel_mass, verify_group_law, BesselOrder};
use crate::catalog::build_catalog;
use crate::config::{RunConfig, Suite};
use crate::error::Result;
use crate::grid::{conjugate_exponent, Field};
use crate::mollifier::{make_mollifier, Mollifier};
use crate::quasinorm::{inclusion_witness, unit_ball_sample, ScaleIndices};
use crate::report::{canonical_suite_order, ConstantsRow, QuasinormRow, Report, SuiteSummary};
use crate::wong::{constant_tradeoff_sweep, decompose, wong_constants, SweepRow, WongConstants};

/// Group-law order pairs exercised by the `group-law` suite.
pub const GROUP_LAW_PAIRS: [(f64, f64); 3] = [(1.0, 1.0), (0.7, 1.3), (-1.0, 2.0)];
/// Relative L2 tolerance of the group-law check.
pub const GROUP_LAW_TOL: f64 = 1e-12;
/// Kernel orders exercised by the `kernel-mass` suite.
pub const KERNEL_MASS_ORDERS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
/// Index triplets exercised by the `quasinorm-check` suite.
pub const QUASINORM_TRIPLETS: [(u32, u32, u32); 3] = [(0, 1, 2), (0, 1, 3), (1, 2, 4)];
/// Exponents exercised by the `quasinorm-check` suite.
pub const QUASINORM_EXPONENTS: [f64; 3] = [1.0, 2.0, f64::INFINITY];

/// Relative allowance on the inequality margin (covers rounding).
pub const MARGIN_TOL: f64 = 1e-8;
/// Multiplicative allowance on the part-wise Young bounds.
pub const YOUNG_TOL: f64 = 1e-6;
/// Relative sup tolerance of the decomposition identity.
pub const ADDITIVITY_TOL: f64 = 1e-10;

/// Executes the selected suites. Deterministic for a fixed `(config, seed)`.
pub fn run_suites(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::default();
    for suite in canonical_suite_order(&cfg.suites) {
        let summary = match suite {
            Suite::GroupLaw => group_law_suite(cfg)?,
            Suite::KernelMass => kernel_mass_suite(cfg)?,
            Suite::WongSweep => wong_sweep_suite(cfg, &mut report)?,
            Suite::ConstantsSweep => constants_sweep_suite(cfg, &mut report)?,
            Suite::QuasinormCheck => quasinorm_suite(cfg, &mut report)?,
        };
        report.summaries.push(summary);
    }
    Ok(report)
}

fn group_law_suite(cfg: &RunConfig) -> Result<SuiteSummary> {
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    let mut checks = 0usize;
    for i in 0..cfg.random_count {
        let f = crate::grid::random_band_limited(
            cfg.grid,
            cfg.seed.wrapping_add(i as u64),
            cfg.decay,
        )?;
        for &(z, w) in &GROUP_LAW_PAIRS {
            let err = verify_group_law(&f, BesselOrder::new(z)?, BesselOrder::new(w)?)?;
            checks += 1;
            worst = worst.max(err);
            if err > GROUP_LAW_TOL {
                failed.push(format!("seed={i} (z,w)=({z},{w}) err={err:.3e}"));
            }
        }
    }
    Ok(SuiteSummary {
        suite: Suite::GroupLaw,
        rows: 0,
        checks,
        failures: failed.len(),
        worst: Some(("max rel L2 error".into(), worst)),
        failed,
    })
}

fn kernel_mass_tolerance(s: f64) -> f64 {
    // graded by singularity strength: s < 1 kernels have an integrable
    // singularity that slows band-limited convergence
    if s < 1.0 {
        1e-2
    } else {
        1e-4
    }
}

fn kernel_mass_suite(cfg: &RunConfig) -> Result<SuiteSummary> {
    let mut failed = Vec::new();
    let mut worst = 0.0f64;
    for &s in &KERNEL_MASS_ORDERS {
        let mass = kernel_mass(BesselOrder::new(s)?, cfg.grid)?;
        let err = (mass - 1.0).abs();
        worst = worst.max(err);
        if err > kernel_mass_tolerance(s) {
            failed.push(format!("s={s} |mass-1|={err:.3e}"));
        }
    }
    Ok(SuiteSummary {
        suite: Suite::KernelMass,
        rows: 0,
        checks: KERNEL_MASS_ORDERS.len(),
        failures: failed.len(),
        worst: Some(("max |mass-1|".into(), worst)),
        failed,
    })
}

struct WongCell {
    rows: Vec<SweepRow>,
    failed: Vec<String>,
    checks: usize,
    min_margin: f64,
}

fn wong_cell(
    name: &str,
    phi: &Field,
    (s, t): (f64, f64),
    moll: &Mollifier,
    constants: WongConstants,
    exponents: &[f64],
) -> Result<WongCell> {
    let WongConstants { epsilon, c } = constants;
    let target = bessel_potential(phi, BesselOrder::new(-s)?)?;
    let mid_field = bessel_potential(phi, BesselOrder::new(-t)?)?;
    let (part1, part2) = decompose(phi, s, t, moll)?;

    let mut failed = Vec::new();
    let mut checks = 0usize;
    let mut min_margin = f64::INFINITY;

    let sup = target.max_abs();
    let additivity = if sup == 0.0 {
        0.0
    } else {
        (&(&part1 + &part2) - &target).max_abs() / sup
    };
    checks += 1;
    if additivity > ADDITIVITY_TOL {
        failed.push(format!(
            "fn={name} (s,t)=({s},{t}) R={} additivity={additivity:.3e}",
            moll.scale()
        ));
    }

    let mut rows = Vec::with_capacity(exponents.len());
    for &q in exponents {
        let lhs = target.lp_norm(q)?;
        let mid = mid_field.lp_norm(q)?;
        let base = phi.lp_norm(q)?;
        let margin = epsilon * mid + c * base - lhs;
        let rhs = epsilon * mid + c * base;
        checks += 3;
        let normalized = if rhs > 0.0 { margin / rhs } else { 0.0 };
        min_margin = min_margin.min(normalized);
        if margin < -MARGIN_TOL * rhs {
            failed.push(format!(
                "fn={name} (s,t)=({s},{t}) q={q} R={} margin={margin:.3e}",
                moll.scale()
            ));
        }
        let b1 = part1.lp_norm(q)?;
        if b1 > epsilon * mid * (1.0 + YOUNG_TOL) {
            failed.push(format!(
                "fn={name} (s,t)=({s},{t}) q={q} R={} part1={b1:.6e} > eps*mid={:.6e}",
                moll.scale(),
                epsilon * mid
            ));
        }
        let b2 = part2.lp_norm(q)?;
        if b2 > c * base * (1.0 + YOUNG_TOL) {
            failed.push(format!(
                "fn={name} (s,t)=({s},{t}) q={q} R={} part2={b2:.6e} > C*base={:.6e}",
                moll.scale(),
                c * base
            ));
        }
        rows.push(SweepRow {
            grid: phi.grid(),
            kind: moll.kind(),
            s,
            t,
            p: conjugate_exponent(q),
            q,
            r: moll.scale(),
            epsilon,
            c,
            test_fn: name.to_owned(),
            lhs,
            mid,
            base,
            margin,
        });
    }
    Ok(WongCell {
        rows,
        failed,
        checks,
        min_margin,
    })
}

fn wong_sweep_suite(cfg: &RunConfig, report: &mut Report) -> Result<SuiteSummary> {
    let entries = build_catalog(cfg.grid, &cfg.catalog, cfg.random_count, cfg.decay, cfg.seed)?;
    let mollifiers: Vec<Mollifier> = cfg
        .scales
        .iter()
        .map(|&r| make_mollifier(cfg.kind, r, cfg.grid))
        .collect::<Result<_>>()?;
    // constants depend only on (s, t, R); compute once
    let mut constants = Vec::with_capacity(cfg.orders.len() * mollifiers.len());
    for &(s, t) in &cfg.orders {
        for moll in &mollifiers {
            constants.push(wong_constants(s, t, moll)?);
        }
    }

    let mut cell_params = Vec::new();
    for entry_idx in 0..entries.len() {
        for (order_idx, &(s, t)) in cfg.orders.iter().enumerate() {
            for scale_idx in 0..mollifiers.len() {
                cell_params.push((entry_idx, order_idx, s, t, scale_idx));
            }
        }
    }

    let cells: Vec<WongCell> = cell_params
        .par_iter()
        .map(|&(entry_idx, order_idx, s, t, scale_idx)| {
            let (name, phi) = &entries[entry_idx];
            let constants = constants[order_idx * mollifiers.len() + scale_idx];
            wong_cell(name, phi, (s, t), &mollifiers[scale_idx], constants, &cfg.exponents)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut failed = Vec::new();
    let mut checks = 0usize;
    let mut min_margin = f64::INFINITY;
    for cell in cells {
        rows.extend(cell.rows);
        failed.extend(cell.failed);
        checks += cell.checks;
        min_margin = min_margin.min(cell.min_margin);
    }
    rows.sort_by(|a, b| {
        a.test_fn
            .cmp(&b.test_fn)
            .then(a.s.total_cmp(&b.s))
            .then(a.t.total_cmp(&b.t))
            .then(a.q.total_cmp(&b.q))
            .then(a.r.total_cmp(&b.r))
    });
    let summary = SuiteSummary {
        suite: Suite::WongSweep,
        rows: rows.len(),
        checks,
        failures: failed.len(),
        worst: if min_margin.is_finite() {
            Some(("min margin/rhs".into(), min_margin))
        } else {
            None
        },
        failed,
    };
    report.wong_rows = rows;
    Ok(summary)
}

fn constants_sweep_suite(cfg: &RunConfig, report: &mut Report) -> Result<SuiteSummary> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    let mut checks = 0usize;
    let mut worst_step = f64::NEG_INFINITY;
    for &(s, t) in &cfg.orders {
        let points = constant_tradeoff_sweep(s, t, &cfg.scales, cfg.kind, cfg.grid, false)?;
        for w in points.windows(2) {
            checks += 1;
            let step = (w[1].epsilon - w[0].epsilon) / w[0].epsilon;
            worst_step = worst_step.max(step);
            if w[1].epsilon > w[0].epsilon * (1.0 + 1e-10) {
                failed.push(format!(
                    "(s,t)=({s},{t}) eps({}) -> eps({}) increased: {} -> {}",
                    w[0].r, w[1].r, w[0].epsilon, w[1].epsilon
                ));
            }
        }
        for point in points {
            rows.push(ConstantsRow {
                s,
                t,
                kind: cfg.kind,
                point,
            });
        }
    }
    rows.sort_by(|a, b| {
        a.s.total_cmp(&b.s)
            .then(a.t.total_cmp(&b.t))
            .then(a.point.r.total_cmp(&b.point.r))
    });
    let summary = SuiteSummary {
        suite: Suite::ConstantsSweep,
        rows: rows.len(),
        checks,
        failures: failed.len(),
        worst: if worst_step.is_finite() {
            Some(("max eps step increase".into(), worst_step))
        } else {
            None
        },
        failed,
    };
    report.constants_rows = rows;
    Ok(summary)
}

fn quasinorm_suite(cfg: &RunConfig, report: &mut Report) -> Result<SuiteSummary> {
    let mollifiers: Vec<Mollifier> = cfg
        .scales
        .iter()
        .map(|&r| make_mollifier(cfg.kind, r, cfg.grid))
        .collect::<Result<_>>()?;

    let mut tuples = Vec::new();
    for &(k, l, m) in &QUASINORM_TRIPLETS {
        for &p in &QUASINORM_EXPONENTS {
            for scale_idx in 0..mollifiers.len() {
                for i in 0..cfg.random_count {
                    tuples.push((k, l, m, p, scale_idx, i));
                }
            }
        }
    }

    struct Outcome {
        row: QuasinormRow,
        failed: Vec<String>,
    }

    let outcomes: Vec<Outcome> = tuples
        .par_iter()
        .map(|&(k, l, m, p, scale_idx, i)| {
            let moll = &mollifiers[scale_idx];
            let idx = ScaleIndices::new(k, l, m)?;
            let seed = cfg.seed.wrapping_add(i as u64);
            let sample = unit_ball_sample(seed, p, cfg.grid, cfg.decay)?;
            let w = inclusion_witness(&sample, idx, moll)?;
            let mut failed = Vec::new();
            let tuple = format!(
                "(k,l,m)=({k},{l},{m}) p={p} R={} seed={seed}",
                moll.scale()
            );
            if w.additivity_error > ADDITIVITY_TOL {
                failed.push(format!("{tuple} additivity={:.3e}", w.additivity_error));
            }
            if w.bound1 > w.epsilon * (1.0 + YOUNG_TOL) {
                failed.push(format!("{tuple} bound1={} > eps={}", w.bound1, w.epsilon));
            }
            if w.bound2 > w.c * (1.0 + YOUNG_TOL) {
                failed.push(format!("{tuple} bound2={} > C={}", w.bound2, w.c));
            }
            Ok(Outcome {
                row: QuasinormRow {
                    k,
                    l,
                    m,
                    p,
                    r: moll.scale(),
                    seed,
                    epsilon: w.epsilon,
                    c: w.c,
                    bound1: w.bound1,
                    bound2: w.bound2,
                    additivity_err: w.additivity_error,
                },
                failed,
            })
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut failed = Vec::new();
    let mut worst_excess = f64::NEG_INFINITY;
    for o in outcomes {
        worst_excess = worst_excess
            .max(o.row.bound1 / o.row.epsilon - 1.0)
            .max(o.row.bound2 / o.row.c - 1.0);
        rows.push(o.row);
        failed.extend(o.failed);
    }
    rows.sort_by(|a, b| {
        (a.k, a.l, a.m)
            .cmp(&(b.k, b.l, b.m))
            .then(a.p.total_cmp(&b.p))
            .then(a.r.total_cmp(&b.r))
            .then(a.seed.cmp(&b.seed))
    });
    let checks = rows.len() * 3;
    let summary = SuiteSummary {
        suite: Suite::QuasinormCheck,
        rows: rows.len(),
        checks,
        failures: failed.len(),
        worst: if worst_excess.is_finite() {
            Some(("max bound excess".into(), worst_excess))
        } else {
            None
        },
        failed,
    };
    report.quasinorm_rows = rows;
    Ok(summary)
}
