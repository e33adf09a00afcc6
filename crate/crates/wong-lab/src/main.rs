use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wong_lab::config;
use wong_lab::mollifier::MollifierKind;
use wong_lab::report::{emit_csv, fmt_float};
use wong_lab::selftest;
use wong_lab::suites::run_suites;
use wong_lab::wong::{constant_tradeoff_sweep, smallest_scale_for_target};
use wong_lab::{Error, Grid};

/// Bessel-potential seminorm laboratory: verifies the interpolation
/// inequality ||J_{-s} phi||_q <= eps ||J_{-t} phi||_q + C ||phi||_q with
/// explicit mollifier-built constants, on periodic grids.
#[derive(Parser)]
#[command(name = "wong-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Bump,
    Gaussian,
}

impl From<KindArg> for MollifierKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Bump => MollifierKind::Bump,
            KindArg::Gaussian => MollifierKind::Gaussian,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites from a config file and emit CSV reports.
    Run {
        /// Path to a `key = value` run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for the CSV reports (default `.`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config suite list (comma-separated; `all` or `none`).
        #[arg(long)]
        suites: Option<String>,
    },
    /// Print the (R, eps, C) trade-off table for one order pair.
    Constants {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Comma-separated ascending scales, e.g. `1,2,4,8`.
        #[arg(long = "r-list")]
        r_list: String,
        /// Append the discrete-identity endpoint (eps = 0).
        #[arg(long, default_value_t = false)]
        include_identity: bool,
        /// Report the smallest listed R with eps(R) <= this target.
        #[arg(long)]
        eps_target: Option<f64>,
        /// Samples per axis of the evaluation grid.
        #[arg(long, default_value_t = 16384)]
        grid_size: usize,
        /// Period of the evaluation grid.
        #[arg(long, default_value_t = 40.0)]
        period: f64,
    },
    /// Run the built-in acceptance suite and print one line per criterion.
    Selftest,
}

fn parse_scales(raw: &str) -> Result<Vec<f64>, Error> {
    raw.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| Error::InvalidParameter(
                format!("invalid scale `{t}` in --r-list"),
            ))
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            suites,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|source| Error::Io {
                path: config.clone(),
                source,
            })?;
            let mut cfg = config::parse_config(&text)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(list) = suites {
                let line = format!("suites = {list}");
                cfg.suites = config::parse_config(&line)?.suites;
            }
            cfg.out_dir = out;
            let report = run_suites(&cfg)?;
            let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            emit_csv(&report, &dir)?;
            print!("{report}");
            Ok(report.passed())
        }
        Command::Constants {
            s,
            t,
            kind,
            r_list,
            include_identity,
            eps_target,
            grid_size,
            period,
        } => {
            let grid = Grid::new(1, grid_size, period)?;
            let scales = parse_scales(&r_list)?;
            let points = constant_tradeoff_sweep(
                s,
                t,
                &scales,
                kind.into(),
                grid,
                include_identity,
            )?;
            println!("R,epsilon,C");
            for p in &points {
                println!("{},{},{}", fmt_float(p.r), fmt_float(p.epsilon), fmt_float(p.c));
            }
            if let Some(target) = eps_target {
                match smallest_scale_for_target(&points, target) {
                    Some(p) => println!(
                        "# smallest R with eps <= {target}: R={} (eps={}, C={})",
                        fmt_float(p.r),
                        fmt_float(p.epsilon),
                        fmt_float(p.c)
                    ),
                    None => println!("# no listed R reaches eps <= {target}"),
                }
            }
            Ok(true)
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let mut ok = true;
            for r in &results {
                println!("{r}");
                ok &= r.passed;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
