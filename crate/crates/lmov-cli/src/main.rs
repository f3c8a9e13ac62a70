//! `lmov`: exact invariant tables, BPS extraction, extremal values, and
//! verification suites for the framed unknot, with deterministic
//! json/csv/pretty output. Exit codes: 0 success, 1 verification failure,
//! 2 usage error, 3 internal theorem violation.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use lmov_cli::format::{
    col, render_reports, render_table, Cell, Column, Field, Format, Meta, Table,
};
use lmov_cli::verify::{run_suite, VerifyReport, SUITE_NAMES};
use lmov_core::invariant::{
    bps_table_m, gks_extremal, n_ml, n_pair, resolve_orientation, ExtremalSide,
};

#[derive(Parser)]
#[command(
    name = "lmov",
    version,
    about = "Exact LMOV/BPS invariants of the framed unknot: tables, BPS extraction, extremal values, verification"
)]
struct Cli {
    /// Output encoding
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Pretty)]
    format: OutFormat,
    /// Extend verification ranges with reproducible sampling; echoed in metadata
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for cell evaluation (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Pretty,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
            OutFormat::Pretty => Format::Pretty,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Genus-0 one-row invariants n[m,l](tau)
    Genus0 {
        #[arg(long, allow_hyphen_values = true)]
        tau: i64,
        #[arg(long, default_value_t = 8)]
        max_m: u64,
        /// Cap on l (default: l runs to m)
        #[arg(long)]
        max_l: Option<u64>,
    },
    /// Genus-0 two-row invariants n[(m1,m2)](tau)
    Pair {
        #[arg(long, allow_hyphen_values = true)]
        tau: i64,
        #[arg(long, default_value_t = 6)]
        max_m: u64,
    },
    /// Full (g, Q) coefficient table of z^2 g_m for one m
    Bps {
        #[arg(long, allow_hyphen_values = true)]
        tau: i64,
        #[arg(long)]
        m: u64,
    },
    /// Extremal twist-knot invariants (bottom and top) for r = 1..=max_r
    Extremal {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, default_value_t = 20)]
        max_r: u64,
    },
    /// Run verification suites ("all" or a single suite by name)
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug)]
enum AppError {
    Usage(String),
    Theorem(String),
}

fn orientation_string() -> Result<String, AppError> {
    resolve_orientation()
        .map(|o| o.to_string())
        .map_err(|e| AppError::Theorem(e.to_string()))
}

fn build_genus0(tau: i64, max_m: u64, max_l: Option<u64>) -> Vec<Vec<Field>> {
    let mut cells = Vec::new();
    for m in 1..=max_m {
        for l in 0..=max_l.map_or(m, |cap| cap.min(m)) {
            cells.push((m, l));
        }
    }
    cells
        .par_iter()
        .map(|&(m, l)| {
            vec![
                Field::Int(m as i64),
                Field::Int(l as i64),
                Field::Cell(Cell::from_rational(&n_ml(m, l, tau))),
            ]
        })
        .collect()
}

fn build_pair(tau: i64, max_m: u64) -> Vec<Vec<Field>> {
    let mut cells = Vec::new();
    for m1 in 1..=max_m {
        for m2 in 1..=m1 {
            cells.push((m1, m2));
        }
    }
    cells
        .par_iter()
        .map(|&(m1, m2)| {
            vec![
                Field::Int(m1 as i64),
                Field::Int(m2 as i64),
                Field::Cell(Cell::from_rational(&n_pair(m1, m2, tau))),
            ]
        })
        .collect()
}

fn build_bps(tau: i64, m: u64) -> Result<Vec<Vec<Field>>, AppError> {
    let table = bps_table_m(m, tau).map_err(|e| AppError::Theorem(e.to_string()))?;
    Ok(table
        .terms()
        .map(|(&(g, a2), c)| {
            vec![
                Field::Int(m as i64),
                Field::Int(g as i64),
                Field::Half(a2),
                Field::Cell(Cell::from_rational(c)),
            ]
        })
        .collect())
}

fn build_extremal(p: i64, max_r: u64) -> Result<Vec<Vec<Field>>, AppError> {
    let rows: Vec<Result<Vec<Field>, AppError>> = (1..=max_r)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&r| {
            let mut row = vec![Field::Int(p), Field::Int(r as i64)];
            for side in [ExtremalSide::Bottom, ExtremalSide::Top] {
                let v = gks_extremal(p, r, side)
                    .map_err(|e| AppError::Usage(e.to_string()))?;
                row.push(Field::Cell(Cell::from_rational(&v)));
            }
            Ok(row)
        })
        .collect();
    rows.into_iter().collect()
}

fn positive(name: &str, v: u64) -> Result<(), AppError> {
    if v == 0 {
        Err(AppError::Usage(format!("--{name} must be at least 1")))
    } else {
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<(String, u8), AppError> {
    let fmt: Format = cli.format.into();
    match &cli.command {
        Cmd::Genus0 { tau, max_m, max_l } => {
            positive("max-m", *max_m)?;
            let table = Table {
                meta: Meta {
                    command: "genus0",
                    tau: Some(*tau),
                    orientation: Some(orientation_string()?),
                    seed: cli.seed,
                },
                columns: vec![col("m"), col("l"), col("n")],
                rows: build_genus0(*tau, *max_m, *max_l),
            };
            Ok((render_table(&table, fmt), 0))
        }
        Cmd::Pair { tau, max_m } => {
            positive("max-m", *max_m)?;
            let table = Table {
                meta: Meta {
                    command: "pair",
                    tau: Some(*tau),
                    orientation: Some(orientation_string()?),
                    seed: cli.seed,
                },
                columns: vec![col("m1"), col("m2"), col("n")],
                rows: build_pair(*tau, *max_m),
            };
            Ok((render_table(&table, fmt), 0))
        }
        Cmd::Bps { tau, m } => {
            positive("m", *m)?;
            let table = Table {
                meta: Meta {
                    command: "bps",
                    tau: Some(*tau),
                    orientation: Some(orientation_string()?),
                    seed: cli.seed,
                },
                columns: vec![
                    col("m"),
                    col("g"),
                    Column { key: "two_q", pretty: "Q" },
                    col("n"),
                ],
                rows: build_bps(*tau, *m)?,
            };
            Ok((render_table(&table, fmt), 0))
        }
        Cmd::Extremal { p, max_r } => {
            positive("max-r", *max_r)?;
            if *p == 0 || *p == 1 {
                return Err(AppError::Usage(format!(
                    "--p {p} is outside both regimes (need p <= -1 or p >= 2)"
                )));
            }
            let table = Table {
                meta: Meta {
                    command: "extremal",
                    tau: None,
                    orientation: None,
                    seed: cli.seed,
                },
                columns: vec![col("p"), col("r"), col("bottom"), col("top")],
                rows: build_extremal(*p, *max_r)?,
            };
            Ok((render_table(&table, fmt), 0))
        }
        Cmd::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" {
                SUITE_NAMES.to_vec()
            } else if SUITE_NAMES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(AppError::Usage(format!(
                    "unknown suite {suite:?}; available: all, {}",
                    SUITE_NAMES.join(", ")
                )));
            };
            let mut reports: Vec<VerifyReport> = Vec::new();
            for name in names {
                let t = Instant::now();
                let report = run_suite(name, cli.seed).expect("registered suite");
                eprintln!(
                    "# suite {name}: {} cases, {} skipped, {} failures, {:.2?}",
                    report.cases_run,
                    report.skipped,
                    report.failures.len(),
                    t.elapsed()
                );
                reports.push(report);
            }
            let meta = Meta {
                command: "verify",
                tau: None,
                orientation: None,
                seed: cli.seed,
            };
            let code = if reports.iter().all(VerifyReport::passed) {
                0
            } else {
                1
            };
            Ok((render_reports(&meta, &reports, fmt), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("usage error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // Ignore the error from a pool that is already initialized.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let started = Instant::now();
    let code = match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Theorem(msg)) => {
            eprintln!("theorem violation: {msg}");
            ExitCode::from(3)
        }
    };
    eprintln!("# elapsed: {:.2?}", started.elapsed());
    code
}
