//! Batch driver for the XXZ min-entropy pipelines.
//!
//! Subcommands map one-to-one onto the library pipelines:
//! `scan-ed` tabulates min-entropies from exact diagonalization, `xx-diff`
//! evaluates the free-fermion odd/even entropy differences, `fig2c` extracts
//! the log-term coefficient across the critical interval with both backends,
//! and `verify` runs the named invariant suite.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 solver or
//! sizing error.

mod cache;
mod grids;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use vertex_oddity::ed::{entropy_scan_with, ScanRow, Sign, SolverOptions};
use vertex_oddity::error::Error;
use vertex_oddity::exact::{rs_asymptotic_entropy, rs_log_pmax};
use vertex_oddity::freefermion::{w_log_det, xx_entropy_difference};
use vertex_oddity::imps::imps_min_entropy_odd;
use vertex_oddity::scaling::{alpha_from_delta, fit_scaling};
use vertex_oddity::verify::run_checks;
use vertex_oddity::Sector;

use cache::Cache;
use grids::{parse_delta_grid, parse_l_list, parse_n_range};
use output::{Cell, Format, Table};

/// A CLI failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain(_) | Error::Contract(_) | Error::Fit(_) => 2,
            Error::InvariantViolation(_) => 1,
            Error::Sizing(_) | Error::SolverNotConverged { .. } | Error::Singular(_) => 3,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "vertex-oddity",
    version,
    about = "Min-entropy scaling of the periodic XXZ chain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Solver residual tolerance override
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Min-entropy scan over chain lengths via exact diagonalization
    ScanEd {
        /// Anisotropy: a value or a:b:n grid
        #[arg(long)]
        delta: String,
        /// Chain lengths: a value or a:b:step
        #[arg(long = "L")]
        l: String,
        /// Global sign of the bond sum
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Free-fermion odd/even entropy differences over a particle range
    XxDiff {
        /// Particle numbers: a value or a:b
        #[arg(long = "N")]
        n: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Log-term coefficient b(delta) from ED and ansatz fits
    Fig2c {
        /// Anisotropy grid (default: the 20-point grid over (-1, 1])
        #[arg(long, default_value = "-0.9:1:20")]
        delta: String,
        /// Odd chain lengths for the fits
        #[arg(long = "L", default_value = "7:19:2")]
        l: String,
        /// Which backends to evaluate
        #[arg(long, value_enum, default_value = "both")]
        backend: BackendArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the invariant/oracle check suite and print a pass/fail table
    Verify {
        /// Only run checks whose name contains this substring
        #[arg(long)]
        filter: Option<String>,
        /// Test hook: append a synthetic failing check
        #[arg(long, hide = true)]
        inject_failure: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact delta = 1/2 reference values (odd rings)
    RsTable {
        /// Particle numbers: a value or a:b
        #[arg(long = "N", default_value = "1:10")]
        n: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, clap::ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, clap::ValueEnum)]
enum BackendArg {
    Ed,
    Imps,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::ScanEd {
            delta,
            l,
            sign,
            common,
        } => cmd_scan_ed(&delta, &l, sign, &common),
        Command::XxDiff { n, common } => cmd_xx_diff(&n, &common),
        Command::Fig2c {
            delta,
            l,
            backend,
            common,
        } => cmd_fig2c(&delta, &l, backend, &common),
        Command::Verify {
            filter,
            inject_failure,
            common,
        } => cmd_verify(filter.as_deref(), inject_failure, &common),
        Command::RsTable { n, common } => cmd_rs_table(&n, &common),
    }
}

fn init_pool(jobs: Option<usize>) -> Result<(), CliError> {
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn solver_options(tol: Option<f64>) -> SolverOptions {
    let mut opts = SolverOptions::default();
    if let Some(t) = tol {
        opts.residual_tol = t;
    }
    opts
}

#[derive(Serialize)]
struct ScanConfig {
    command: &'static str,
    deltas: Vec<f64>,
    l_list: Vec<usize>,
    sign: String,
    tol: f64,
    format: String,
}

fn cmd_scan_ed(
    delta_spec: &str,
    l_spec: &str,
    sign: SignArg,
    common: &CommonArgs,
) -> Result<u8, CliError> {
    init_pool(common.jobs)?;
    let deltas = parse_delta_grid(delta_spec)?;
    let l_list = parse_l_list(l_spec)?;
    let opts = solver_options(common.tol);
    let cache = Cache::from_env();
    let sign_core: Sign = sign.into();

    let config = ScanConfig {
        command: "scan-ed",
        deltas: deltas.clone(),
        l_list: l_list.clone(),
        sign: format!("{sign:?}").to_lowercase(),
        tol: opts.residual_tol,
        format: format!("{:?}", common.format).to_lowercase(),
    };

    let mut table = Table::new(vec![
        "L",
        "N_up",
        "delta",
        "energy",
        "S_inf",
        "p_max",
        "argmax_config",
        "degenerate",
    ]);
    let mut worst: u8 = 0;
    for &delta in &deltas {
        let rows = scan_with_cache(delta, &l_list, sign_core, &opts, &cache);
        for (l, row) in l_list.iter().zip(rows) {
            match row {
                Ok(r) => table.push(scan_row_cells(&r)),
                Err(e) => {
                    let ce = CliError::from(e);
                    eprintln!("scan-ed: L={l}, delta={delta}: {}", ce.message);
                    worst = worst.max(ce.code);
                }
            }
        }
    }
    table.write(&config, common.format, common.out.as_deref())?;
    Ok(worst)
}

fn scan_with_cache(
    delta: f64,
    l_list: &[usize],
    sign: Sign,
    opts: &SolverOptions,
    cache: &Cache,
) -> Vec<Result<ScanRow, Error>> {
    // resolve cache hits first, solve the rest in one parallel scan
    let mut results: Vec<Option<Result<ScanRow, Error>>> = l_list
        .iter()
        .map(|&l| {
            let sector = Sector::canonical(l).ok()?;
            cache.lookup(sector, delta, sign).map(Ok)
        })
        .collect();
    let missing: Vec<usize> = l_list
        .iter()
        .enumerate()
        .filter(|(i, _)| results[*i].is_none())
        .map(|(_, &l)| l)
        .collect();
    let solved = entropy_scan_with(delta, &missing, sign, opts);
    let mut solved_iter = solved.into_iter();
    for slot in results.iter_mut() {
        if slot.is_none() {
            let row = solved_iter.next().expect("one result per missing length");
            if let Ok(r) = &row {
                cache.store(r, sign);
            }
            *slot = Some(row);
        }
    }
    results.into_iter().map(|r| r.expect("filled")).collect()
}

fn scan_row_cells(r: &ScanRow) -> Vec<Cell> {
    vec![
        Cell::Int(r.sector.length() as i64),
        Cell::Int(r.sector.n_up() as i64),
        Cell::Float(r.delta),
        Cell::Float(r.energy),
        Cell::Float(r.s_inf),
        Cell::Float(r.p_max),
        Cell::Text(r.argmax.to_string01()),
        Cell::Bool(r.degenerate),
    ]
}

#[derive(Serialize)]
struct XxDiffConfig {
    command: &'static str,
    n_list: Vec<usize>,
    format: String,
}

fn cmd_xx_diff(n_spec: &str, common: &CommonArgs) -> Result<u8, CliError> {
    init_pool(common.jobs)?;
    let n_list = parse_n_range(n_spec)?;
    let config = XxDiffConfig {
        command: "xx-diff",
        n_list: n_list.clone(),
        format: format!("{:?}", common.format).to_lowercase(),
    };
    let rows: Vec<(usize, Result<(f64, f64), Error>)> = n_list
        .par_iter()
        .map(|&n| {
            let pair = w_log_det(n).and_then(|w| Ok((xx_entropy_difference(n)?, w)));
            (n, pair)
        })
        .collect();
    let mut table = Table::new(vec!["N", "L_odd", "S_diff", "logdetW"]);
    let mut worst = 0u8;
    for (n, row) in rows {
        match row {
            Ok((s_diff, logdetw)) => table.push(vec![
                Cell::Int(n as i64),
                Cell::Int((2 * n + 1) as i64),
                Cell::Float(s_diff),
                Cell::Float(logdetw),
            ]),
            Err(e) => {
                let ce = CliError::from(e);
                eprintln!("xx-diff: N={n}: {}", ce.message);
                worst = worst.max(ce.code);
            }
        }
    }
    table.write(&config, common.format, common.out.as_deref())?;
    Ok(worst)
}

#[derive(Serialize)]
struct Fig2cConfig {
    command: &'static str,
    deltas: Vec<f64>,
    l_list: Vec<usize>,
    backend: String,
    tol: f64,
    format: String,
}

fn cmd_fig2c(
    delta_spec: &str,
    l_spec: &str,
    backend: BackendArg,
    common: &CommonArgs,
) -> Result<u8, CliError> {
    init_pool(common.jobs)?;
    let deltas = parse_delta_grid(delta_spec)?;
    let l_list = parse_l_list(l_spec)?;
    if let Some(&bad) = l_list.iter().find(|&&l| l % 2 == 0) {
        return Err(CliError::usage(format!(
            "fig2c fits use odd chain lengths, got L = {bad}"
        )));
    }
    let opts = solver_options(common.tol);
    let cache = Cache::from_env();
    let config = Fig2cConfig {
        command: "fig2c",
        deltas: deltas.clone(),
        l_list: l_list.clone(),
        backend: format!("{backend:?}").to_lowercase(),
        tol: opts.residual_tol,
        format: format!("{:?}", common.format).to_lowercase(),
    };

    let mut table = Table::new(vec![
        "delta",
        "b_ed",
        "stderr_ed",
        "b_imps",
        "stderr_imps",
        "alpha_theory",
    ]);
    let mut worst = 0u8;
    for &delta in &deltas {
        if !(-1.0 < delta && delta <= 1.0) {
            eprintln!("fig2c: delta={delta} is not in the critical interval (-1, 1]; row skipped");
            continue;
        }
        let alpha = alpha_from_delta(delta).expect("critical delta");
        let (mut b_ed, mut se_ed) = (f64::NAN, f64::NAN);
        let (mut b_imps, mut se_imps) = (f64::NAN, f64::NAN);
        if matches!(backend, BackendArg::Ed | BackendArg::Both) {
            match fit_backend_ed(delta, &l_list, &opts, &cache) {
                Ok((b, se)) => (b_ed, se_ed) = (b, se),
                Err(e) => {
                    let ce = CliError::from(e);
                    eprintln!("fig2c: ED fit at delta={delta}: {}", ce.message);
                    worst = worst.max(ce.code);
                }
            }
        }
        if matches!(backend, BackendArg::Imps | BackendArg::Both) {
            match fit_backend_imps(alpha, &l_list) {
                Ok((b, se)) => (b_imps, se_imps) = (b, se),
                Err(e) => {
                    let ce = CliError::from(e);
                    eprintln!("fig2c: ansatz fit at delta={delta}: {}", ce.message);
                    worst = worst.max(ce.code);
                }
            }
        }
        table.push(vec![
            Cell::Float(delta),
            Cell::Float(b_ed),
            Cell::Float(se_ed),
            Cell::Float(b_imps),
            Cell::Float(se_imps),
            Cell::Float(alpha),
        ]);
    }
    table.write(&config, common.format, common.out.as_deref())?;
    Ok(worst)
}

fn fit_backend_ed(
    delta: f64,
    l_list: &[usize],
    opts: &SolverOptions,
    cache: &Cache,
) -> Result<(f64, f64), Error> {
    let rows = scan_with_cache(delta, l_list, Sign::Plus, opts, cache);
    let points: Vec<(f64, f64)> = rows
        .into_iter()
        .map(|r| r.map(|row| (row.sector.length() as f64, row.s_inf)))
        .collect::<Result<_, Error>>()?;
    let fit = fit_scaling(&points)?;
    Ok((fit.b, fit.stderr_b))
}

fn fit_backend_imps(alpha: f64, l_list: &[usize]) -> Result<(f64, f64), Error> {
    let points: Vec<(f64, f64)> = l_list
        .par_iter()
        .map(|&l| {
            Ok((
                l as f64,
                imps_min_entropy_odd(alpha, l, vertex_oddity::gas::DEFAULT_ENUMERATION_CAP)?,
            ))
        })
        .collect::<Result<_, Error>>()?;
    let fit = fit_scaling(&points)?;
    Ok((fit.b, fit.stderr_b))
}

#[derive(Serialize)]
struct VerifyConfig {
    command: &'static str,
    filter: Option<String>,
    format: String,
}

fn cmd_verify(
    filter: Option<&str>,
    inject_failure: bool,
    common: &CommonArgs,
) -> Result<u8, CliError> {
    init_pool(common.jobs)?;
    let reports = run_checks(filter, inject_failure);
    if reports.is_empty() {
        return Err(CliError::usage(format!(
            "no checks match filter {:?}",
            filter.unwrap_or("")
        )));
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &reports {
        println!(
            "{:<width$}  {}  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail,
        );
    }
    println!(
        "{} checks, {} passed, {} failed",
        reports.len(),
        reports.len() - failed,
        failed
    );
    if common.out.is_some() {
        let config = VerifyConfig {
            command: "verify",
            filter: filter.map(String::from),
            format: format!("{:?}", common.format).to_lowercase(),
        };
        let mut table = Table::new(vec!["check", "passed", "detail"]);
        for r in &reports {
            table.push(vec![
                Cell::Text(r.name.into()),
                Cell::Bool(r.passed),
                Cell::Text(r.detail.clone()),
            ]);
        }
        table.write(&config, common.format, common.out.as_deref())?;
    }
    Ok(if failed > 0 { 1 } else { 0 })
}

#[derive(Serialize)]
struct RsTableConfig {
    command: &'static str,
    n_list: Vec<usize>,
    format: String,
}

fn cmd_rs_table(n_spec: &str, common: &CommonArgs) -> Result<u8, CliError> {
    init_pool(common.jobs)?;
    let n_list = parse_n_range(n_spec)?;
    let config = RsTableConfig {
        command: "rs-table",
        n_list: n_list.clone(),
        format: format!("{:?}", common.format).to_lowercase(),
    };
    let mut table = Table::new(vec!["N", "L", "S_exact", "S_asymptotic"]);
    for &n in &n_list {
        let l = 2 * n + 1;
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Int(l as i64),
            Cell::Float(-rs_log_pmax(n)),
            Cell::Float(rs_asymptotic_entropy(l).map_err(CliError::from)?),
        ]);
    }
    table.write(&config, common.format, common.out.as_deref())?;
    Ok(0)
}
