//! Command-line front end.
//!
//! Settings resolve in the order flag, config file (`--config`, flat TOML), then
//! built-in default; the seed additionally falls back to `DECONWAVE_SEED` before the
//! default. Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::estimator::{self, EstimatorConfig, TruncationRule};
use crate::experiment::{self, ExperimentSpec, JMode};
use crate::grid::{self, SampledField};
use crate::io;
use crate::rates::{rate_exponent, RateParams};
use crate::signals::{KernelShape, TestSignal};

pub const SEED_ENV: &str = "DECONWAVE_SEED";
const DEFAULT_SEED: u64 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Runtime(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Self::Runtime(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "deconwave",
    version,
    about = "Wavelet estimator for blind functional deconvolution"
)]
pub struct Cli {
    /// Flat TOML file with default settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for repetitions
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Progress messages on stderr
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte-Carlo MISE over a grid of cells, one CSV row per cell
    Benchmark(BenchmarkArgs),
    /// Estimate f from observed y and noisy kernel matrices
    Estimate(EstimateArgs),
    /// Write a synthetic observation pair
    Simulate(SimulateArgs),
    /// Convergence-rate exponents d and d1
    Rates(RatesArgs),
    /// Mean MISE for each finest level J of one cell
    SearchJ(SearchArgs),
}

#[derive(Debug, Args, Default)]
struct EstimatorFlags {
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long)]
    gamma2: Option<f64>,
    /// Coarse Meyer level m0
    #[arg(long)]
    coarse_t: Option<u32>,
    /// Coarse Daubechies level m0'
    #[arg(long)]
    coarse_u: Option<u32>,
    /// pointwise | uniform
    #[arg(long)]
    truncation: Option<String>,
}

#[derive(Debug, Args, Default)]
struct CellFlags {
    #[arg(long = "f-t", value_delimiter = ',')]
    f_t: Vec<String>,
    #[arg(long = "f-u", value_delimiter = ',')]
    f_u: Vec<String>,
    /// Profiles M
    #[arg(long, value_delimiter = ',')]
    rows: Vec<usize>,
    /// Samples per profile N
    #[arg(long, value_delimiter = ',')]
    cols: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    snr1: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    snr2: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// auto | oracle | <level>
    #[arg(long)]
    j_mode: Option<String>,
    /// one-sided | periodic
    #[arg(long)]
    kernel: Option<String>,
    /// Shorthand for --f-t, --f-u, --rows, --cols
    #[arg(long, num_args = 4, value_names = ["F_T", "F_U", "M", "N"])]
    table1_cell: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    cell: CellFlags,
    #[command(flatten)]
    est: EstimatorFlags,
    /// Summary CSV (stdout when absent)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Long-format per-repetition CSV
    #[arg(long)]
    per_rep: Option<PathBuf>,
    /// Long-format (x, y, series) CSV of mean MISE against SNR1
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Observed data matrix (CSV, or FDC1 binary for .bin/.fdc)
    #[arg(long)]
    y: PathBuf,
    /// Observed kernel matrix
    #[arg(long)]
    g: PathBuf,
    #[arg(long)]
    sigma1: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    /// Fixed finest Meyer level J
    #[arg(long)]
    j: Option<u32>,
    /// Fixed finest Daubechies level J'
    #[arg(long)]
    jprime: Option<u32>,
    #[command(flatten)]
    est: EstimatorFlags,
    /// Estimated field
    #[arg(long)]
    output: PathBuf,
    /// Diagnostics JSON (stdout when absent)
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Long-format (x, y, series) CSV of the estimate's mean profile
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    cell: CellFlags,
    #[arg(long)]
    y_out: PathBuf,
    #[arg(long)]
    g_out: PathBuf,
    /// Noise-free test function
    #[arg(long)]
    truth_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[arg(long)]
    s1: f64,
    #[arg(long)]
    s2: f64,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long)]
    nu: f64,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    cell: CellFlags,
    #[command(flatten)]
    est: EstimatorFlags,
    /// Candidate levels (default m0 ..= log2 N - 1)
    #[arg(long, value_delimiter = ',')]
    j_set: Vec<u32>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Long-format (x, y, series) CSV of mean MISE against J
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            Self::One(v) => vec![v.clone()],
            Self::Many(v) => v.clone(),
        }
    }
}

/// Keys accepted in the `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    f_t: Option<OneOrMany<String>>,
    f_u: Option<OneOrMany<String>>,
    rows: Option<OneOrMany<usize>>,
    cols: Option<OneOrMany<usize>>,
    snr1_db: Option<OneOrMany<f64>>,
    snr2_db: Option<f64>,
    n_rep: Option<usize>,
    seed: Option<u64>,
    j_mode: Option<String>,
    kernel: Option<String>,
    kappa: Option<f64>,
    rho: Option<f64>,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
    sigma1: Option<f64>,
    sigma2: Option<f64>,
    coarse_t: Option<u32>,
    coarse_u: Option<u32>,
    truncation: Option<String>,
    jobs: Option<usize>,
}

fn load_file(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

fn pick<T: Clone>(flag: &[T], file: &Option<OneOrMany<T>>, default: &[T]) -> Vec<T> {
    if !flag.is_empty() {
        flag.to_vec()
    } else if let Some(v) = file {
        v.to_vec()
    } else {
        default.to_vec()
    }
}

fn parse_signals(key: &str, names: &[String]) -> CliResult<Vec<TestSignal>> {
    names
        .iter()
        .map(|n| {
            n.parse()
                .map_err(|_| usage(format!("{key}: unknown test signal '{n}'")))
        })
        .collect()
}

fn parse_j_mode(s: &str) -> CliResult<JMode> {
    match s.to_ascii_lowercase().as_str() {
        "auto" => Ok(JMode::Auto),
        "oracle" | "oracle-search" => Ok(JMode::OracleSearch),
        other => other.parse().map(JMode::Fixed).map_err(|_| {
            usage(format!(
                "j_mode: expected auto, oracle or a level, got '{s}'"
            ))
        }),
    }
}

fn parse_truncation(s: &str) -> CliResult<TruncationRule> {
    match s.to_ascii_lowercase().as_str() {
        "pointwise" => Ok(TruncationRule::Pointwise),
        "uniform" | "uniform-over-rows" => Ok(TruncationRule::UniformOverRows),
        _ => Err(usage(format!(
            "truncation: expected pointwise or uniform, got '{s}'"
        ))),
    }
}

fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            usage(format!(
                "{SEED_ENV}: expected an unsigned integer, got '{v}'"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn resolve_estimator(flags: &EstimatorFlags, file: &FileConfig) -> CliResult<EstimatorConfig> {
    let d = EstimatorConfig::default();
    let truncation = match flags.truncation.as_ref().or(file.truncation.as_ref()) {
        Some(s) => parse_truncation(s)?,
        None => d.truncation,
    };
    let cfg = EstimatorConfig {
        kappa: flags.kappa.or(file.kappa).unwrap_or(d.kappa),
        rho: flags.rho.or(file.rho).unwrap_or(d.rho),
        gamma1: flags.gamma1.or(file.gamma1).unwrap_or(d.gamma1),
        gamma2: flags.gamma2.or(file.gamma2).unwrap_or(d.gamma2),
        sigma1: file.sigma1.unwrap_or(d.sigma1),
        sigma2: file.sigma2.unwrap_or(d.sigma2),
        coarse_t: flags.coarse_t.or(file.coarse_t).unwrap_or(d.coarse_t),
        coarse_u: flags.coarse_u.or(file.coarse_u).unwrap_or(d.coarse_u),
        truncation,
        ..d
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Cartesian grid of benchmark cells with shared settings.
#[derive(Debug, Clone, Serialize)]
struct CellGrid {
    f_t: Vec<TestSignal>,
    f_u: Vec<TestSignal>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    snr1_db: Vec<f64>,
    snr2_db: f64,
    n_rep: usize,
    seed: u64,
    j_mode: JMode,
    kernel: KernelShape,
}

impl CellGrid {
    fn resolve(
        flags: &CellFlags,
        file: &FileConfig,
        default_mode: JMode,
        default_snr1: &[f64],
    ) -> CliResult<Self> {
        let (mut ft, mut fu, mut rows, mut cols) = (
            pick(&flags.f_t, &file.f_t, &["heavisine".to_string()]),
            pick(&flags.f_u, &file.f_u, &["quadratic".to_string()]),
            pick(&flags.rows, &file.rows, &[128]),
            pick(&flags.cols, &file.cols, &[512]),
        );
        if let Some(cell) = &flags.table1_cell {
            ft = vec![cell[0].clone()];
            fu = vec![cell[1].clone()];
            let num = |key: &str, s: &str| {
                s.parse::<usize>()
                    .map_err(|_| usage(format!("table1-cell: {key} must be an integer, got '{s}'")))
            };
            rows = vec![num("M", &cell[2])?];
            cols = vec![num("N", &cell[3])?];
        }
        let j_mode = match flags.j_mode.as_ref().or(file.j_mode.as_ref()) {
            Some(s) => parse_j_mode(s)?,
            None => default_mode,
        };
        let kernel = match flags.kernel.as_ref().or(file.kernel.as_ref()) {
            Some(s) => s
                .parse()
                .map_err(|_| usage(format!("kernel: expected one-sided or periodic, got '{s}'")))?,
            None => KernelShape::default(),
        };
        let n_rep = flags.reps.or(file.n_rep).unwrap_or(100);
        if n_rep == 0 {
            return Err(usage("reps (n_rep) must be at least 1"));
        }
        let grid = Self {
            f_t: parse_signals("f_t", &ft)?,
            f_u: parse_signals("f_u", &fu)?,
            rows,
            cols,
            snr1_db: pick(&flags.snr1, &file.snr1_db, default_snr1),
            snr2_db: flags.snr2.or(file.snr2_db).unwrap_or(30.0),
            n_rep,
            seed: resolve_seed(flags.seed, file.seed)?,
            j_mode,
            kernel,
        };
        for (key, empty) in [
            ("f_t", grid.f_t.is_empty()),
            ("f_u", grid.f_u.is_empty()),
            ("rows", grid.rows.is_empty()),
            ("cols", grid.cols.is_empty()),
            ("snr1_db", grid.snr1_db.is_empty()),
        ] {
            if empty {
                return Err(usage(format!("{key}: no values given")));
            }
        }
        for spec in grid.specs() {
            spec.validate()?;
        }
        Ok(grid)
    }

    /// Cells in output order: M, N, SNR₁, f_t, f_u (last varies fastest).
    fn specs(&self) -> Vec<ExperimentSpec> {
        let mut out = Vec::new();
        for &rows in &self.rows {
            for &cols in &self.cols {
                for &snr1_db in &self.snr1_db {
                    for &f_t in &self.f_t {
                        for &f_u in &self.f_u {
                            out.push(ExperimentSpec {
                                f_t,
                                f_u,
                                rows,
                                cols,
                                snr1_db,
                                snr2_db: self.snr2_db,
                                n_rep: self.n_rep,
                                seed: self.seed,
                                j_mode: self.j_mode,
                                kernel: self.kernel,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    fn single(&self) -> CliResult<ExperimentSpec> {
        let specs = self.specs();
        if specs.len() != 1 {
            return Err(usage(format!(
                "expected a single cell, the settings describe {}",
                specs.len()
            )));
        }
        Ok(specs.into_iter().next().expect("one cell"))
    }
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn header_json(command: &str, config: &serde_json::Value) -> String {
    format!(
        "deconwave {} {command}\nconfig: {}",
        env!("CARGO_PKG_VERSION"),
        serde_json::to_string(config).expect("serializable config")
    )
}

fn comment_block(header: &str) -> String {
    header.lines().map(|l| format!("# {l}\n")).collect()
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = fs::File::create(p)
                .map_err(|e| runtime(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn write_plot_data(path: &Path, header: &str, points: &[(f64, f64, String)]) -> CliResult<()> {
    let mut out = open_output(Some(path))?;
    let mut text = comment_block(header);
    text.push_str("x,y,series\n");
    for (x, y, series) in points {
        text.push_str(&format!("{},{},{series}\n", num(*x), num(*y)));
    }
    out.write_all(text.as_bytes()).map_err(runtime)?;
    out.flush().map_err(runtime)
}

fn series_label(spec: &ExperimentSpec) -> String {
    format!("{}-{}-{}x{}", spec.f_t, spec.f_u, spec.rows, spec.cols)
}

fn cmd_benchmark(args: &BenchmarkArgs, file: &FileConfig, verbose: bool) -> CliResult<()> {
    let grid = CellGrid::resolve(&args.cell, file, JMode::OracleSearch, &[10.0, 20.0, 30.0])?;
    let cfg = resolve_estimator(&args.est, file)?;
    let header = header_json("benchmark", &json!({ "cells": grid, "estimator": cfg }));

    let mut summary = comment_block(&header);
    summary.push_str(
        "f_t,f_u,M,N,snr1_db,snr2_db,J,Jprime,mean_mise,sd_mise,n_rep,seed,wall_time_s\n",
    );
    let mut per_rep = comment_block(&header);
    per_rep.push_str("f_t,f_u,M,N,snr1_db,snr2_db,rep,seed,J,Jprime,mise\n");
    let mut plot = Vec::new();
    for spec in grid.specs() {
        if verbose {
            eprintln!("cell {} snr1 = {}", series_label(&spec), spec.snr1_db);
        }
        let start = Instant::now();
        let report = experiment::run_benchmark(&spec, &cfg).map_err(runtime)?;
        let wall = start.elapsed().as_secs_f64();
        let lead = format!(
            "{},{},{},{},{},{}",
            spec.f_t,
            spec.f_u,
            spec.rows,
            spec.cols,
            num(spec.snr1_db),
            num(spec.snr2_db)
        );
        summary.push_str(&format!(
            "{lead},{},{},{},{},{},{},{}\n",
            report.chosen_j,
            report.chosen_jprime,
            num(report.mean_mise),
            num(report.sd_mise),
            spec.n_rep,
            spec.seed,
            num(wall)
        ));
        for (rep, r) in report.per_rep.iter().enumerate() {
            per_rep.push_str(&format!(
                "{lead},{rep},{},{},{},{}\n",
                spec.seed.wrapping_add(rep as u64),
                r.fine_t,
                r.fine_u,
                num(r.mise)
            ));
        }
        plot.push((spec.snr1_db, report.mean_mise, series_label(&spec)));
    }
    let mut out = open_output(args.output.as_deref())?;
    out.write_all(summary.as_bytes()).map_err(runtime)?;
    out.flush().map_err(runtime)?;
    if let Some(path) = &args.per_rep {
        fs::write(path, per_rep).map_err(runtime)?;
    }
    if let Some(path) = &args.emit_plot_data {
        write_plot_data(path, &header, &plot)?;
    }
    Ok(())
}

fn read_field(key: &str, path: &Path) -> CliResult<SampledField> {
    let values =
        io::read_matrix(path).map_err(|e| usage(format!("{key} ({}): {e}", path.display())))?;
    SampledField::new(values).map_err(|e| usage(format!("{key} ({}): {e}", path.display())))
}

fn cmd_estimate(args: &EstimateArgs, file: &FileConfig) -> CliResult<()> {
    let y = read_field("y", &args.y)?;
    let g = read_field("g", &args.g)?;
    if y.dim() != g.dim() {
        return Err(usage(format!("y is {:?} but g is {:?}", y.dim(), g.dim())));
    }
    let mut cfg = resolve_estimator(&args.est, file)?;
    cfg.sigma1 = args.sigma1.unwrap_or(cfg.sigma1);
    cfg.sigma2 = args.sigma2.unwrap_or(cfg.sigma2);
    cfg.j_override = args.j;
    cfg.jp_override = args.jprime;
    cfg.validate()?;
    let (rows, cols) = y.dim();
    if let Some(j) = cfg.j_override {
        if j < cfg.coarse_t || j + 1 > grid::log2(cols) {
            return Err(usage(format!(
                "j: level {j} outside {}..={}",
                cfg.coarse_t,
                grid::log2(cols) - 1
            )));
        }
    }
    if let Some(jp) = cfg.jp_override {
        if jp < cfg.coarse_u || jp + 1 > grid::log2(rows) {
            return Err(usage(format!(
                "jprime: level {jp} outside {}..={}",
                cfg.coarse_u,
                grid::log2(rows) - 1
            )));
        }
    }

    let est =
        estimator::estimate(&grid::dft_rows(&y), &grid::dft_rows(&g), &cfg).map_err(runtime)?;
    let mut warnings = Vec::new();
    if est.diagnostics.fully_truncated_kernel() {
        warnings.push("fully truncated kernel: every kernel coefficient fell below the truncation level; the estimate is zero");
    }
    if !est.diagnostics.j_admissible {
        warnings.push("no resolution level satisfied the J criterion; coarse-only estimate");
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let config = json!({
        "y": args.y,
        "g": args.g,
        "estimator": cfg,
    });
    let header = header_json("estimate", &config);
    let record = json!({
        "config": config,
        "diagnostics": est.diagnostics,
        "warnings": warnings,
    });
    io::write_matrix(&args.output, est.field.values(), &header, &record).map_err(runtime)?;
    let text = serde_json::to_string_pretty(&record).map_err(runtime)? + "\n";
    match &args.diagnostics {
        Some(path) => fs::write(path, text).map_err(runtime)?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.emit_plot_data {
        let values = est.field.values();
        let points: Vec<(f64, f64, String)> = (0..cols)
            .map(|i| {
                let mean = values.column(i).sum() / rows as f64;
                (i as f64 / cols as f64, mean, "row-mean".to_string())
            })
            .collect();
        write_plot_data(path, &header, &points)?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, file: &FileConfig) -> CliResult<()> {
    let grid = CellGrid::resolve(&args.cell, file, JMode::Auto, &[20.0])?;
    let spec = grid.single()?;
    let cell = experiment::Cell::new(&spec)?;
    let obs = cell.observe(0)?;
    let config = json!({
        "cell": spec,
        "sigma1": cell.sigma1,
        "sigma2": cell.sigma2,
    });
    let header = header_json("simulate", &config);
    let y = grid::idft_rows(&obs.y);
    let g = grid::idft_rows(&obs.g);
    io::write_matrix(&args.y_out, y.values(), &header, &config).map_err(runtime)?;
    io::write_matrix(&args.g_out, g.values(), &header, &config).map_err(runtime)?;
    if let Some(path) = &args.truth_out {
        io::write_matrix(path, cell.truth.values(), &header, &config).map_err(runtime)?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&config).map_err(runtime)?
    );
    Ok(())
}

fn cmd_rates(args: &RatesArgs) -> CliResult<()> {
    let rp = RateParams {
        s1: args.s1,
        s2: args.s2,
        p: args.p,
        q: args.q,
        nu: args.nu,
    };
    let rate = rate_exponent(&rp)?;
    println!("branch = {}", rate.regime.branch());
    println!("regime = {}", rate.regime.label());
    println!("d = {}", num(rate.d));
    println!("d1 = {}", rate.d1);
    Ok(())
}

fn cmd_search_j(args: &SearchArgs, file: &FileConfig) -> CliResult<()> {
    let grid = CellGrid::resolve(&args.cell, file, JMode::OracleSearch, &[20.0])?;
    let spec = grid.single()?;
    let cfg = resolve_estimator(&args.est, file)?;
    let j_set = if args.j_set.is_empty() {
        experiment::default_j_set(&spec, &cfg)
    } else {
        args.j_set.clone()
    };
    let header = header_json(
        "search-j",
        &json!({ "cell": spec, "estimator": cfg, "j_set": j_set }),
    );
    let search = experiment::oracle_j_search(&spec, &cfg, &j_set)?;
    let mut text = comment_block(&header);
    text.push_str("J,mean_mise,sd_mise,best\n");
    for p in &search.curve {
        text.push_str(&format!(
            "{},{},{},{}\n",
            p.j,
            num(p.mean_mise),
            num(p.sd_mise),
            p.j == search.best_j
        ));
    }
    let mut out = open_output(args.output.as_deref())?;
    out.write_all(text.as_bytes()).map_err(runtime)?;
    out.flush().map_err(runtime)?;
    if let Some(path) = &args.emit_plot_data {
        let label = series_label(&spec);
        let points: Vec<_> = search
            .curve
            .iter()
            .map(|p| (p.j as f64, p.mean_mise, label.clone()))
            .collect();
        write_plot_data(path, &header, &points)?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let file = load_file(cli.config.as_deref())?;
    let jobs = cli.jobs.or(file.jobs);
    let run = || match &cli.command {
        Command::Benchmark(a) => cmd_benchmark(a, &file, cli.verbose),
        Command::Estimate(a) => cmd_estimate(a, &file),
        Command::Simulate(a) => cmd_simulate(a, &file),
        Command::Rates(a) => cmd_rates(a),
        Command::SearchJ(a) => cmd_search_j(a, &file),
    };
    match jobs {
        Some(0) => Err(usage("jobs must be at least 1")),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(runtime)?
            .install(run),
        None => run(),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) => format!("error: {m}"),
                CliError::Runtime(m) => format!("error: {m}"),
            };
            eprintln!("{msg}");
            e.exit_code()
        }
    }
}

pub fn run() -> u8 {
    run_with(std::env::args_os())
}
