#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use commands::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] hardylab::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(hardylab::Error::Parse { .. } | hardylab::Error::Io(_)) => 2,
            CliError::Core(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

const NON_CONVERGENCE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "hardylab", version, about = "Numerical experiments with bounded analytic functions on the disk")]
struct Cli {
    /// log2 of the boundary grid size; the default depends on the subcommand
    /// and can be set through HARDYLAB_GRID
    #[arg(long, global = true)]
    grid: Option<u32>,
    /// Seed for randomized subcommands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Write the convergence series as CSV
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// TOML file whose keys override the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mean-value identity for random polynomials and automorphisms
    Meanvalue(MeanvalueArgs),
    /// Spread search avg(f∘φ_a) over refining disk meshes
    Spread(SpreadArgs),
    /// Frostman series of a zero sequence at a boundary point
    Frostman(FrostmanArgs),
    /// Ratio test and separation products of a zero sequence
    Thin(ThinArgs),
    /// Dyadic rotation averages of a boundary function
    Average(AverageArgs),
    /// Outer reconstruction and singular inner checks
    Factor(FactorArgs),
    /// Convex combinations of Blaschke products approximating a target
    Approx(ApproxArgs),
    /// Rotation orbit of a random function and its projected convex hull
    Orbit(OrbitArgs),
    /// Nevanlinna characteristic along increasing radii
    Nevanlinna(NevanlinnaArgs),
}

/// Keys of the config file that set global options rather than subcommand
/// parameters.
const GLOBAL_KEYS: [&str; 4] = ["grid", "seed", "output", "csv"];

struct Globals {
    seed: Option<u64>,
    output: Option<PathBuf>,
    csv: Option<PathBuf>,
    table: Option<toml::Table>,
    command_table: toml::Table,
}

fn globals(cli: &Cli) -> Result<Globals, CliError> {
    let table = cli.config.as_deref().map(config::read_table).transpose()?;
    let mut g = Globals {
        seed: cli.seed,
        output: cli.output.clone(),
        csv: cli.csv.clone(),
        table: None,
        command_table: toml::Table::new(),
    };
    if let Some(t) = &table {
        for (k, v) in t {
            match k.as_str() {
                "seed" => {
                    let s = v.as_integer().and_then(|i| u64::try_from(i).ok());
                    g.seed = Some(s.ok_or_else(|| CliError::Config("seed must be a nonnegative integer".into()))?);
                }
                "output" | "csv" => {
                    let p = v.as_str().ok_or_else(|| CliError::Config(format!("{k} must be a path string")))?;
                    if k == "output" {
                        g.output = Some(p.into());
                    } else {
                        g.csv = Some(p.into());
                    }
                }
                _ if GLOBAL_KEYS.contains(&k.as_str()) => {}
                _ => {
                    g.command_table.insert(k.clone(), v.clone());
                }
            }
        }
    }
    g.table = table;
    Ok(g)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let g = globals(&cli)?;
    let ctx = |default_grid: u32, seeded: bool| -> Result<Context, CliError> {
        let (grid, grid_echo) = config::resolve_grid(default_grid, cli.grid, g.table.as_ref())?;
        if seeded && g.seed.is_none() {
            return Err(CliError::Config("this subcommand needs --seed".into()));
        }
        Ok(Context { grid, grid_echo, seed: g.seed })
    };
    let t = &g.command_table;
    let (name, anchor, params, ctx, report) = match &cli.command {
        Command::Meanvalue(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(12, true)?;
            let r = meanvalue(&a, &c)?;
            ("meanvalue", MEANVALUE_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Spread(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(10, false)?;
            let r = spread(&a, &c)?;
            ("spread", SPREAD_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Frostman(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(12, false)?;
            let r = frostman(&a, &c)?;
            ("frostman", FROSTMAN_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Thin(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(12, false)?;
            let r = thin(&a, &c)?;
            ("thin", THIN_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Average(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(12, false)?;
            let r = average(&a, &c)?;
            ("average", AVERAGE_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Factor(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(12, false)?;
            let r = factor(&a, &c)?;
            ("factor", FACTOR_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Approx(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(6, true)?;
            let r = approx(&a, &c)?;
            ("approx", APPROX_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Orbit(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(8, true)?;
            let r = orbit(&a, &c)?;
            ("orbit", ORBIT_ANCHOR, serde_json::to_value(&a), c, r)
        }
        Command::Nevanlinna(a) => {
            let a = config::overlay(a, t)?;
            let c = ctx(12, false)?;
            let r = nevanlinna(&a, &c)?;
            ("nevanlinna", NEVANLINNA_ANCHOR, serde_json::to_value(&a), c, r)
        }
    };
    let params = params.map_err(|e| CliError::Config(e.to_string()))?;

    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let doc = json!({
        "command": name,
        "anchor": anchor,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": ctx.seed,
        "config": {
            "grid": ctx.grid_echo,
            "params": params,
            "config_file": cli.config.as_ref().map(|p| p.display().to_string()),
        },
        "metrics": report.metrics,
        "converged": report.failure.is_none(),
        "timestamp": timestamp,
    });
    emit(&doc, g.output.as_deref())?;
    if let (Some(path), Some(series)) = (&g.csv, &report.csv) {
        std::fs::write(path, series)?;
    }
    match report.failure {
        Some(msg) => {
            eprintln!("hardylab {name}: {msg}");
            Ok(NON_CONVERGENCE)
        }
        None => Ok(0),
    }
}

fn emit(doc: &Value, path: Option<&std::path::Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    match path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hardylab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
