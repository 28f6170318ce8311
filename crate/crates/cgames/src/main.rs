//! Experiment harness: deterministic runs, budget sweeps, and verification
//! suites for corrupted learning dynamics in games.

mod config;
mod runner;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use corrupted_games::verify;
use rayon::prelude::*;
use serde_json::json;

use config::{RunConfig, SweepGrid};

#[derive(Parser)]
#[command(name = "cgames", version, about = "Corrupted learning dynamics in games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and write run.csv + report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Execute a parameter grid of runs and write sweep.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed as the base for grid seeds.
        #[arg(long)]
        seed: Option<u64>,
        /// Caps sweep parallelism.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a verification suite ("all" runs every suite) and print one
    /// pass/fail line per criterion.
    Verify {
        #[arg(long)]
        suite: String,
        /// Also write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Run { config, out, seed } => {
            let cfg = RunConfig::parse(&fs::read_to_string(&config)?)?;
            let (rows, report) = runner::execute(&cfg, seed)?;
            write_outputs(&out, &runner::to_csv(&rows), "run.csv", &report, "report.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, grid, out, seed, threads } => {
            let cfg = RunConfig::parse(&fs::read_to_string(&config)?)?;
            let grid = SweepGrid::parse(&fs::read_to_string(&grid)?)?;
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
            }
            let csv = sweep(&cfg, &grid, seed)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("sweep.csv"), csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, json } => {
            let results: Vec<verify::CriterionResult> = if suite == "all" {
                verify::run_all()?
            } else {
                match verify::run_suite(&suite) {
                    Some(result) => vec![result?],
                    None => {
                        eprintln!(
                            "unknown suite {suite}; available: all, {}",
                            verify::SUITE_NAMES.join(", ")
                        );
                        return Ok(ExitCode::from(2));
                    }
                }
            };
            let mut all_passed = true;
            for r in &results {
                println!("[{}] {} — {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                all_passed &= r.passed;
            }
            if let Some(path) = json {
                let report = json!({
                    "suites": results.iter().map(|r| json!({
                        "name": r.name,
                        "passed": r.passed,
                        "detail": r.detail,
                    })).collect::<Vec<_>>(),
                    "all_passed": all_passed,
                });
                fs::write(path, serde_json::to_string_pretty(&report)?)?;
            }
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn write_outputs(
    out: &Path,
    csv: &str,
    csv_name: &str,
    report: &serde_json::Value,
    report_name: &str,
) -> std::io::Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join(csv_name), csv)?;
    fs::write(out.join(report_name), serde_json::to_string_pretty(report).expect("valid json"))?;
    Ok(())
}

const SWEEP_HEADER: &str = "strategy_budget,utility_budget,horizon,seed,player,\
ext_played_true,ext_suggested_true,ext_played_observed,ext_suggested_observed,\
swap_played_true,swap_suggested_true,swap_played_observed,swap_suggested_observed,gap";

/// Runs the grid's cartesian product in parallel and aggregates the final
/// summary of each run into one deterministic CSV (grid order, not
/// completion order).
fn sweep(template: &RunConfig, grid: &SweepGrid, seed_override: Option<u64>) -> corrupted_games::Result<String> {
    let points = grid.points();
    let summaries: Vec<corrupted_games::Result<Vec<String>>> = points
        .par_iter()
        .map(|&(strategy, utility, horizon, seed)| {
            let mut cfg = template.clone();
            if let Some(s) = strategy {
                cfg.players[0].budgets.strategy = s;
            }
            if let Some(u) = utility {
                cfg.players[0].budgets.utility = u;
            }
            if let Some(h) = horizon {
                cfg.horizon = h;
            }
            // the grid seed offsets the (possibly overridden) base seed
            let base = seed_override.unwrap_or(cfg.seed);
            let (rows, _) = runner::execute(&cfg, Some(base.wrapping_add(seed)))?;
            let lines = rows
                .iter()
                .filter(|r| r.row_type == "summary")
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        strategy.map_or(template.players[0].budgets.strategy, |v| v),
                        utility.map_or(template.players[0].budgets.utility, |v| v),
                        horizon.map_or(template.horizon, |v| v),
                        seed,
                        r.player,
                        r.ext[0],
                        r.ext[1],
                        r.ext[2],
                        r.ext[3],
                        r.swap[0],
                        r.swap[1],
                        r.swap[2],
                        r.swap[3],
                        r.gap,
                    )
                })
                .collect();
            Ok(lines)
        })
        .collect();
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for lines in summaries {
        for line in lines? {
            csv.push_str(&line);
            csv.push('\n');
        }
    }
    Ok(csv)
}
