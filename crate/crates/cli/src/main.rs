use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use emcov_cli::report::{csv, Report};
use emcov_cli::run::{build, run_tasks, Options};
use emcov_cli::scenario::parse_scenario;

#[derive(Parser)]
#[command(name = "emcov", version, about = "Run correlation-function scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every task of a scenario and write a JSON report.
    Run {
        scenario: PathBuf,
        /// Multiplies grid and quadrature resolution.
        #[arg(long, default_value_t = 1.0)]
        grid_scale: f64,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Runs tasks on separate threads.
        #[arg(long)]
        parallel: bool,
        /// Report path; defaults to the scenario's `[output] json` or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for the report and CSV files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Parse a scenario and build its objects without running tasks.
    Validate { scenario: PathBuf },
    /// Summarise a JSON report.
    Report {
        json: PathBuf,
        /// Prints the report re-indented instead of a summary.
        #[arg(long)]
        pretty: bool,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::FAILURE
}

fn load(path: &Path) -> Result<emcov_cli::scenario::Scenario, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            scenario,
            grid_scale,
            seed,
            parallel,
            out,
            out_dir,
        } => {
            let s = match load(&scenario) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let opts = Options {
                grid_scale,
                seed,
                parallel,
            };
            let ctx = match build(&s, &opts) {
                Ok(c) => c,
                Err(e) => return fail(format!("{}: {e}", scenario.display())),
            };
            let tasks = run_tasks(&ctx, &s.tasks, parallel);
            let place = |p: PathBuf| match &out_dir {
                Some(d) if p.is_relative() => d.join(p),
                _ => p,
            };
            for t in tasks.values() {
                if let Some(table) = &t.table {
                    if let Err(e) = write(
                        &place(PathBuf::from(&table.path)),
                        &csv(&table.header, &table.rows),
                    ) {
                        return fail(e);
                    }
                }
            }
            let name = scenario
                .file_stem()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let report = Report::new(&name, &ctx, grid_scale, tasks);
            let text = serde_json::to_string_pretty(&report).expect("report serialises");
            let target = out
                .or_else(|| s.json.clone().map(PathBuf::from))
                .map(&place)
                .or_else(|| out_dir.as_ref().map(|d| d.join(format!("{name}.json"))));
            match target {
                Some(path) => {
                    if let Err(e) = write(&path, &text) {
                        return fail(e);
                    }
                    eprint!("{}", report.summary());
                }
                None => println!("{text}"),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Validate { scenario } => {
            let s = match load(&scenario) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            match build(&s, &Options::default()) {
                Ok(ctx) => {
                    println!(
                        "{}: ok ({} test functions, {} tasks, kernel {})",
                        scenario.display(),
                        ctx.testfns.len(),
                        s.tasks.len(),
                        ctx.kernel.name()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => fail(format!("{}: {e}", scenario.display())),
            }
        }
        Command::Report { json, pretty } => {
            let text = match fs::read_to_string(&json) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", json.display())),
            };
            let report: Report = match serde_json::from_str(&text) {
                Ok(r) => r,
                Err(e) => return fail(format!("{}: {e}", json.display())),
            };
            if pretty {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serialises")
                );
            } else {
                print!("{}", report.summary());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
