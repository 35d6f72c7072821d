mod compute;
mod config;
mod info;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crossprod::io::{parse_system, write_system};
use crossprod::random::DEFAULT_SEED;
use crossprod::CrossedProduct;

use compute::{Op, OpArgs};
use config::{Format, RunConfig};
use report::Report;
use verify::Suite;

#[derive(Parser)]
#[command(name = "crossprod", version, about = "Crossed products of finite systems and circle rotations")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Number of `t` sample points (power of two, at least 16).
    #[arg(long, global = true, default_value_t = 64)]
    grid: usize,
    /// Half-width of the truncation window for aperiodic points.
    #[arg(long, global = true, default_value_t = 256)]
    window: usize,
    #[arg(long, global = true, env = "CROSSPROD_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Target radius of norm enclosures.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Orbits, periodicity and freeness of a system.
    Info { system: PathBuf },
    /// Run property checks; exits nonzero if any check fails.
    Verify {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        cutoff: Option<u64>,
    },
    /// Evaluate a single operation.
    Compute {
        #[arg(value_enum)]
        op: Op,
        /// Element or ideal files, as the operation requires.
        inputs: Vec<PathBuf>,
        #[arg(long)]
        sys: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
        #[arg(long)]
        n: Option<u64>,
        /// Base point: an index for finite systems, a turn on the circle.
        #[arg(long)]
        y: Option<String>,
        /// Circle parameter in turns.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long)]
        cutoff: Option<u64>,
        /// Subalgebra spec as inline JSON or a file path.
        #[arg(long)]
        subalgebra: Option<String>,
    },
}

fn load(path: &PathBuf) -> Result<CrossedProduct<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let sys = parse_system(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(CrossedProduct::new(sys))
}

fn system_value(cp: &CrossedProduct<f64>) -> serde_json::Value {
    serde_json::from_str(&write_system(cp.system())).expect("canonical system JSON")
}

fn run(cfg: &RunConfig, command: Command) -> Result<Report> {
    cfg.validate()?;
    match command {
        Command::Info { system } => {
            let cp = load(&system)?;
            info::info(&cp, Report::new("info", system_value(&cp), cfg.seed))
        }
        Command::Verify { sys, suite, cutoff } => {
            let cp = load(&sys)?;
            let name = format!("verify {}", suite_name(suite));
            Ok(Report::new(name, system_value(&cp), cfg.seed).with_checks(verify::run(&cp, suite, cfg, cutoff)))
        }
        Command::Compute { op, inputs, sys, j, n, y, t, cutoff, subalgebra } => {
            let cp = load(&sys)?;
            let args = OpArgs { inputs, j, n, y, t, cutoff, subalgebra };
            let value = compute::compute(&cp, op, &args, cfg)?;
            let mut report = Report::new(format!("compute {}", op_name(op)), system_value(&cp), cfg.seed);
            report.result = Some(value);
            Ok(report)
        }
    }
}

fn suite_name(s: Suite) -> String {
    clap::ValueEnum::to_possible_value(&s).map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn op_name(o: Op) -> String {
    clap::ValueEnum::to_possible_value(&o).map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.config;
    let cfg = RunConfig { grid: c.grid, window: c.window, tol: c.tol, seed: c.seed, format: c.format };
    match run(&cfg, cli.command) {
        Ok(report) => {
            match cfg.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
