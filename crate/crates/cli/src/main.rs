use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use toeplitz_lab::report::write_report;
use toeplitz_lab::runner::{run, RunOptions};
use toeplitz_lab::scenario::{parse, EXPERIMENTS};

/// Run a scenario of spectral-triple experiments and write report.json plus CSV tables.
#[derive(Parser, Debug)]
#[command(name = "toeplitz-lab", version)]
struct Cli {
    /// Scenario JSON file.
    #[arg(long, required_unless_present = "list_experiments")]
    scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = "./out")]
    out: PathBuf,
    /// Multiplies every check tolerance.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Lift the dimension cap on truncations.
    #[arg(long)]
    allow_large: bool,
    /// Print the experiment vocabulary and exit.
    #[arg(long)]
    list_experiments: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_experiments {
        for (name, description) in EXPERIMENTS {
            println!("{name:<16} {description}");
        }
        return ExitCode::SUCCESS;
    }
    let path = cli.scenario.expect("clap enforces --scenario");
    let raw = match std::fs::read(&path) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    if !(cli.tolerance_scale.is_finite() && cli.tolerance_scale > 0.0) {
        eprintln!("--tolerance-scale must be positive and finite");
        return ExitCode::from(2);
    }
    let scenario = match std::str::from_utf8(&raw)
        .map_err(|e| toeplitz_lab::scenario::SchemaError::new("<document>", e.to_string()))
        .and_then(parse)
        .and_then(|s| s.validate(cli.allow_large).map(|_| s))
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        seed: cli.seed,
        tolerance_scale: cli.tolerance_scale,
    };
    let outcome = match run(&scenario, &raw, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("numerical error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_report(&cli.out, &outcome.report, &outcome.tables) {
        eprintln!("cannot write to {}: {e}", cli.out.display());
        return ExitCode::from(1);
    }
    let total = outcome.report.results.len();
    let failed: Vec<_> = outcome.report.failures().collect();
    for f in &failed {
        eprintln!("FAIL {} [{}] slack={}", f.name, f.paper_anchor, f.slack);
    }
    println!("{} checks, {} failed, report in {}", total, failed.len(), cli.out.display());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
