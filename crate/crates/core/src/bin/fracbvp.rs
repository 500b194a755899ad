use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracbvp::cli::{self, CliError, Config, Overrides};

#[derive(Parser)]
#[command(name = "fracbvp", version, about = "Caputo fractional BVP solver and certificate checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid size (overrides `grid_n`).
    #[arg(long)]
    grid: Option<usize>,
    /// Picard tolerance (overrides `tol`).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve by Picard iteration; writes solution.csv and report.json.
    Solve(Common),
    /// Print the existence/uniqueness certificate.
    Certify(Common),
    /// Tabulate the Green's function into green.csv.
    Green {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 11)]
        mt: usize,
        #[arg(long, default_value_t = 11)]
        ms: usize,
    },
    /// Run the built-in benchmark problem end to end.
    Example,
}

fn load(common: &Common) -> Result<Config, CliError> {
    let mut config = Config::from_path(&common.config)?;
    Overrides {
        out: common.out.clone(),
        grid: common.grid,
        tol: common.tol,
    }
    .apply(&mut config)?;
    Ok(config)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(common) => {
            let outcome = cli::cmd_solve(&load(&common)?)?;
            println!("converged={}", outcome.report.converged);
            println!("iterations={}", outcome.report.iterations);
            println!("observed_ratio={}", cli::format_number(outcome.report.observed_ratio));
            println!("residual_differential={}", cli::format_number(outcome.residual.differential));
            println!("solution={}", outcome.solution_path.display());
            println!("report={}", outcome.report_path.display());
        }
        Command::Certify(common) => print!("{}", cli::cmd_certify(&load(&common)?)?),
        Command::Green { common, mt, ms } => {
            let path = cli::cmd_green(&load(&common)?, mt, ms)?;
            println!("green={}", path.display());
        }
        Command::Example => print!("{}", cli::cmd_example()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let threads = std::env::var("FRACBVP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Diverged(fracbvp::Error::Diverged { report, .. }) = &e {
                eprintln!("diffs={:?}", report.diffs);
            }
            ExitCode::from(e.exit_code())
        }
    }
}
