use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flyq::cli::{run_scenario, sweep_scenario, write_figure_bundle, ScenarioConfig, SweepParam};
use flyq::Error;

#[derive(Parser)]
#[command(
    name = "flyq",
    version,
    about = "Entanglement transfer to flying qubits through driven leaky cavities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the master seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for ensembles (0 = all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one scenario and write its curve as CSV
    Run(CommonArgs),
    /// Re-run a scenario over a parameter grid and tabulate the final
    /// negativity and discord
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Parameter to vary: alpha, omega0, T, V or g
        #[arg(long)]
        param: String,
        /// First grid value
        #[arg(long)]
        from: f64,
        /// Last grid value (inclusive up to rounding)
        #[arg(long)]
        to: f64,
        /// Grid step
        #[arg(long)]
        step: f64,
    },
    /// Emit the bundled scenario files
    Figures {
        /// Output directory for the scenario files
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn setup_threads(threads: usize) {
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn grid_points(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Error> {
    if step <= 0.0 {
        return Err(Error::Config(format!("step must be positive, got {step}")));
    }
    if to < from {
        return Err(Error::Config(format!(
            "grid end {to} lies before its start {from}"
        )));
    }
    let mut grid = Vec::new();
    let mut k = 0u32;
    loop {
        let v = from + step * k as f64;
        if v > to + 0.5 * step {
            break;
        }
        grid.push(v.min(to));
        k += 1;
    }
    Ok(grid)
}

fn execute() -> Result<(), Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(common) => {
            setup_threads(common.threads);
            let mut cfg = ScenarioConfig::load(&common.config)?;
            if let Some(seed) = common.seed {
                cfg.mc.master_seed = seed;
            }
            let output = run_scenario(&cfg)?;
            let path = output.write_to(&common.out)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Sweep {
            common,
            param,
            from,
            to,
            step,
        } => {
            setup_threads(common.threads);
            let mut cfg = ScenarioConfig::load(&common.config)?;
            if let Some(seed) = common.seed {
                cfg.mc.master_seed = seed;
            }
            let param: SweepParam = param.parse()?;
            let grid = grid_points(from, to, step)?;
            let output = sweep_scenario(&cfg, param, &grid)?;
            for line in output.main.1.lines() {
                if let Some(argmax) = line.strip_prefix("# argmax: ") {
                    println!("argmax: {argmax}");
                }
            }
            let path = output.write_to(&common.out)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Figures { out } => {
            for path in write_figure_bundle(&out)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                Error::Truncation(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
