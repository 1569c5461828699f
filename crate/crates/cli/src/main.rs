use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qtl_cli::run::{format_property, run_bounds, run_risk_curve, run_shift_sweep, run_validate};
use qtl_cli::{CliError, ExperimentConfig, Result};

#[derive(Parser)]
#[command(name = "qtl", version, about = "Quantum transfer-learning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Excess risk and bounds against N^T for each N^S series.
    RiskCurve(Common),
    /// Transfer excess risk as the target means shift.
    ShiftSweep(Common),
    /// Per-term bound table.
    Bounds(Common),
    /// Cross-module property suites.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Reduced case counts.
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true)]
        corrupt_helstrom: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Config file, or a preset name (fig2, fig3).
    #[arg(long)]
    config: Option<String>,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, 0 = one per core.
    #[arg(long, env = "QTL_THREADS", default_value_t = 0)]
    threads: usize,
}

impl Common {
    fn load(&self) -> Result<(ExperimentConfig, u64, PathBuf)> {
        let name = self.config.as_deref().ok_or_else(|| CliError::Config {
            field: "--config".into(),
            message: "a config file or preset name is required".into(),
        })?;
        let cfg = ExperimentConfig::load(name)?;
        let seed = self.seed.unwrap_or(cfg.seed);
        let out = self.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
        Ok((cfg, seed, out))
    }
}

fn set_threads(n: usize) {
    // Only fails if a pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

fn execute(cli: Cli) -> Result<bool> {
    let files = match &cli.command {
        Command::RiskCurve(c) | Command::ShiftSweep(c) | Command::Bounds(c) => {
            set_threads(c.threads);
            let (cfg, seed, out) = c.load()?;
            match cli.command {
                Command::RiskCurve(_) => run_risk_curve(&cfg, seed, &out)?,
                Command::ShiftSweep(_) => run_shift_sweep(&cfg, seed, &out)?,
                _ => run_bounds(&cfg, seed, &out)?,
            }
        }
        Command::Validate { common, quick, corrupt_helstrom } => {
            set_threads(common.threads);
            let seed = match (&common.seed, &common.config) {
                (Some(s), _) => *s,
                (None, Some(_)) => common.load()?.1,
                (None, None) => 0,
            };
            let results = run_validate(seed, *quick, *corrupt_helstrom)?;
            for r in &results {
                println!("{}", format_property(r));
            }
            let failed = results.iter().filter(|r| !r.passed()).count();
            println!("{} of {} property families passed", results.len() - failed, results.len());
            return Ok(failed == 0);
        }
    };
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
