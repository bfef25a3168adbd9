use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use quasiperc_cli::{run, ExperimentConfig, RunError};

/// Quantum walks and quantum percolation on square and quasicrystal patches.
///
/// Every option may also be given in a `--config` file as `key = value`
/// (e.g. `t-stop = 100`); flags win over the file.
#[derive(Parser, Debug)]
#[command(name = "quasiperc", version, allow_negative_numbers = true)]
struct Cli {
    /// Flat key-value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// dump-distribution | timeseries | sweep | patch-export
    #[arg(long)]
    mode: Option<String>,
    /// square | ammann-beenker | penrose
    #[arg(long)]
    family: Option<String>,
    /// Square side length.
    #[arg(long)]
    size: Option<String>,
    /// Substitution steps for quasicrystal patches.
    #[arg(long)]
    iterations: Option<String>,
    /// center, vertex:<id>, or an interior vertex class label.
    #[arg(long)]
    origin: Option<String>,
    /// Hop radius of the test zone.
    #[arg(long)]
    zone: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Escape mass at or above which a trial counts as percolated.
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    t_start: Option<String>,
    /// Last sample time; sweeps are evaluated here.
    #[arg(long)]
    t_stop: Option<String>,
    #[arg(long)]
    t_step: Option<String>,
    /// Comma-separated edge removal fractions.
    #[arg(long)]
    fractions: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Base seed for per-trial disorder.
    #[arg(long)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let pairs: [(&str, Option<String>); 15] = [
            ("mode", self.mode.clone()),
            ("family", self.family.clone()),
            ("size", self.size.clone()),
            ("iterations", self.iterations.clone()),
            ("origin", self.origin.clone()),
            ("zone", self.zone.clone()),
            ("gamma", self.gamma.clone()),
            ("threshold", self.threshold.clone()),
            ("t-start", self.t_start.clone()),
            ("t-stop", self.t_stop.clone()),
            ("t-step", self.t_step.clone()),
            ("fractions", self.fractions.clone()),
            ("trials", self.trials.clone()),
            ("seed", self.seed.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v)))
            .collect()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = ExperimentConfig::load(cli.config.as_deref(), &cli.flags())
        .map_err(RunError::from)
        .and_then(|cfg| run(&cfg));
    match result {
        Ok(summary) => {
            println!(
                "{}",
                summary.out_dir.join(quasiperc_cli::run::MANIFEST).display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
