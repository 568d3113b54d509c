use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dtqw_cli::commands::{self, RunOpts};
use dtqw_cli::config::{
    load_config, resolve_phi, EmulateConfig, EmulateFile, EvolveConfig, EvolveFile, InheritedRun,
    LoopSpec, SweepFile,
};
use dtqw_cli::CliError;

#[derive(Parser)]
#[command(
    name = "dtqw",
    version,
    about = "Discrete-time quantum walk simulator with polarization-dependent loss"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one walk; writes distribution.csv, summary.csv, distribution.svg
    Evolve(EvolveArgs),
    /// Run a (theta x phi) or (theta x gamma) grid; writes sweep.csv and a chart
    Sweep(SweepArgs),
    /// Print threshold intervals extracted from a sweep CSV
    Thresholds(ThresholdsArgs),
    /// Emulate the photon-counting measurement and reconstruct the coin state
    Emulate(EmulateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config document; a previously written manifest.json also works
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread cap (0 = automatic)
    #[arg(long)]
    threads: Option<usize>,
}

impl CommonArgs {
    fn run_opts(&self, inherited: InheritedRun) -> Result<RunOpts, CliError> {
        Ok(RunOpts {
            out: self
                .out
                .clone()
                .ok_or_else(|| CliError::usage("--out <dir> is required"))?,
            seed: self.seed.or(inherited.seed).unwrap_or(0),
            threads: self.threads.or(inherited.threads).unwrap_or(0),
        })
    }
}

#[derive(Args)]
struct EvolveArgs {
    /// Coin angle in degrees, [0, 180]
    #[arg(long)]
    theta: Option<f64>,
    /// Initial-state angle in radians, [0, pi]
    #[arg(long)]
    phi: Option<f64>,
    /// Initial-state angle as a multiple of pi (alternative to --phi)
    #[arg(long = "phi-over-pi")]
    phi_over_pi: Option<f64>,
    /// Loss parameter, >= 0
    #[arg(long)]
    gamma: Option<f64>,
    /// Step count
    #[arg(long)]
    steps: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ThresholdsArgs {
    /// Sweep CSV produced by `dtqw sweep`
    #[arg(long)]
    input: PathBuf,
    /// Column to threshold: s_e or ipr
    #[arg(long)]
    quantity: String,
    /// Threshold value
    #[arg(long, allow_negative_numbers = true)]
    threshold: f64,
    /// above or below
    #[arg(long)]
    direction: String,
}

#[derive(Args)]
struct EmulateArgs {
    /// Coin angle in degrees, [0, 180]
    #[arg(long)]
    theta: Option<f64>,
    /// Initial-state angle in radians, [0, pi]
    #[arg(long)]
    phi: Option<f64>,
    /// Initial-state angle as a multiple of pi (alternative to --phi)
    #[arg(long = "phi-over-pi")]
    phi_over_pi: Option<f64>,
    /// Loss value(s); comma-separated list sweeps the loss dial
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    /// Step count
    #[arg(long)]
    steps: Option<usize>,
    /// Injected photons per run
    #[arg(long)]
    n0: Option<f64>,
    /// Independent runs per basis for error estimation
    #[arg(long)]
    repeats: Option<usize>,
    /// Completion rule for Im(chi): oracle or zero
    #[arg(long = "im-chi")]
    im_chi: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve(args) => run_evolve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Thresholds(args) => {
            commands::cmd_thresholds(&args.input, &args.quantity, args.threshold, args.direction.as_str())
        }
        Command::Emulate(args) => run_emulate(args),
    }
}

fn run_evolve(args: EvolveArgs) -> Result<(), CliError> {
    let (file, inherited) = match &args.common.config {
        Some(path) => load_config::<EvolveFile>(path, "evolve")?,
        None => (EvolveFile::default(), InheritedRun::default()),
    };
    let flag_phi = resolve_phi(args.phi, args.phi_over_pi)?;
    let file_phi = resolve_phi(file.phi, file.phi_over_pi)?;
    let cfg = EvolveConfig {
        theta: args
            .theta
            .or(file.theta)
            .ok_or_else(|| CliError::usage("--theta is required (flag or config)"))?,
        phi: flag_phi.or(file_phi).unwrap_or(0.0),
        gamma: args.gamma.or(file.gamma).unwrap_or(0.0),
        steps: args.steps.or(file.steps).unwrap_or(16),
    };
    let opts = args.common.run_opts(inherited)?;
    commands::cmd_evolve(&cfg, &opts)
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let path = args
        .common
        .config
        .as_ref()
        .ok_or_else(|| CliError::usage("--config <json> is required for sweep"))?;
    let (file, inherited) = load_config::<SweepFile>(path, "sweep")?;
    let cfg = file.resolve()?;
    let opts = args.common.run_opts(inherited)?;
    commands::cmd_sweep(&cfg, &opts)
}

fn run_emulate(args: EmulateArgs) -> Result<(), CliError> {
    let (file, inherited) = match &args.common.config {
        Some(path) => load_config::<EmulateFile>(path, "emulate")?,
        None => (EmulateFile::default(), InheritedRun::default()),
    };
    let flag_phi = resolve_phi(args.phi, args.phi_over_pi)?;
    let file_phi = resolve_phi(file.phi, file.phi_over_pi)?;
    let loop_spec = file.loop_spec.unwrap_or_default();
    let gammas = args
        .gamma
        .or(file.gammas)
        .unwrap_or_else(|| vec![loop_spec.gamma]);
    let cfg = EmulateConfig {
        theta: args
            .theta
            .or(file.theta)
            .ok_or_else(|| CliError::usage("--theta is required (flag or config)"))?,
        phi: flag_phi.or(file_phi).unwrap_or(0.0),
        gammas,
        steps: args.steps.or(file.steps).unwrap_or(16),
        repeats: args.repeats.or(file.repeats).unwrap_or(10),
        im_chi: args
            .im_chi
            .or(file.im_chi)
            .unwrap_or_else(|| "oracle".to_string()),
        loop_spec: LoopSpec {
            n0: args.n0.or(file.n0).unwrap_or(loop_spec.n0),
            ..loop_spec
        },
    };
    let opts = args.common.run_opts(inherited)?;
    commands::cmd_emulate(&cfg, &opts)
}
