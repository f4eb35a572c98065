use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use privsynth_cli::commands;
use privsynth_cli::config::{DirectionName, MethodName, OutputFormat, RunConfig};
use privsynth_cli::error::{CliError, Result};

/// Privacy-preserving synthetic tabular data: cohort simulation, SMOTE and
/// KDE-KNN generation, DCR privacy audits, and utility experiments.
#[derive(Debug, Parser)]
#[command(name = "privsynth", version, max_term_width = 100)]
struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed for all randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (default: $PRIVSYNTH_OUT or ./privsynth-out).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads; 1 is strictly sequential with identical output.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Stdout rendering of reports.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Name of the label column in CSV files.
    #[arg(long, global = true, value_name = "NAME")]
    label_column: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the simulated primary and external cohorts as CSV.
    Simulate,
    /// Generate a synthetic batch from a cohort (CSV input or simulator).
    Generate {
        /// Generation method.
        #[arg(long, value_enum)]
        method: Option<MethodName>,
        /// Input cohort CSV; simulated when omitted.
        #[arg(long, value_name = "CSV")]
        input: Option<PathBuf>,
        /// Per-class targets: "N" for both classes or "N0,N1".
        #[arg(long, value_name = "N[,N]")]
        per_class: Option<String>,
        /// Keep the output in z-scored units instead of raw units.
        #[arg(long)]
        normalized_output: bool,
    },
    /// Distance-to-closest-record privacy audit with real-real baseline.
    Privacy {
        /// Real cohort CSV; simulated when omitted.
        #[arg(long, value_name = "CSV")]
        real: Option<PathBuf>,
        /// Synthetic CSV (raw units); generated in-memory when omitted.
        #[arg(long, value_name = "CSV")]
        synthetic: Option<PathBuf>,
        /// Histogram bin count.
        #[arg(long)]
        bins: Option<usize>,
        /// Probe direction.
        #[arg(long, value_enum)]
        direction: Option<DirectionName>,
    },
    /// Run one of the evaluation protocols (1 = real data, 2 = synthetic
    /// utility, 3 = real/synthetic mixing).
    Experiment {
        /// Which protocol to run.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Primary cohort CSV; simulated when omitted.
        #[arg(long, value_name = "CSV")]
        input: Option<PathBuf>,
        /// External cohort CSV; simulated when omitted.
        #[arg(long, value_name = "CSV")]
        external: Option<PathBuf>,
        /// Per-repeat seeds, comma separated.
        #[arg(long, value_delimiter = ',', value_name = "S,S,...")]
        seeds: Option<Vec<u64>>,
        /// Train fraction of the primary cohort split.
        #[arg(long)]
        train_fraction: Option<f64>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.out_dir = Some(out.clone());
    }
    if let Some(threads) = cli.threads {
        config.threads = threads;
    }
    if let Some(format) = cli.format {
        config.format = format;
    }
    if let Some(label) = &cli.label_column {
        config.label_column = label.clone();
    }
    Ok(config)
}

fn parse_per_class(text: &str) -> Result<[usize; 2]> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("bad per-class count '{s}'")))
    };
    match parts.as_slice() {
        [one] => {
            let n = parse(one)?;
            Ok([n, n])
        }
        [a, b] => Ok([parse(a)?, parse(b)?]),
        _ => Err(CliError::Config(format!(
            "per-class must be 'N' or 'N0,N1', got '{text}'"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = load_config(&cli)?;
    match &cli.command {
        Command::Simulate => commands::cmd_simulate(&config),
        Command::Generate {
            method,
            input,
            per_class,
            normalized_output,
        } => {
            if let Some(m) = method {
                config.generate.method = *m;
            }
            if let Some(text) = per_class {
                let [c0, c1] = parse_per_class(text)?;
                config.generate.per_class0 = c0;
                config.generate.per_class1 = c1;
            }
            if *normalized_output {
                config.generate.normalized_output = true;
            }
            commands::cmd_generate(&config, input.as_deref())
        }
        Command::Privacy {
            real,
            synthetic,
            bins,
            direction,
        } => {
            if let Some(bins) = bins {
                config.privacy.bins = *bins;
            }
            if let Some(direction) = direction {
                config.privacy.direction = *direction;
            }
            commands::cmd_privacy(&config, real.as_deref(), synthetic.as_deref())
        }
        Command::Experiment {
            which,
            input,
            external,
            seeds,
            train_fraction,
        } => {
            if let Some(seeds) = seeds {
                config.experiment.seeds = seeds.clone();
            }
            if let Some(fraction) = train_fraction {
                config.experiment.train_fraction = *fraction;
            }
            commands::cmd_experiment(&config, *which, input.as_deref(), external.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
