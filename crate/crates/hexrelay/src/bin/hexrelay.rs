//! Command-line front end for the experiment catalog.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use hexrelay::{
    load_config, run_experiment, DfMode, ExperimentName, ScenarioConfig, Sector, SirBackend,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
    All,
}

impl From<ExperimentArg> for ExperimentName {
    fn from(value: ExperimentArg) -> Self {
        match value {
            ExperimentArg::Fig5 => ExperimentName::Fig5,
            ExperimentArg::Fig6 => ExperimentName::Fig6,
            ExperimentArg::Fig7 => ExperimentName::Fig7,
            ExperimentArg::Fig8 => ExperimentName::Fig8,
            ExperimentArg::Fig9 => ExperimentName::Fig9,
            ExperimentArg::Fig10 => ExperimentName::Fig10,
            ExperimentArg::Fig11 => ExperimentName::Fig11,
            ExperimentArg::Fig12 => ExperimentName::Fig12,
            ExperimentArg::All => ExperimentName::All,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Closed,
    Geometric,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DfModeArg {
    Eq20,
    Minrate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[clap(rename_all = "lower")]
enum SectorArg {
    #[clap(name = "0")]
    Full,
    #[clap(name = "60")]
    Deg60,
    #[clap(name = "120")]
    Deg120,
}

/// Relay-cell experiment runner: sweeps SIR, band split, placement and
/// outage curves into CSV files.
#[derive(Debug, Parser)]
#[command(name = "hexrelay", version, about)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: ExperimentArg,

    /// Scenario file (flat `key = value`); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory for the CSV files.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Override the random seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the SIR backend.
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,

    /// Override the decode-and-forward outage composition.
    #[arg(long = "df-mode", value_enum)]
    df_mode: Option<DfModeArg>,

    /// Override the sector width in degrees (0 disables sectoring).
    #[arg(long, value_enum)]
    sector: Option<SectorArg>,

    /// Override the Monte Carlo sample count.
    #[arg(long)]
    samples: Option<u64>,
}

fn run(cli: Cli) -> hexrelay::Result<Vec<PathBuf>> {
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(backend) = cli.backend {
        config.sir_backend = match backend {
            BackendArg::Closed => SirBackend::ClosedForm,
            BackendArg::Geometric => SirBackend::Geometric,
        };
    }
    if let Some(mode) = cli.df_mode {
        config.df_mode = match mode {
            DfModeArg::Eq20 => DfMode::Eq20,
            DfModeArg::Minrate => DfMode::MinRate,
        };
    }
    if let Some(sector) = cli.sector {
        config.sector = match sector {
            SectorArg::Full => Sector::None,
            SectorArg::Deg60 => Sector::Deg60,
            SectorArg::Deg120 => Sector::Deg120,
        };
    }
    if let Some(samples) = cli.samples {
        config.n_samples = samples;
    }
    config.validate()?;
    run_experiment(cli.experiment.into(), &config, &cli.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hexrelay: {e}");
            ExitCode::FAILURE
        }
    }
}
