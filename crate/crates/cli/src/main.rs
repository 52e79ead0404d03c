use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cocktail_cli::{run, Command, RunConfig, Scheme};

#[derive(Parser, Debug)]
#[command(
    name = "cocktail",
    version,
    about = "Achievable-rate datasets for cocktail BPSK and conventional modulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Lower grid end (dB for fig1, linear SNR otherwise)
    #[arg(long, global = true, allow_negative_numbers = true)]
    snr_min: Option<f64>,
    /// Upper grid end (dB for fig1, linear SNR otherwise)
    #[arg(long, global = true, allow_negative_numbers = true)]
    snr_max: Option<f64>,
    /// Number of grid points, at least 2
    #[arg(long, global = true)]
    snr_points: Option<usize>,
    /// Comma-separated beta/alpha ratios in (0, 1)
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    ratios: Option<Vec<f64>>,
    /// Gauss-Hermite order
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    /// Monte Carlo samples per oracle pair (verify)
    #[arg(long, global = true)]
    mc_samples: Option<u64>,
    /// Seed for every random stream
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output CSV path; standard output when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Rates of BPSK, QPSK, 8PSK, 4ASK and capacity versus Eb/N0 in dB
    Fig1,
    /// Cocktail BPSK stream rates versus linear E_in/sigma_N^2
    Fig2a,
    /// Cocktail BPSK rates with Eb/N0 in dB
    Fig2b,
    /// Cocktail rate minus capacity versus linear E_in/sigma_N^2
    Fig3a,
    /// Cocktail rate minus capacity with Eb/N0 in dB
    Fig3b,
    /// BPSK rate and its derivative versus gamma
    Fig4,
    /// Rate of one scheme on a linear-SNR grid
    Sweep {
        #[arg(long, value_enum, default_value_t = SchemeArg::Bpsk)]
        scheme: SchemeArg,
    },
    /// Run the acceptance checks and write a pass/fail table
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SchemeArg {
    Bpsk,
    Qpsk,
    Psk8,
    Ask4,
    Capacity,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Bpsk => Scheme::Bpsk,
            SchemeArg::Qpsk => Scheme::Qpsk,
            SchemeArg::Psk8 => Scheme::Psk8,
            SchemeArg::Ask4 => Scheme::Ask4,
            SchemeArg::Capacity => Scheme::Capacity,
        }
    }
}

fn config(cli: Cli) -> RunConfig {
    let command = match cli.command {
        Cmd::Fig1 => Command::Fig1,
        Cmd::Fig2a => Command::Fig2a,
        Cmd::Fig2b => Command::Fig2b,
        Cmd::Fig3a => Command::Fig3a,
        Cmd::Fig3b => Command::Fig3b,
        Cmd::Fig4 => Command::Fig4,
        Cmd::Sweep { .. } => Command::Sweep,
        Cmd::Verify => Command::Verify,
    };
    let mut cfg = RunConfig::new(command);
    if let Cmd::Sweep { scheme } = cli.command {
        cfg.scheme = scheme.into();
    }
    if let Some(v) = cli.snr_min {
        cfg.grid.min = v;
    }
    if let Some(v) = cli.snr_max {
        cfg.grid.max = v;
    }
    if let Some(v) = cli.snr_points {
        cfg.grid.points = v;
    }
    if let Some(v) = cli.ratios {
        cfg.ratios = v;
    }
    if let Some(v) = cli.quad_order {
        cfg.quad_order = v;
    }
    if let Some(v) = cli.mc_samples {
        cfg.mc_samples = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    cfg.out = cli.out;
    cfg
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&config(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cocktail: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
