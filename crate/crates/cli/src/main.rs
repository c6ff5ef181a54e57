use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eotheta_cli::commands::{self, EXIT_SCHEMA};
use eotheta_cli::{Format, Grid, Output};

#[derive(Parser, Debug)]
#[command(name = "eo-theta", version, about = "EO strata, Dieudonne modules and theta operators on formal models")]
struct Cli {
    /// Seed for randomized witnesses; recorded in every report.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of EO strata: shuffles, lengths, p-ranks, weight shifts, closure chains.
    Strata {
        #[arg(long)]
        n: usize,
        /// Emit tables for every rank from --n up to this one.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Verify and classify a Dieudonne module given as JSON.
    Classify { file: PathBuf },
    /// Run the theta identity suite on one formal model.
    ThetaCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = eotheta::theta::DEFAULT_TRUNCATION)]
        trunc: usize,
    },
    /// Apply theta to a section given as JSON.
    ThetaApply { file: PathBuf },
    /// Graded dimensions of filtrations described by a JSON request.
    FiltDims {
        /// Request file; a built-in table is used when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Run every verification suite over the default grid.
    VerifyAll {
        /// Largest rank for the theta suites.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated primes for the theta suites.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<u64>>,
        /// Also use the degree-k extensions of the configured primes.
        #[arg(long, default_value_t = 1)]
        ext_degree: u32,
        #[arg(long)]
        trunc: Option<usize>,
        /// Run the perturbed model through the Frobenius-kill check as an expected failure.
        #[arg(long)]
        negative_control: bool,
    },
}

fn read(path: &PathBuf) -> Result<String, Output> {
    std::fs::read_to_string(path).map_err(|e| Output {
        text: format!("cannot read {}: {e}", path.display()),
        code: EXIT_SCHEMA,
    })
}

fn run(cli: &Cli) -> Output {
    match &cli.command {
        Command::Strata { n, n_max, p } => {
            commands::cmd_strata(*n, n_max.unwrap_or(*n), *p, cli.format.unwrap_or(Format::Csv))
        }
        Command::Classify { file } => match read(file) {
            Ok(text) => commands::cmd_classify(&text),
            Err(o) => o,
        },
        Command::ThetaCheck { n, r, p, trunc } => {
            commands::cmd_theta_check(*n, *r, *p, *trunc, cli.seed, cli.format.unwrap_or(Format::Json))
        }
        Command::ThetaApply { file } => match read(file) {
            Ok(text) => commands::cmd_theta_apply(&text),
            Err(o) => o,
        },
        Command::FiltDims { spec } => match spec.as_ref().map(read).transpose() {
            Ok(text) => commands::cmd_filt_dims(text.as_deref()),
            Err(o) => o,
        },
        Command::VerifyAll {
            n,
            p,
            ext_degree,
            trunc,
            negative_control,
        } => {
            let mut grid = Grid {
                negative_control: *negative_control,
                ..Grid::default()
            }
            .with_ext_degree(*ext_degree);
            if let Some(n) = n {
                grid.theta_n_max = *n;
            }
            if let Some(p) = p {
                grid.theta_primes = p.clone();
            }
            if let Some(t) = trunc {
                grid.trunc = *t;
            }
            commands::cmd_verify_all(&grid, cli.seed, cli.format.unwrap_or(Format::Json))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    let mut text = out.text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_SCHEMA as u8);
            }
        }
        None if out.code == 0 || out.code == 3 => print!("{text}"),
        None => eprint!("{text}"),
    }
    ExitCode::from(out.code as u8)
}
