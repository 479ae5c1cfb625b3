//! `scarlab` — build partially integrable scarred spin chains, verify
//! their algebra, and emit spectral/entanglement data files.

mod config;
mod pipeline;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scarlab", version, about = "Spin-helix scar model toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the analyses requested in a JSON config, writing artifacts
    /// and a manifest into its output directory.
    Run {
        /// Path to the run configuration (JSON).
        config: PathBuf,
    },
    /// Check the Temperley-Lieb relations of the deformed XXC density.
    VerifyTl {
        /// Local dimension N.
        #[arg(long)]
        n: usize,
        /// Size of the label set A (labels 1..=na); the rest form B.
        #[arg(long, default_value_t = 1)]
        na: usize,
        /// Anisotropy angle as a rational multiple of pi, e.g. "1/3".
        #[arg(long)]
        gamma: String,
    },
    /// Solve for extensive local Hermitian annihilators of a projector.
    SolveAnnihilators {
        /// Projector as LocalOperator JSON ({d, k, entries}).
        #[arg(long)]
        projector: PathBuf,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic entanglement-entropy scaling of scar states.
    EntropyScaling {
        /// Occupation fractions, e.g. "1/3,1/3,1/3".
        #[arg(long)]
        fractions: String,
        /// Largest chain length (doublings of 12 up to this value).
        #[arg(long, default_value_t = 3072)]
        lmax: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_rational(text: &str) -> Result<(i64, i64), String> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse(), d.trim().parse()),
        None => (text.trim().parse(), Ok(1)),
    };
    match (num, den) {
        (Ok(n), Ok(d)) if d != 0 => Ok((n, d)),
        _ => Err(format!("cannot parse '{text}' as p/q")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config } => pipeline::run(&config),
        Command::VerifyTl { n, na, gamma } => match parse_rational(&gamma) {
            Ok(g) => pipeline::verify_tl_command(n, na, g),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Command::SolveAnnihilators { projector, out } => {
            pipeline::solve_annihilators_command(&projector, out.as_deref())
        }
        Command::EntropyScaling { fractions, lmax, out } => {
            pipeline::entropy_scaling_command(&fractions, lmax, out.as_deref())
        }
    };
    ExitCode::from(code as u8)
}
