//! `uci`: encode and decode integer streams, inspect code lengths and
//! Kraft sums, measure expansion ratios and run the bound verifier.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on a
//! usage or input error.

mod commands;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uci_core::CodeId;

#[derive(Parser)]
#[command(
    name = "uci",
    version,
    about = "Universal codes for the positive integers"
)]
struct Cli {
    /// Decimal digits carried by exact ratio computations.
    #[arg(long, global = true, env = "UCI_PRECISION_DIGITS", default_value_t = 40,
          value_parser = clap::value_parser!(u16).range(1..=2000))]
    digits: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode integers into a container file (or standard output).
    Encode {
        #[arg(long)]
        code: CodeId,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Integers to encode; read whitespace-separated from standard
        /// input when absent.
        values: Vec<String>,
    },
    /// Decode a container and print its integers.
    Decode {
        /// Container file; standard input when absent or `-`.
        input: Option<PathBuf>,
    },
    /// Print codeword lengths (or codewords) of integers.
    Lengths {
        /// Codes to tabulate; all four universal codes when absent.
        #[arg(long = "code")]
        codes: Vec<CodeId>,
        /// Show codewords instead of lengths.
        #[arg(long)]
        codewords: bool,
        #[arg(long)]
        json: bool,
        #[arg(required = true)]
        values: Vec<String>,
    },
    /// Exact Kraft sums through a block, with the exact remaining tail.
    KraftCheck {
        #[arg(long)]
        code: CodeId,
        /// Last block summed explicitly; 84 by default (16 for alpha).
        #[arg(long)]
        through_block: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Average length, entropy and expansion ratio under a distribution.
    Analyze {
        /// Codes to analyse; all four universal codes when absent.
        #[arg(long = "code")]
        codes: Vec<CodeId>,
        /// `explicit:p1,p2,...`, `spike:p1,m`, `geom:r,N` or `zipf:s,N`.
        #[arg(long)]
        dist: uci_core::Distribution,
        #[arg(long)]
        json: bool,
    },
    /// Check the case analyses, zero points and lemmas behind the
    /// expansion factors of delta_delta and nu.
    VerifyBounds {
        /// `delta_delta` or `nu`; both when absent.
        #[arg(long)]
        code: Option<CodeId>,
        #[arg(long, default_value_t = 1e-4)]
        grid_step: f64,
        /// Random decreasing distributions for the probability lemmas.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every published figure and print it beside the
    /// published value.
    Repro,
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let digits = cli.digits as usize;
    match cli.command {
        Command::Encode { code, out, values } => commands::encode(code, out.as_deref(), &values),
        Command::Decode { input } => commands::decode(input.as_deref()),
        Command::Lengths {
            codes,
            codewords,
            json,
            values,
        } => commands::lengths(&codes, codewords, json, &values),
        Command::KraftCheck {
            code,
            through_block,
            json,
        } => commands::kraft_check(code, through_block, json),
        Command::Analyze { codes, dist, json } => commands::analyze(&codes, &dist, digits, json),
        Command::VerifyBounds {
            code,
            grid_step,
            trials,
            seed,
            json,
        } => commands::verify_bounds(code, grid_step, trials, seed, json),
        Command::Repro => repro::run(digits),
    }
}

fn main() -> ExitCode {
    // exit quietly when the reader of standard output goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("uci: {e:#}");
            ExitCode::from(2)
        }
    }
}
