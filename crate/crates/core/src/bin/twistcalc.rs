//! `twistcalc <command> <file> [--json] [--refined]`
//!
//! Exit status: 0 when the answer is decided, 2 when it is undecided or
//! inconclusive, 1 on any error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twistcalc::dsl::{parse, run, Command, Options, SurfaceOp};

#[derive(Parser)]
#[command(
    name = "twistcalc",
    version,
    about = "Twisted canonical divisors, spin parity and flat surgeries"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Print the report as JSON instead of `key = value` lines.
    #[arg(long, global = true)]
    json: bool,
    /// Use the sharper dimension bound in `dim`.
    #[arg(long, global = true)]
    refined: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Twisted-canonical check and smoothability verdict.
    Check { file: PathBuf },
    /// Integral twist, node twists and polarity.
    Twist { file: PathBuf },
    /// Limit spin structure and its parity.
    Spin { file: PathBuf },
    /// Stratum dimension, genus and components.
    Dim { file: PathBuf },
    /// Genus-three case catalog.
    Genus3 { file: PathBuf },
    /// Limit Weierstrass test on an elliptic chain.
    Chain { file: PathBuf },
    /// Flat surface data and surgeries.
    Surface { op: Op, file: PathBuf },
    /// Print the document in canonical form.
    Print { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Singularities,
    Slit,
    Plumb,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, file) = match &cli.command {
        Cmd::Check { file } => (Some(Command::Check), file),
        Cmd::Twist { file } => (Some(Command::Twist), file),
        Cmd::Spin { file } => (Some(Command::Spin), file),
        Cmd::Dim { file } => (Some(Command::Dim), file),
        Cmd::Genus3 { file } => (Some(Command::Genus3), file),
        Cmd::Chain { file } => (Some(Command::Chain), file),
        Cmd::Surface { op, file } => {
            let op = match op {
                Op::Singularities => SurfaceOp::Singularities,
                Op::Slit => SurfaceOp::Slit,
                Op::Plumb => SurfaceOp::Plumb,
            };
            (Some(Command::Surface(op)), file)
        }
        Cmd::Print { file } => (None, file),
    };
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(1);
        }
    };
    let doc = match parse(&text) {
        Ok(d) => d,
        Err(errs) => {
            for e in errs.0 {
                eprintln!("{}:{e}", file.display());
            }
            return ExitCode::from(1);
        }
    };
    let Some(command) = command else {
        print!("{doc}");
        return ExitCode::SUCCESS;
    };
    match run(&doc, command, Options { refined: cli.refined }) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            ExitCode::from(1)
        }
    }
}
