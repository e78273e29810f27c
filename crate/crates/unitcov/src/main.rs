use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use unitcov::run::{parse_epsilon, Caps, Command, JobConfig};

/// Exact realisability tools for unit covariances of binary random fields.
///
/// Exit codes: 0 affirmative, 1 self-check failure, 2 input or io error,
/// 3 separated / outside / negative, 4 screen violation, 5 resource cap.
#[derive(Parser)]
#[command(name = "unitcov", version)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide realisability; emit a mixture or a separating hyperplane.
    Check { file: PathBuf },
    /// Emit a mixture with at most d_N + 1 atoms.
    Decompose { file: PathBuf },
    /// Screen with the integer quadratic inequalities up to a max-norm bound.
    Screen {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        bound: u32,
        /// Only vectors admitting a signing with sum 1.
        #[arg(long)]
        en_only: bool,
    },
    /// Enumerate all facets for 3 <= N <= 7.
    Facets {
        n: usize,
        /// Checkpoint file; read if present, rewritten after every insertion.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Annotate each product-form facet with its integer vector.
        #[arg(long)]
        matheron: bool,
        /// Stop after this many insertions (exit 5); continue with --resume.
        #[arg(long)]
        max_insertions: Option<usize>,
    },
    /// Decide whether an array is v ⊘ v for a real vector v.
    ProductForm { file: PathBuf },
    /// Check that a normal and offset define a facet.
    VerifyNormal {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Kernel, ball class, facet class and perturbation witness.
    Boundary {
        file: PathBuf,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
    },
    /// List the vertices as JSON lines.
    Vertices { n: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match job(cli).and_then(|cfg| unitcov::run(&cfg, &mut io::stdout().lock())) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("unitcov: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn job(cli: Cli) -> unitcov::Result<JobConfig> {
    let command = match cli.command {
        Cmd::Check { file } => Command::Check { input: file },
        Cmd::Decompose { file } => Command::Decompose { input: file },
        Cmd::Screen {
            file,
            bound,
            en_only,
        } => Command::Screen {
            input: file,
            bound,
            en_only,
        },
        Cmd::Facets {
            n,
            resume,
            matheron,
            max_insertions,
        } => Command::Facets {
            n,
            resume,
            matheron,
            max_insertions,
        },
        Cmd::ProductForm { file } => Command::ProductForm { input: file },
        Cmd::VerifyNormal { file, n } => Command::VerifyNormal { input: file, n },
        Cmd::Boundary { file, epsilon } => Command::Boundary {
            input: file,
            epsilon: parse_epsilon(&epsilon)?,
        },
        Cmd::Vertices { n } => Command::Vertices { n },
    };
    Ok(JobConfig {
        command,
        output: cli.out,
        seed: cli.seed,
        caps: Caps::from_env()?,
    })
}
