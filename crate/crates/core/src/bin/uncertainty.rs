use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use uncertainty::commands::{
    cmd_axioms, cmd_entropy, cmd_haar_verify, cmd_totalinfo, AxiomsOptions, EntropyOptions,
    HaarVerifyOptions, TotalInfoOptions, EXIT_CHECK_FAILED, EXIT_OK,
};
use uncertainty::haar::DEFAULT_SAMPLES;

#[derive(Parser)]
#[command(version, about = "Entropy, total information and Haar-average checks")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shannon/von Neumann entropy and volume of a distribution or density file.
    Entropy {
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Total information and inverse participation ratio of a density file.
    Totalinfo {
        file: PathBuf,
        /// Check the mutually-unbiased-basis identities (prime dimensions only).
        #[arg(long)]
        mub: bool,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Monte Carlo check of the Haar-average identity and fourth moment.
    HaarVerify {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Density file; defaults to |0><0| of dimension --dim.
        #[arg(long)]
        density: Option<PathBuf>,
        /// Sample on this many workers (not bit-reproducible).
        #[arg(long, num_args = 0..=1, default_missing_value = "0")]
        parallel: Option<usize>,
    },
    /// Grouping axiom and volume postulate checks.
    Axioms {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Distribution file used as a mixture component (repeatable).
        #[arg(long = "component")]
        components: Vec<PathBuf>,
        /// Comma-separated mixing weights for the components.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Entropy { file, tol } => cmd_entropy(&file, &EntropyOptions { tol }),
        Command::Totalinfo { file, mub, tol } => {
            cmd_totalinfo(&file, &TotalInfoOptions { mub, tol })
        }
        Command::HaarVerify {
            dim,
            samples,
            seed,
            density,
            parallel,
        } => cmd_haar_verify(&HaarVerifyOptions {
            dim,
            samples,
            seed,
            density,
            parallel: parallel.map(|w| {
                if w == 0 {
                    rayon::current_num_threads()
                } else {
                    w
                }
            }),
        }),
        Command::Axioms {
            trials,
            seed,
            components,
            weights,
            tol,
        } => cmd_axioms(&AxiomsOptions {
            trials,
            seed,
            components,
            weights,
            tol,
        }),
    };
    match result {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(if report.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            } as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
