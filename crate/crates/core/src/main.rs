use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use reulab::lab::{self, exit, ExecStatus};
use reulab::verify::{reports_to_csv, LemmaSuite};

#[derive(Parser)]
#[command(name = "reulab", version, about = "Rotating Euler spectral laboratory")]
struct Cli {
    /// Worker threads for parallel sweeps and ensembles.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file.
    Run {
        config: PathBuf,
        /// Overwrite an existing run directory.
        #[arg(long)]
        force: bool,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a run directory and print its headline table.
    Report { dir: PathBuf },
    /// Run the built-in inequality verifiers and print the constants as CSV.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn fail(err: reulab::LabError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(lab::exit_code(&err) as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(exit::USAGE as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(exit::RUNTIME as u8);
        }
    }

    match cli.command {
        Command::Run { config, force, seed } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return ExitCode::from(exit::USAGE as u8);
                }
            };
            let mut spec = match lab::parse_config(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return ExitCode::from(lab::exit_code(&e) as u8);
                }
            };
            if let Some(s) = seed {
                spec.seed = s;
            }
            match lab::execute(&spec, force) {
                Ok(run) => {
                    print!("{}", run.report);
                    println!("artifacts: {}", run.dir.display());
                    match run.status {
                        ExecStatus::Ok => ExitCode::SUCCESS,
                        ExecStatus::Aborted(msg) => {
                            eprintln!("aborted: {msg}");
                            ExitCode::from(exit::RUNTIME as u8)
                        }
                    }
                }
                Err(e) => fail(e),
            }
        }
        Command::Report { dir } => match lab::report(&dir) {
            Ok(r) => {
                print!("{}", r.text);
                if r.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(exit::VALIDATION as u8)
                }
            }
            Err(e) => fail(e),
        },
        Command::Verify { seed } => {
            let suite = LemmaSuite { seed: seed.unwrap_or(LemmaSuite::default().seed), ..Default::default() };
            match suite.run() {
                Ok(reports) => {
                    print!("{}", reports_to_csv(&reports));
                    if reports.iter().all(|r| r.is_finite()) {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(exit::RUNTIME as u8)
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}
