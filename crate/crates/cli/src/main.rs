use std::io::{ErrorKind, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gradedgeom::{run_source, Options, DEFAULT_TRUNCATION};
use gradedgeom_core::batch::Mode;
use gradedgeom_core::checks::run_all;

#[derive(Parser)]
#[command(name = "gradedgeom", version, about = "Exact calculus of linear weightings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a script; `-` reads standard input.
    Run {
        file: PathBuf,
        /// Print results as JSON.
        #[arg(long)]
        json: bool,
        /// Truncation order for jets.
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        trunc: usize,
    },
    /// Run the built-in property suites.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Evaluate cases on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

fn read_input(file: &PathBuf) -> std::io::Result<String> {
    if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(file)
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run { file, json, trunc } => {
            let src = match read_input(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let report = match run_source(&src, &Options { truncation: trunc }) {
                Ok(r) => r,
                Err(diags) => {
                    for d in diags {
                        eprintln!("{}", d.render(&src));
                    }
                    return ExitCode::from(2);
                }
            };
            if json {
                emit(&(serde_json::to_string_pretty(&report.json()).expect("serializable") + "\n"));
            } else {
                emit(&report.text());
            }
            for d in report.errors() {
                eprintln!("{}", d.render(&src));
            }
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Check { seed, sequential } => {
            let mode = if sequential {
                Mode::Sequential
            } else {
                Mode::default_mode()
            };
            let reports = run_all(seed, mode);
            emit(&reports.iter().map(|r| format!("{r}\n")).collect::<String>());
            if reports.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
