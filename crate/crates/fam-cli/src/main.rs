use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fam_cli::corpus::{corpus_dir, run_corpus};
use fam_cli::scenario::{load_scenario, run_scenario, RunOptions};
use fam_cli::suites::{run_suite, SUITE_NAMES};
use fam_core::MarkovOperator;

/// Exact workbench for finitely additive Markov chains.
#[derive(Parser)]
#[command(name = "fam", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print its report.
    Run {
        file: PathBuf,
        /// Seed for the randomized scenario checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Drop the timing field so reports are byte-reproducible.
        #[arg(long)]
        omit_timing: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized property suite.
    Suite {
        /// One of the known suite names.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of generated instances.
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate a scenario's chain and export the norm trace.
    Trace {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TraceFormat::Csv)]
        format: TraceFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every golden scenario in the corpus directory.
    Corpus {
        /// Corpus directory (falls back to FAM_CORPUS_DIR, then the shipped
        /// corpus).
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        omit_timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Csv,
    Json,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            file,
            seed,
            omit_timing,
            out,
        } => {
            let scenario = load_scenario(&file)?;
            let report = run_scenario(
                &scenario,
                RunOptions {
                    seed,
                    include_timing: !omit_timing,
                },
            )?;
            emit(&report.render(), out.as_ref())?;
            Ok(report.all_pass())
        }
        Command::Suite {
            name,
            seed,
            count,
            out,
        } => {
            if !SUITE_NAMES.contains(&name.as_str()) {
                anyhow::bail!(
                    "unknown suite {name:?}; known suites: {}",
                    SUITE_NAMES.join(", ")
                );
            }
            let outcome = run_suite(&name, seed, count)?;
            emit(&outcome.render(), out.as_ref())?;
            Ok(outcome.all_pass())
        }
        Command::Trace { file, format, out } => {
            let scenario = load_scenario(&file)?;
            let kernel = scenario.kernel.to_kernel()?;
            let operator = MarkovOperator::new(kernel, &scenario.filters)?;
            let trace = operator.iterate(&scenario.initial, scenario.n_max, 4)?;
            let text = match format {
                TraceFormat::Csv => trace.to_csv(),
                TraceFormat::Json => {
                    let mut value = trace.to_json();
                    value["h_conditions"] = serde_json::json!({
                        "h1": operator.check_h1()?.label(),
                        "h2": operator.check_h2()?.label(),
                    });
                    let mut text = serde_json::to_string_pretty(&value)?;
                    text.push('\n');
                    text
                }
            };
            emit(&text, out.as_ref())?;
            Ok(true)
        }
        Command::Corpus {
            dir,
            seed,
            omit_timing,
            out,
        } => {
            let dir = corpus_dir(dir.as_deref());
            let outcome = run_corpus(
                &dir,
                RunOptions {
                    seed,
                    include_timing: !omit_timing,
                },
            )?;
            emit(&outcome.render(), out.as_ref())?;
            Ok(outcome.all_pass())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
