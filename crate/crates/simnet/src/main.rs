use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zerotwo_sim::{run_scenario, ScenarioOptions, Tape, SCENARIOS};

/// Runs ZeroTwo simulation scenarios and prints their transcripts as JSON lines.
#[derive(Parser)]
#[command(name = "zerotwo-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario, or list them.
    Run {
        #[arg(long, required_unless_present = "list")]
        scenario: Option<String>,
        /// JSON file holding {"seed": N}; a fixed default seed otherwise.
        #[arg(long)]
        tape: Option<PathBuf>,
        #[arg(long)]
        list: bool,
        /// Guesses for the generated-passphrase dictionary scenario.
        #[arg(long, default_value_t = 1_000_000)]
        dictionary_trials: usize,
    },
}

fn main() -> ExitCode {
    let Command::Run { scenario, tape, list, dictionary_trials } = Cli::parse().command;
    if list {
        for s in SCENARIOS {
            println!("{:<32} {}", s.name, s.summary);
        }
        return ExitCode::SUCCESS;
    }
    let tape = match tape.map(|p| Tape::load(&p)).transpose() {
        Ok(t) => t.unwrap_or_default(),
        Err(e) => {
            eprintln!("zerotwo-sim: cannot read tape: {e}");
            return ExitCode::from(2);
        }
    };
    let options = ScenarioOptions { dictionary_trials, ..ScenarioOptions::default() };
    let name = scenario.expect("clap requires --scenario without --list");
    let transcript = match run_scenario(&name, tape, &options) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("zerotwo-sim: {e}; try --list");
            return ExitCode::from(2);
        }
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(transcript.to_jsonl().as_bytes());
    match transcript.first_divergence() {
        None => ExitCode::SUCCESS,
        Some(step) => {
            eprintln!(
                "zerotwo-sim: {} failed at {:?}: expected {}, got {}",
                name, step.step, step.expected, step.actual
            );
            ExitCode::FAILURE
        }
    }
}
