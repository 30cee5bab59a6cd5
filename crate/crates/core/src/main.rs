use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use glue::cli::{run, Format, RunConfig, EXIT_INPUT};

#[derive(Parser)]
#[command(
    name = "glue",
    version,
    about = "Derive sentence meanings from LFG f-structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive every reading of an analysis and diagnose failures.
    Derive {
        /// F-structure file.
        #[arg(long)]
        fstructure: PathBuf,
        /// Lexicon file.
        #[arg(long)]
        lexicon: PathBuf,
        /// Goal as `label` or `label:type` (default: the root at type t).
        #[arg(long)]
        goal: Option<String>,
        /// Print a derivation for each reading.
        #[arg(long)]
        trace: bool,
        /// Print every distinct derivation for each reading.
        #[arg(long)]
        all_traces: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let Command::Derive {
        fstructure,
        lexicon,
        goal,
        trace,
        all_traces,
        json,
    } = match Cli::try_parse() {
        Ok(cli) => cli.command,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let config = RunConfig {
        fstructure,
        lexicon,
        goal,
        trace,
        all_traces,
        format: if json { Format::Json } else { Format::Text },
    };
    let code = run(
        &config,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
