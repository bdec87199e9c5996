//! `ansatz-forge`: catalog browsing, manifest-driven runs, QASM export and
//! brute-force oracles.
//!
//! Exit codes: 0 success, 2 user or validation error, 3 numerical failure.

mod catalog;
mod error;
mod export;
mod manifest;
mod oracle;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "ANSATZ_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ansatz-forge", version, about = "Variational quantum circuit workbench")]
struct Cli {
    /// Emit a single JSON document on standard output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Browse the ansatz catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Run a VQE, QAOA or ADAPT-VQE experiment described by a manifest.
    Run {
        manifest: PathBuf,
        /// Replace the manifest seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for result.json and trace.csv (default: the manifest's
        /// `output_dir`, else the current directory).
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Export a blueprint config as OpenQASM 2.0.
    Export {
        /// Config file, `-` for standard input, or inline JSON.
        config: String,
        /// JSON object of parameter values, or a result.json.
        #[arg(long, conflicts_with = "zeros")]
        binding: Option<PathBuf>,
        /// Bind every parameter to 0.
        #[arg(long)]
        zeros: bool,
        /// Replace mid-circuit measurement by coherent controlled gates.
        #[arg(long)]
        deferred: bool,
        /// Write QASM here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Brute-force reference values.
    Oracle {
        #[command(subcommand)]
        action: OracleCmd,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCmd {
    /// All families grouped by algorithm class.
    List,
    /// One family: description, intent, applicability and config schema.
    Show { family: String },
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Ground energy by dense diagonalization.
    Ground {
        /// Hamiltonian spec JSON, e.g. {"model": "tfim", "n": 4, "g": 1.0}.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Pauli-sum text, one `coeff  X0 Z3` term per line.
        #[arg(long)]
        hamiltonian_file: Option<PathBuf>,
        /// Qubit count for --hamiltonian-file.
        #[arg(long)]
        qubits: Option<usize>,
    },
    /// Exhaustive maximum cut of a graph JSON file.
    Maxcut { graph: PathBuf },
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV}={raw}: expected a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("{THREADS_ENV}: {e}")))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let json = cli.json;
    match cli.command {
        Command::Catalog { action: CatalogCmd::List } => catalog::cmd_list(json),
        Command::Catalog { action: CatalogCmd::Show { family } } => catalog::cmd_show(&family, json),
        Command::Run { manifest, seed, output_dir } => {
            run::cmd_run(run::RunArgs { manifest: &manifest, seed, output_dir, json })
        }
        Command::Export { config, binding, zeros, deferred, output } => {
            export::cmd_export(export::ExportArgs { config: &config, binding, zeros, deferred, output, json })
        }
        Command::Oracle { action: OracleCmd::Ground { spec, hamiltonian_file, qubits } } => {
            let spec = oracle::load_spec(spec.as_deref(), hamiltonian_file.as_deref(), qubits)?;
            oracle::cmd_ground(&spec, json)
        }
        Command::Oracle { action: OracleCmd::Maxcut { graph } } => oracle::cmd_maxcut(&graph, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            eprintln!("error: {e}");
            if json {
                println!("{}", serde_json::json!({"error": e.to_string(), "exit_code": code}));
            }
            ExitCode::from(code as u8)
        }
    }
}
