//! `vans`: run variable-structure ansatz searches from the command line.
//!
//! Exit status is 0 on success, 2 for configuration or I/O problems, 3 when
//! a saved artifact fails verification and 4 when the optimizer diverges.

mod commands;
mod config;
mod error;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ProblemKind, VariantName};

#[derive(Parser)]
#[command(name = "vans", version, about = "Variable-structure ansatz search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the energy of a Hamiltonian.
    Vqe(VqeArgs),
    /// Train a quantum autoencoder and evaluate it on held-out states.
    Autoencode(AutoencodeArgs),
    /// Compile a target unitary from input/output pairs.
    Compile(CompileArgs),
    /// Apply the rewrite rules to a circuit file.
    Simplify(SimplifyArgs),
    /// Optimize fixed hardware-efficient ansatze for comparison.
    BaselineHea(BaselineArgs),
}

/// Flags shared by every search subcommand.
#[derive(Args, Clone, Default)]
pub struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated seeds; overrides VANS_SEED and the config.
    #[arg(long)]
    pub seed: Option<String>,
    /// Run directory; must not exist yet.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of outer iterations.
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Re-evaluate saved circuits with the dense simulator.
    #[arg(long)]
    pub verify: bool,
    /// Also write gnuplot data files.
    #[arg(long)]
    pub emit_gnuplot: bool,
}

#[derive(Args, Clone, Default)]
pub struct ProblemArgs {
    /// Problem family.
    #[arg(long, value_enum)]
    pub problem: Option<ProblemFlag>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling of the transverse-field Ising chain.
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    /// Anisotropy of the XXZ chain.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Hamiltonian file for `--problem pauli-file`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum ProblemFlag {
    Tfim,
    Xxz,
    PauliFile,
}

impl From<ProblemFlag> for ProblemKind {
    fn from(p: ProblemFlag) -> Self {
        match p {
            ProblemFlag::Tfim => ProblemKind::Tfim,
            ProblemFlag::Xxz => ProblemKind::Xxz,
            ProblemFlag::PauliFile => ProblemKind::PauliFile,
        }
    }
}

#[derive(Args, Clone, Default)]
pub struct VqeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Args, Clone, Default)]
pub struct AutoencodeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Training inputs: `.pauli` Hamiltonians or state files.
    #[arg(long, value_delimiter = ',')]
    pub train: Vec<PathBuf>,
    /// Held-out inputs in the same formats.
    #[arg(long, value_delimiter = ',')]
    pub test: Vec<PathBuf>,
    #[arg(long)]
    pub n_trash: Option<usize>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantFlag>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum VariantFlag {
    Local,
    Global,
}

impl From<VariantFlag> for VariantName {
    fn from(v: VariantFlag) -> Self {
        match v {
            VariantFlag::Local => VariantName::Local,
            VariantFlag::Global => VariantName::Global,
        }
    }
}

#[derive(Args, Clone, Default)]
pub struct CompileArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Compile the n-qubit quantum Fourier transform.
    #[arg(long, conflicts_with = "unitary")]
    pub qft: Option<usize>,
    /// Compile the unitary whose columns are stored in this state file.
    #[arg(long)]
    pub unitary: Option<PathBuf>,
    /// Number of training pairs.
    #[arg(long)]
    pub training_size: Option<usize>,
}

#[derive(Args, Clone)]
pub struct SimplifyArgs {
    /// Circuit file to simplify.
    pub circuit: PathBuf,
    /// Hamiltonian enabling the cost-aware removal rule.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Relative cost budget for cost-aware removal.
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
    /// Treat the circuit as acting on arbitrary inputs, disabling the rules
    /// that rely on the all-zeros input.
    #[arg(long)]
    pub general_input: bool,
    /// Output directory; must not exist yet. Without it the circuit goes to
    /// stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check the result against the dense simulator (up to 6 qubits).
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Clone, Default)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated layer counts; 0 is the product ansatz.
    #[arg(long, value_delimiter = ',')]
    pub layers: Vec<usize>,
    /// Train autoencoders on the config's autoencoder inputs instead.
    #[arg(long)]
    pub autoencoder: bool,
    /// Training inputs for `--autoencoder`.
    #[arg(long, value_delimiter = ',')]
    pub train: Vec<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Vqe(a) => commands::vqe(&a),
        Command::Autoencode(a) => commands::autoencode(&a),
        Command::Compile(a) => commands::compile(&a),
        Command::Simplify(a) => commands::simplify(&a),
        Command::BaselineHea(a) => commands::baseline_hea(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
