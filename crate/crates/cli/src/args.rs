use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "qsim", version, about = "Variant quantum mechanics experiments")]
pub struct Cli {
    /// Seed for every random stream of the run.
    #[arg(long, global = true, env = "QSIM_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide satisfiability of DIMACS CNF instances.
    Sat {
        #[arg(long = "cnf", required = true)]
        cnf: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Backend::Nonlinear)]
        backend: Backend,
    },
    /// Count satisfying assignments.
    Count {
        #[arg(long = "cnf", required = true)]
        cnf: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Backend::Nonlinear)]
        backend: Backend,
    },
    /// Decide whether a CNF is a tautology.
    Taut {
        #[arg(long = "cnf", required = true)]
        cnf: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Backend::Nonunitary)]
        backend: Backend,
    },
    /// Evaluate fully quantified QDIMACS formulas.
    Tqbf {
        #[arg(long = "qdimacs", required = true)]
        qdimacs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Backend::Nonlinear)]
        backend: Backend,
        /// Reject variables missing from the quantifier prefix.
        #[arg(long)]
        strict: bool,
    },
    /// Nonlocal signaling through a shared EPR pair with the G gate.
    Signal {
        #[arg(long, default_value_t = 1)]
        scale_n: usize,
    },
    /// Finite-precision measurement demos.
    Cmqm {
        #[arg(long, value_enum)]
        demo: Demo,
        #[arg(long, default_value_t = 8)]
        mu: u32,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        /// Register size for the circuit demos.
        #[arg(long, default_value_t = 12)]
        qubits: usize,
        /// Layers of the random circuit.
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Real part of the coherent amplitude.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha_im: f64,
        /// Fock cutoff; defaults to ceil(|α|² + 8|α| + 16).
        #[arg(long)]
        cutoff: Option<usize>,
        /// Also write the trajectory CSV to this path.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Nonlinear,
    Nonunitary,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Demo {
    GhzStaircase,
    RandomCircuit,
    CoherentFidelity,
}
