//! Boolean instances and their ground truth: DIMACS/QDIMACS ingestion, seeded
//! random generation, CNF evaluation and exhaustive oracles.

mod cnf;
mod dimacs;
mod oracle;
mod random;

pub use cnf::{CnfFormula, Quantifier, QbfInstance};
pub use dimacs::{parse_dimacs, parse_qdimacs, parse_qdimacs_with, FreeVariables};
pub use oracle::{
    brute_count, brute_qbf, brute_sat, brute_taut, nonunitary_success_probability, MAX_BRUTE_VARS,
};
pub use random::{random_ksat, random_qbf};
