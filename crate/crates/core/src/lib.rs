//! Dense state-vector simulation of standard quantum mechanics and of the
//! nonlinear, non-unitary and p-norm variants used to decide SAT, #SAT, TAUT
//! and TQBF, together with a finite-precision measurement model (amplitude
//! quantization, resolvable entanglement and collapse dynamics).
//!
//! Qubit positions are zero-based and qubit 0 is the most significant bit of
//! the basis index. Oracle registers (flag or counter) are placed after the
//! index register, in the least significant positions.

pub mod cmqm;
mod error;
pub mod instances;
pub mod qcore;
pub mod rng;
pub mod solvers;
pub mod variant;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
