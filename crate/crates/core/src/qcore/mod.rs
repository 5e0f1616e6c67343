//! Dense state vectors, local gates and measurement rules.

mod density;
mod gates;
mod measure;
mod state;

pub use density::{hermitian_eigenvalues, reduced_density, reduced_density_qubits, Grouping};
pub use gates::{apply_local_unitary, cnot, hadamard, pauli_x, unitarity_deviation};
pub use measure::{marginal_distribution, outcome_distribution, sample_outcome, sample_qubits, MeasurementRule};
pub use state::{StateVector, MAX_QUBITS, NORM_TOLERANCE, SUPPORT_EPS};

/// Bit mask selecting `qubit` in an `num_qubits`-qubit basis index.
#[inline]
pub(crate) fn qubit_mask(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

/// Spreads the bits of `value` over `qubits` (first listed qubit receives the
/// most significant bit of `value`).
pub(crate) fn scatter_bits(num_qubits: usize, qubits: &[usize], value: usize) -> usize {
    let w = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (i, &q)| {
        if value >> (w - 1 - i) & 1 == 1 {
            acc | qubit_mask(num_qubits, q)
        } else {
            acc
        }
    })
}

/// Inverse of [`scatter_bits`].
pub(crate) fn gather_bits(num_qubits: usize, qubits: &[usize], index: usize) -> usize {
    qubits.iter().fold(0, |acc, &q| {
        (acc << 1) | usize::from(index & qubit_mask(num_qubits, q) != 0)
    })
}

pub(crate) fn check_qubit(num_qubits: usize, qubit: usize) -> crate::Result<()> {
    if qubit >= num_qubits {
        return Err(crate::Error::IndexOutOfRange {
            index: qubit,
            dim: num_qubits,
        });
    }
    Ok(())
}

pub(crate) fn check_distinct(qubits: &[usize]) -> crate::Result<()> {
    for (i, a) in qubits.iter().enumerate() {
        if qubits[i + 1..].contains(a) {
            return Err(crate::Error::arg(format!("qubit {a} listed twice")));
        }
    }
    Ok(())
}
