use nalgebra::DMatrix;

use super::{check_distinct, check_qubit, qubit_mask, StateVector};
use crate::{Error, Result, C64};

const UNITARY_TOLERANCE: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn hadamard() -> DMatrix<C64> {
    let h = c(std::f64::consts::FRAC_1_SQRT_2);
    DMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// Controlled NOT with the control on the first of the two qubits.
pub fn cnot() -> DMatrix<C64> {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = c(1.0);
    m[(1, 1)] = c(1.0);
    m[(2, 3)] = c(1.0);
    m[(3, 2)] = c(1.0);
    m
}

/// `max |U†U - I|` over all entries.
pub fn unitarity_deviation(m: &DMatrix<C64>) -> f64 {
    let prod = m.adjoint() * m;
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Applies a one- or two-qubit unitary to the listed qubits.
///
/// For two qubits the matrix row index is `2·b(qubits[0]) + b(qubits[1])`.
pub fn apply_local_unitary(
    state: &StateVector,
    qubits: &[usize],
    matrix: &DMatrix<C64>,
) -> Result<StateVector> {
    let n = state.num_qubits();
    let k = qubits.len();
    if !(1..=2).contains(&k) {
        return Err(Error::arg(format!("local unitary acts on 1 or 2 qubits, got {k}")));
    }
    if matrix.nrows() != 1 << k || matrix.ncols() != 1 << k {
        return Err(Error::arg(format!(
            "{}x{} matrix does not act on {k} qubit(s)",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    for &q in qubits {
        check_qubit(n, q)?;
    }
    check_distinct(qubits)?;
    let deviation = unitarity_deviation(matrix);
    if deviation > UNITARY_TOLERANCE || deviation.is_nan() {
        return Err(Error::NotUnitary { deviation });
    }

    let masks: Vec<usize> = qubits.iter().map(|&q| qubit_mask(n, q)).collect();
    let all = masks.iter().fold(0, |a, m| a | m);
    // offsets[r] is the index offset of local basis row r
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|r| {
            masks
                .iter()
                .enumerate()
                .filter(|(i, _)| r >> (k - 1 - i) & 1 == 1)
                .fold(0, |a, (_, m)| a | m)
        })
        .collect();

    let mut out = state.amplitudes().to_vec();
    let mut local = [C64::new(0.0, 0.0); 4];
    for base in (0..state.dim()).filter(|i| i & all == 0) {
        for (r, off) in offsets.iter().enumerate() {
            local[r] = state.amplitudes()[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (col, amp) in local.iter().enumerate().take(offsets.len()) {
                acc += matrix[(r, col)] * amp;
            }
            out[base | off] = acc;
        }
    }
    Ok(StateVector::from_raw(n, out))
}
