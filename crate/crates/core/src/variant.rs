//! Non-standard primitives: the state-dependent nonlinear OR/AND gates, the
//! nonlinear counting gate, the non-unitary gate `G = diag(2^(-2n), 1)` and
//! the EPR signaling protocol built on `G`.

use serde::{Deserialize, Serialize};

use crate::qcore::{
    apply_local_unitary, check_distinct, check_qubit, marginal_distribution, pauli_x, qubit_mask,
    scatter_bits, MeasurementRule, StateVector, SUPPORT_EPS,
};
use crate::{Error, Result, C64};

/// Relative magnitude below which a block entry counts as numerical dust.
pub const RESOLVE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlinearMode {
    Or,
    And,
}

/// Phase of the largest-magnitude entry (first one on ties), as a unit complex.
fn dominant_phase(entries: impl Iterator<Item = C64>) -> C64 {
    let mut best = C64::new(0.0, 0.0);
    for a in entries {
        if a.norm() > best.norm() {
            best = a;
        }
    }
    if best.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        best / best.norm()
    }
}

/// Rewrites one (control, flag) block in place. `idx[c][f]` are the four
/// basis indices of the block.
fn or_and_block(amps: &mut [C64], idx: [[usize; 2]; 2], mode: NonlinearMode) {
    let block = [
        amps[idx[0][0]],
        amps[idx[0][1]],
        amps[idx[1][0]],
        amps[idx[1][1]],
    ];
    let norm = block.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm <= SUPPORT_EPS {
        return;
    }
    let thresh = RESOLVE_EPS * norm;
    let has_flag = |f: usize| block[f].norm() > thresh || block[2 + f].norm() > thresh;
    let b = match mode {
        NonlinearMode::Or => usize::from(has_flag(1)),
        NonlinearMode::And => usize::from(!has_flag(0)),
    };
    let amp = dominant_phase(block.into_iter()) * (norm * std::f64::consts::FRAC_1_SQRT_2);
    for c in 0..2 {
        amps[idx[c][b]] = amp;
        amps[idx[c][1 - b]] = C64::new(0.0, 0.0);
    }
}

/// Nonlinear OR (or AND) between `control` and `flag`.
///
/// Within each context (fixed values of all other qubits) the flag values
/// carried by resolvable entries are combined, and the block becomes an equal
/// superposition of both control values carrying the combined flag, with the
/// block norm preserved. On the four two-term patterns with equal amplitudes
/// this is exactly the OR/AND truth table, e.g. `|00⟩+|11⟩ → |01⟩+|11⟩`.
pub fn nonlinear_gate(
    state: &StateVector,
    control: usize,
    flag: usize,
    mode: NonlinearMode,
) -> Result<StateVector> {
    let n = state.num_qubits();
    check_qubit(n, control)?;
    check_qubit(n, flag)?;
    if control == flag {
        return Err(Error::arg("control and flag must differ"));
    }
    let mc = qubit_mask(n, control);
    let mf = qubit_mask(n, flag);
    let mut amps = state.amplitudes().to_vec();
    for base in (0..state.dim()).filter(|i| i & (mc | mf) == 0) {
        or_and_block(
            &mut amps,
            [[base, base | mf], [base | mc, base | mc | mf]],
            mode,
        );
    }
    Ok(StateVector::from_raw(n, amps))
}

/// Nonlinear counting: per context, the counter values of the two control
/// branches are added and written onto both branches.
///
/// A branch with no support contributes 0. Every supported branch must carry
/// exactly one resolvable counter value.
pub fn nonlinear_count(state: &StateVector, control: usize, counter: &[usize]) -> Result<StateVector> {
    let n = state.num_qubits();
    check_qubit(n, control)?;
    for &q in counter {
        check_qubit(n, q)?;
    }
    if counter.is_empty() {
        return Err(Error::arg("counter register is empty"));
    }
    if counter.contains(&control) {
        return Err(Error::arg("control qubit lies inside the counter"));
    }
    check_distinct(counter)?;

    let w = counter.len();
    let mc = qubit_mask(n, control);
    let offsets: Vec<usize> = (0..1usize << w).map(|v| scatter_bits(n, counter, v)).collect();
    let mask = offsets.last().copied().unwrap_or(0) | mc;
    let mut amps = state.amplitudes().to_vec();

    for base in (0..state.dim()).filter(|i| i & mask == 0) {
        let mut block_norm_sqr = 0.0;
        let mut sum = 0u64;
        for branch in [base, base | mc] {
            let norm_sqr: f64 = offsets.iter().map(|o| amps[branch | o].norm_sqr()).sum();
            block_norm_sqr += norm_sqr;
            let norm = norm_sqr.sqrt();
            if norm <= SUPPORT_EPS {
                continue;
            }
            let mut resolved = offsets
                .iter()
                .enumerate()
                .filter(|(_, o)| amps[branch | *o].norm() > RESOLVE_EPS * norm)
                .map(|(v, _)| v as u64);
            let value = resolved.next().unwrap_or(0);
            if resolved.next().is_some() {
                return Err(Error::Instability(format!(
                    "counter branch at index {branch} holds more than one value"
                )));
            }
            sum += value;
        }
        let norm = block_norm_sqr.sqrt();
        if norm <= SUPPORT_EPS {
            continue;
        }
        if sum >> w != 0 {
            return Err(Error::Overflow {
                value: sum,
                width: w,
            });
        }
        let phase = dominant_phase(
            [base, base | mc]
                .iter()
                .flat_map(|b| offsets.iter().map(move |o| b | o))
                .map(|i| amps[i]),
        );
        let amp = phase * (norm * std::f64::consts::FRAC_1_SQRT_2);
        for branch in [base, base | mc] {
            for o in &offsets {
                amps[branch | o] = C64::new(0.0, 0.0);
            }
            amps[branch | offsets[sum as usize]] = amp;
        }
    }
    Ok(StateVector::from_raw(n, amps))
}

fn scale_flag_value(state: &StateVector, flag: usize, value: usize, factor: f64) -> Result<StateVector> {
    let n = state.num_qubits();
    check_qubit(n, flag)?;
    let mf = qubit_mask(n, flag);
    let amps: Vec<C64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if usize::from(i & mf != 0) == value {
                a * factor
            } else {
                a
            }
        })
        .collect();
    StateVector::from_amplitudes(amps)
}

fn g_factor(scale_n: usize) -> Result<f64> {
    if scale_n == 0 {
        return Err(Error::arg("G scale must be at least 1"));
    }
    Ok(2f64.powi(-2 * scale_n as i32))
}

/// `G = diag(2^(-2n), 1)` on `flag`. The result is deliberately unnormalized.
pub fn apply_g(state: &StateVector, flag: usize, scale_n: usize) -> Result<StateVector> {
    scale_flag_value(state, flag, 0, g_factor(scale_n)?)
}

/// `G⁻¹ = diag(2^(2n), 1)`. Fails if the result would exceed unit norm.
pub fn apply_g_inverse(state: &StateVector, flag: usize, scale_n: usize) -> Result<StateVector> {
    scale_flag_value(state, flag, 0, 1.0 / g_factor(scale_n)?)
}

/// `X·G·X`, which suppresses the flag-1 amplitudes instead.
pub fn apply_xgx(state: &StateVector, flag: usize, scale_n: usize) -> Result<StateVector> {
    let x = pauli_x();
    let s = apply_local_unitary(state, &[flag], &x)?;
    let s = apply_g(&s, flag, scale_n)?;
    apply_local_unitary(&s, &[flag], &x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalingResult {
    pub scale_n: usize,
    pub p_bob_zero_given_g: f64,
    pub p_bob_one_given_xgx: f64,
}

impl SignalingResult {
    /// Exact value `1/(1 + 2^(-4n))` of both conditional probabilities.
    pub fn closed_form(scale_n: usize) -> f64 {
        1.0 / (1.0 + 2f64.powi(-4 * scale_n as i32))
    }
}

/// Alice (qubit 0) and Bob (qubit 1) share `(|01⟩+|10⟩)/√2`. Alice applies
/// `G` or `XGX` to her qubit; Bob reads his qubit under the Born rule with
/// manual normalization.
pub fn signaling_experiment(scale_n: usize) -> Result<SignalingResult> {
    g_factor(scale_n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let shared = StateVector::from_real(&[0.0, h, h, 0.0])?;
    let bob = |s: &StateVector| marginal_distribution(s, MeasurementRule::born(), &[1]);
    let after_g = bob(&apply_g(&shared, 0, scale_n)?)?;
    let after_xgx = bob(&apply_xgx(&shared, 0, scale_n)?)?;
    Ok(SignalingResult {
        scale_n,
        p_bob_zero_given_g: after_g[0],
        p_bob_one_given_xgx: after_xgx[1],
    })
}

/// True when every supported basis state carries the same value on `qubits`;
/// returns that value.
pub fn disentangled_value(state: &StateVector, qubits: &[usize]) -> Option<usize> {
    let n = state.num_qubits();
    let norm = state.norm_sqr().sqrt();
    let mut value = None;
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.norm() > RESOLVE_EPS * norm {
            let v = crate::qcore::gather_bits(n, qubits, i);
            match value {
                None => value = Some(v),
                Some(prev) if prev != v => return None,
                _ => {}
            }
        }
    }
    value
}
