use nalgebra::DMatrix;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{mu_resolvable_entanglement, quantize, CmqmConfig, EntanglementReport};
use crate::qcore::{
    apply_local_unitary, cnot, gather_bits, hadamard, pauli_x, sample_outcome, scatter_bits,
    Grouping, MeasurementRule, StateVector,
};
use crate::rng::uniform_f64;
use crate::{Error, Result, C64};

/// Most particles an entanglement evaluation accepts.
pub const MAX_PARTICLES: usize = 12;

/// A named one- or two-qubit unitary in a circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitGate {
    pub name: String,
    pub qubits: Vec<usize>,
    pub matrix: DMatrix<C64>,
}

impl CircuitGate {
    pub fn new(name: impl Into<String>, qubits: Vec<usize>, matrix: DMatrix<C64>) -> Self {
        Self {
            name: name.into(),
            qubits,
            matrix,
        }
    }

    pub fn h(q: usize) -> Self {
        Self::new("h", vec![q], hadamard())
    }

    pub fn x(q: usize) -> Self {
        Self::new("x", vec![q], pauli_x())
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new("cnot", vec![control, target], cnot())
    }
}

/// `H` on qubit 0 followed by `CNOT(k-1, k)` for `k = 1..n`: after step `k`
/// the first `k` qubits hold a GHZ state.
pub fn ghz_staircase(n: usize) -> Vec<CircuitGate> {
    std::iter::once(CircuitGate::h(0))
        .chain((1..n).map(|k| CircuitGate::cnot(k - 1, k)))
        .collect()
}

/// `e^{iα} Rz(β) Ry(γ) Rz(δ)` with uniformly drawn angles.
pub fn random_single_qubit_unitary<R: RngCore + ?Sized>(rng: &mut R) -> DMatrix<C64> {
    let tau = std::f64::consts::TAU;
    let mut angle = || uniform_f64(rng) * tau;
    let (alpha, beta, gamma, delta) = (angle(), angle(), angle(), angle());
    let (c, s) = ((gamma / 2.0).cos(), (gamma / 2.0).sin());
    let e = |phi: f64| C64::from_polar(1.0, phi);
    DMatrix::from_row_slice(
        2,
        2,
        &[
            e(alpha - beta / 2.0 - delta / 2.0) * c,
            -e(alpha - beta / 2.0 + delta / 2.0) * s,
            e(alpha + beta / 2.0 - delta / 2.0) * s,
            e(alpha + beta / 2.0 + delta / 2.0) * c,
        ],
    )
}

/// `depth` layers, each a random single-qubit unitary followed by a CNOT
/// between two distinct random qubits.
pub fn random_circuit<R: RngCore + ?Sized>(n: usize, depth: usize, rng: &mut R) -> Result<Vec<CircuitGate>> {
    if n < 2 {
        return Err(Error::arg("random circuits need at least two qubits"));
    }
    let mut gates = Vec::with_capacity(2 * depth);
    for _ in 0..depth {
        let q = crate::rng::uniform_below(rng, n as u64) as usize;
        gates.push(CircuitGate::new("u", vec![q], random_single_qubit_unitary(rng)));
        let c = crate::rng::uniform_below(rng, n as u64) as usize;
        let t = (c + 1 + crate::rng::uniform_below(rng, n as u64 - 1) as usize) % n;
        gates.push(CircuitGate::cnot(c, t));
    }
    Ok(gates)
}

/// Collapse fires once `ξ ≥ θμ`.
pub fn should_collapse(report: &EntanglementReport, config: &CmqmConfig) -> bool {
    report.xi >= config.collapse_threshold()
}

/// Born-rule reset to a computational basis state.
pub fn collapse<R: RngCore + ?Sized>(state: &StateVector, rng: &mut R) -> Result<StateVector> {
    state.check_normalized()?;
    Ok(sample_outcome(state, MeasurementRule::born(), rng)?.1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub xi: f64,
    pub norm_loss: f64,
    pub significant_loss: bool,
    pub cluster_size: usize,
    pub collapsed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// All amplitude was lost to quantization at `step`; the run stopped.
    Instability { step: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub steps: Vec<StepRecord>,
    pub collapse_events: Vec<usize>,
    pub status: RunStatus,
    #[serde(skip)]
    pub final_state: StateVector,
}

/// Pure state of the `cluster` particles, sliced at the dominant basis value
/// of the other qubits. Exact whenever the cluster is in a product state
/// with the rest, which holds after any collapse and for product inputs.
fn cluster_state(state: &StateVector, grouping: &Grouping, cluster: &[usize]) -> Result<(StateVector, Grouping)> {
    let n = state.num_qubits();
    let kept = grouping.qubits_of(cluster);
    let rest: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let amps = state.amplitudes();
    let dominant = (0..amps.len())
        .max_by(|&a, &b| amps[a].norm_sqr().total_cmp(&amps[b].norm_sqr()).then(b.cmp(&a)))
        .unwrap_or(0);
    let rest_index = scatter_bits(n, &rest, gather_bits(n, &rest, dominant));
    let sub: Vec<C64> = (0..1usize << kept.len())
        .map(|a| amps[scatter_bits(n, &kept, a) | rest_index])
        .collect();
    let sub = StateVector::from_raw(kept.len(), sub).normalized()?;

    let mut offset = 0;
    let particles = cluster
        .iter()
        .map(|&j| {
            let len = grouping.particle(j).len();
            let p = (offset..offset + len).collect();
            offset += len;
            p
        })
        .collect();
    Ok((sub, Grouping::new(kept.len(), particles)?))
}

/// Runs `circuit` gate by gate: apply, quantize to `μ` bits and renormalize,
/// evaluate `ξ` over the interaction cluster, and collapse when the
/// threshold is reached.
///
/// The interaction cluster is the set of particles touched by a gate since
/// the last collapse. A step that loses all amplitude to quantization ends
/// the run with [`RunStatus::Instability`].
pub fn evolve<R: RngCore + ?Sized>(
    initial: &StateVector,
    circuit: &[CircuitGate],
    grouping: &Grouping,
    config: &CmqmConfig,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    if grouping.num_qubits() != initial.num_qubits() {
        return Err(Error::arg("grouping does not match the register size"));
    }
    initial.check_normalized()?;
    let mu = config.mu();
    let mut state = initial.clone();
    let mut cluster: Vec<usize> = Vec::new();
    let mut steps = Vec::with_capacity(circuit.len());
    let mut collapse_events = Vec::new();
    let mut status = RunStatus::Completed;

    for (i, gate) in circuit.iter().enumerate() {
        let step = i + 1;
        state = apply_local_unitary(&state, &gate.qubits, &gate.matrix)?;
        for &q in &gate.qubits {
            let j = grouping.owner(q).expect("grouping covers every qubit");
            if !cluster.contains(&j) {
                cluster.push(j);
            }
        }
        cluster.sort_unstable();

        let (norm_loss, significant_loss) = if config.quantizes() {
            let q = quantize(&state, mu)?;
            if q.state.norm_sqr() == 0.0 {
                steps.push(StepRecord {
                    step,
                    xi: 0.0,
                    norm_loss: q.norm_loss,
                    significant_loss: true,
                    cluster_size: cluster.len(),
                    collapsed: false,
                });
                status = RunStatus::Instability { step };
                state = q.state;
                break;
            }
            // significant losses are flagged but the state is still renormalized
            state = q.state.normalized()?;
            (q.norm_loss, q.significant_loss)
        } else {
            (0.0, false)
        };

        let report = if cluster.len() >= 2 {
            if cluster.len() > MAX_PARTICLES {
                return Err(Error::ResourceBound {
                    what: "interaction cluster",
                    value: cluster.len(),
                    max: MAX_PARTICLES,
                });
            }
            let (sub, sub_grouping) = cluster_state(&state, grouping, &cluster)?;
            mu_resolvable_entanglement(&sub, &sub_grouping, mu)?
        } else {
            EntanglementReport::separable(cluster.len(), mu)
        };

        let cluster_size = cluster.len();
        let collapsed = should_collapse(&report, config);
        if collapsed {
            state = collapse(&state, rng)?;
            cluster.clear();
            collapse_events.push(step);
        }
        steps.push(StepRecord {
            step,
            xi: report.xi,
            norm_loss,
            significant_loss,
            cluster_size,
            collapsed,
        });
    }

    Ok(TrajectoryRecord {
        steps,
        collapse_events,
        status,
        final_state: state,
    })
}
