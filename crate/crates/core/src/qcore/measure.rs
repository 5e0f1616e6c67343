use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{check_distinct, check_qubit, gather_bits, StateVector};
use crate::rng::uniform_f64;
use crate::{Error, Result, C64};

/// Generalized measurement rule: outcome `x` has probability
/// `|α_x|^p / Σ_y |α_y|^p`. `p = 2` is the Born rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRule {
    p: f64,
}

impl MeasurementRule {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::arg(format!("measurement exponent must be finite and positive, got {p}")));
        }
        Ok(Self { p })
    }

    pub const fn born() -> Self {
        Self { p: 2.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Unnormalized outcome weights, scaled so the largest is 1.
    fn weights(&self, amps: &[C64]) -> Result<Vec<f64>> {
        let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(amps
            .iter()
            .map(|a| {
                let r = a / max;
                if self.p == 2.0 {
                    r.norm_sqr()
                } else {
                    r.norm().powf(self.p)
                }
            })
            .collect())
    }

    /// Outcome probabilities over raw amplitudes; works on any nonzero
    /// vector since normalization happens here.
    pub fn distribution(&self, amps: &[C64]) -> Result<Vec<f64>> {
        let w = self.weights(amps)?;
        let total: f64 = w.iter().sum();
        Ok(w.into_iter().map(|x| x / total).collect())
    }
}

impl Default for MeasurementRule {
    fn default() -> Self {
        Self::born()
    }
}

pub fn outcome_distribution(state: &StateVector, rule: MeasurementRule) -> Result<Vec<f64>> {
    rule.distribution(state.amplitudes())
}

/// Probability of each value of the listed qubits (first qubit is the most
/// significant bit of the value).
pub fn marginal_distribution(
    state: &StateVector,
    rule: MeasurementRule,
    qubits: &[usize],
) -> Result<Vec<f64>> {
    let n = state.num_qubits();
    for &q in qubits {
        check_qubit(n, q)?;
    }
    check_distinct(qubits)?;
    let w = rule.weights(state.amplitudes())?;
    let mut acc = vec![0.0; 1 << qubits.len()];
    let mut total = 0.0;
    for (i, wi) in w.iter().enumerate() {
        acc[gather_bits(n, qubits, i)] += wi;
        total += wi;
    }
    Ok(acc.into_iter().map(|x| x / total).collect())
}

fn draw<R: RngCore + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u = uniform_f64(rng);
    let mut cum = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            cum += p;
            last = i;
            if u < cum {
                return i;
            }
        }
    }
    last
}

/// Full computational-basis readout. Returns the outcome index and the
/// corresponding basis state.
pub fn sample_outcome<R: RngCore + ?Sized>(
    state: &StateVector,
    rule: MeasurementRule,
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    let probs = outcome_distribution(state, rule)?;
    let idx = draw(&probs, rng);
    Ok((idx, StateVector::new_basis_state(state.num_qubits(), idx)?))
}

/// Reads out only `qubits`. The post-measurement state is the projection onto
/// the observed value, renormalized in the 2-norm.
pub fn sample_qubits<R: RngCore + ?Sized>(
    state: &StateVector,
    rule: MeasurementRule,
    qubits: &[usize],
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    let probs = marginal_distribution(state, rule, qubits)?;
    let value = draw(&probs, rng);
    let n = state.num_qubits();
    let projected: Vec<C64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if gather_bits(n, qubits, i) == value {
                a
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let post = StateVector::from_raw(n, projected).normalized()?;
    Ok((value, post))
}
