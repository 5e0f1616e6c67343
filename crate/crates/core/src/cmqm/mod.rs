//! Finite-precision measurement model: a state is stored with `μ` bits per
//! amplitude, entanglement is counted only where it is resolvable at that
//! precision, and a highly entangled state collapses to a product state.

mod coherent;
mod dynamics;
mod entanglement;
mod quantize;
mod rate;

pub use coherent::{coherent_state_fidelity, coherent_state_truncated};
pub use dynamics::{
    collapse, evolve, ghz_staircase, random_circuit, random_single_qubit_unitary, should_collapse,
    CircuitGate, RunStatus, StepRecord, TrajectoryRecord, MAX_PARTICLES,
};
pub use entanglement::{mu_resolvable_entanglement, EntanglementReport, ParticleSet};
pub use quantize::{quantize, quantize_component, superposition_bound, QuantizedState};
pub use rate::{computational_rate, computational_rate_from_mean, HamiltonianSpec, HBAR_SI};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_MU: u32 = 64;

pub(crate) fn check_mu(mu: u32) -> Result<()> {
    if mu < 2 || !mu.is_multiple_of(2) || mu > MAX_MU {
        return Err(Error::arg(format!(
            "mu must be even and within 2..={MAX_MU}, got {mu}"
        )));
    }
    Ok(())
}

/// Resolution of a single amplitude component, `2^(-μ/2)`.
pub fn resolution(mu: u32) -> f64 {
    2f64.powi(-(mu as i32) / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmqmConfig {
    mu: u32,
    theta: f64,
    quantize: bool,
}

impl CmqmConfig {
    /// `theta` may be `f64::INFINITY` to disable collapse.
    pub fn new(mu: u32, theta: f64) -> Result<Self> {
        check_mu(mu)?;
        if theta.is_nan() || theta <= 0.0 {
            return Err(Error::arg(format!("theta must be positive, got {theta}")));
        }
        Ok(Self {
            mu,
            theta,
            quantize: true,
        })
    }

    /// Keeps `μ` for thresholds but stores amplitudes in full double precision.
    pub fn without_quantization(mut self) -> Self {
        self.quantize = false;
        self
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn quantizes(&self) -> bool {
        self.quantize
    }

    /// `ξ` at or above which the state collapses.
    pub fn collapse_threshold(&self) -> f64 {
        self.theta * f64::from(self.mu)
    }
}
