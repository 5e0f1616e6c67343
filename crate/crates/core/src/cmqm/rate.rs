use serde::{Deserialize, Serialize};

use super::check_mu;
use crate::{Error, Result};

/// Reduced Planck constant in J·s.
pub const HBAR_SI: f64 = 1.0545718e-34;

/// Diagonal Hamiltonian `Σ_j E_j |j⟩⟨j|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    energies: Vec<f64>,
    hbar: f64,
}

impl HamiltonianSpec {
    /// Natural units, `ħ = 1`.
    pub fn natural(energies: Vec<f64>) -> Result<Self> {
        Self::with_hbar(energies, 1.0)
    }

    /// Energies in joules, `ħ` in J·s.
    pub fn si(energies: Vec<f64>) -> Result<Self> {
        Self::with_hbar(energies, HBAR_SI)
    }

    fn with_hbar(energies: Vec<f64>, hbar: f64) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::arg("Hamiltonian needs at least one level"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::arg("non-finite energy"));
        }
        Ok(Self { energies, hbar })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mean_energy(&self) -> f64 {
        self.energies.iter().sum::<f64>() / self.dimension() as f64
    }
}

/// Sub-physical operation rate `2^(μ/2) Σ_j E_j / ħ`, in operations per second.
pub fn computational_rate(h: &HamiltonianSpec, mu: u32) -> Result<f64> {
    check_mu(mu)?;
    Ok(2f64.powi(mu as i32 / 2) * h.energies().iter().sum::<f64>() / h.hbar())
}

/// The same rate written as `2^(μ/2) D Ē / ħ`.
pub fn computational_rate_from_mean(h: &HamiltonianSpec, mu: u32) -> Result<f64> {
    check_mu(mu)?;
    Ok(2f64.powi(mu as i32 / 2) * h.dimension() as f64 * h.mean_energy() / h.hbar())
}
