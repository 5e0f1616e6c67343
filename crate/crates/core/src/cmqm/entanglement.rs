use serde::{Deserialize, Serialize};

use super::{check_mu, resolution, MAX_PARTICLES};
use crate::qcore::{hermitian_eigenvalues, reduced_density_qubits, Grouping, StateVector};
use crate::{Error, Result};

/// A set of particles as a bit mask (bit `j` = particle `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParticleSet(pub u32);

impl ParticleSet {
    pub fn from_indices(indices: &[usize]) -> Self {
        Self(indices.iter().fold(0, |m, &j| m | 1 << j))
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn complement(self, num_particles: usize) -> Self {
        Self(!self.0 & ((1u32 << num_particles) - 1))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&j| self.contains(j)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// Resolvable entanglement in bits.
    pub xi: f64,
    /// `S(ρ_j)` in bits at the working precision.
    pub marginal_entropies: Vec<f64>,
    /// Second-largest eigenvalue of the reduced state, one entry per
    /// complementary pair of proper subsets (the representative never
    /// contains the last particle).
    pub bipartition_lambdas: Vec<(ParticleSet, f64)>,
    /// Every bipartition resolves at least two Schmidt coefficients.
    pub resolvable: bool,
    pub mu: u32,
}

impl EntanglementReport {
    /// `(λ₊)_y`, looking up either `y` or its complement.
    pub fn lambda_for(&self, y: ParticleSet) -> Option<f64> {
        let n = self.marginal_entropies.len();
        let yc = y.complement(n);
        self.bipartition_lambdas
            .iter()
            .find(|(s, _)| *s == y || *s == yc)
            .map(|&(_, l)| l)
    }

    /// A report for a state with no resolvable entanglement structure.
    pub(crate) fn separable(num_particles: usize, mu: u32) -> Self {
        Self {
            xi: 0.0,
            marginal_entropies: vec![0.0; num_particles],
            bipartition_lambdas: Vec::new(),
            resolvable: false,
            mu,
        }
    }
}

/// Von Neumann entropy in bits at `μ`-bit precision: eigenvalues below the
/// resolution `2^(-μ/2)` are dropped, the rest rounded to multiples of `2^(-μ)`.
fn mu_entropy(eigs: &[f64], mu: u32) -> f64 {
    let floor = resolution(mu);
    let grid = 2f64.powi(-(mu as i32));
    eigs.iter()
        .filter(|&&l| l >= floor)
        .map(|&l| (l / grid).round_ties_even() * grid)
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

fn second_largest(eigs: &[f64]) -> f64 {
    eigs.get(1).copied().unwrap_or(0.0).max(0.0)
}

/// `ξ = Σ_j S(ρ_j)` if every bipartition `y` has `(λ₊)_y ≥ 2^(-μ/2)`, else 0.
pub fn mu_resolvable_entanglement(
    state: &StateVector,
    grouping: &Grouping,
    mu: u32,
) -> Result<EntanglementReport> {
    check_mu(mu)?;
    let np = grouping.len();
    if !(2..=MAX_PARTICLES).contains(&np) {
        return Err(Error::arg(format!(
            "entanglement needs 2..={MAX_PARTICLES} particles, got {np}"
        )));
    }
    if grouping.num_qubits() != state.num_qubits() {
        return Err(Error::arg("grouping does not match the register size"));
    }
    state.check_normalized()?;

    let marginal_entropies: Vec<f64> = (0..np)
        .map(|j| {
            let rho = reduced_density_qubits(state, grouping.particle(j));
            mu_entropy(&hermitian_eigenvalues(&rho), mu)
        })
        .collect();

    let bipartition_lambdas: Vec<(ParticleSet, f64)> = (1u32..1 << (np - 1))
        .map(|mask| {
            let y = ParticleSet(mask);
            let yc = y.complement(np);
            let qy = grouping.qubits_of(&y.indices());
            let qyc = grouping.qubits_of(&yc.indices());
            // both sides share a spectrum; diagonalize the smaller one
            let kept = if qy.len() <= qyc.len() { qy } else { qyc };
            let eigs = hermitian_eigenvalues(&reduced_density_qubits(state, &kept));
            (y, second_largest(&eigs))
        })
        .collect();

    let resolvable = bipartition_lambdas.iter().all(|&(_, l)| l >= resolution(mu));
    let xi = if resolvable {
        marginal_entropies.iter().sum()
    } else {
        0.0
    };
    Ok(EntanglementReport {
        xi,
        marginal_entropies,
        bipartition_lambdas,
        resolvable,
        mu,
    })
}
