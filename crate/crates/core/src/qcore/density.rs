use nalgebra::DMatrix;

use super::{check_qubit, gather_bits, StateVector};
use crate::{Error, Result, C64};

/// A partition of the register's qubits into particles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    num_qubits: usize,
    particles: Vec<Vec<usize>>,
}

impl Grouping {
    pub fn new(num_qubits: usize, particles: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; num_qubits];
        for p in &particles {
            if p.is_empty() {
                return Err(Error::arg("particle without qubits"));
            }
            for &q in p {
                check_qubit(num_qubits, q)?;
                if std::mem::replace(&mut seen[q], true) {
                    return Err(Error::arg(format!("qubit {q} assigned to two particles")));
                }
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::arg(format!("qubit {q} belongs to no particle")));
        }
        Ok(Self {
            num_qubits,
            particles,
        })
    }

    /// One particle per qubit.
    pub fn per_qubit(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            particles: (0..num_qubits).map(|q| vec![q]).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn particle(&self, j: usize) -> &[usize] {
        &self.particles[j]
    }

    pub fn particles(&self) -> &[Vec<usize>] {
        &self.particles
    }

    /// Index of the particle holding `qubit`.
    pub fn owner(&self, qubit: usize) -> Option<usize> {
        self.particles.iter().position(|p| p.contains(&qubit))
    }

    pub fn qubits_of(&self, particles: &[usize]) -> Vec<usize> {
        particles
            .iter()
            .flat_map(|&j| self.particles[j].iter().copied())
            .collect()
    }
}

/// Reduced density matrix of the particles in `keep`, tracing out the rest.
pub fn reduced_density(
    state: &StateVector,
    keep: &[usize],
    grouping: &Grouping,
) -> Result<DMatrix<C64>> {
    if grouping.num_qubits() != state.num_qubits() {
        return Err(Error::arg("grouping does not match the register size"));
    }
    if keep.is_empty() || keep.len() >= grouping.len() {
        return Err(Error::arg("kept particles must form a non-empty proper subset"));
    }
    for (i, &j) in keep.iter().enumerate() {
        if j >= grouping.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: grouping.len(),
            });
        }
        if keep[i + 1..].contains(&j) {
            return Err(Error::arg(format!("particle {j} listed twice")));
        }
    }
    state.check_normalized()?;
    Ok(reduced_density_qubits(state, &grouping.qubits_of(keep)))
}

/// Partial trace over every qubit not in `kept`. The row index orders the
/// kept qubits as listed. Zero amplitudes are skipped, so sparse states
/// (GHZ-like) are cheap regardless of register size.
pub fn reduced_density_qubits(state: &StateVector, kept: &[usize]) -> DMatrix<C64> {
    let n = state.num_qubits();
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let dim = 1usize << kept.len();
    let mut entries: Vec<(usize, usize, C64)> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
        .map(|(i, &a)| (gather_bits(n, &traced, i), gather_bits(n, kept, i), a))
        .collect();
    entries.sort_unstable_by_key(|e| (e.0, e.1));

    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for run in entries.chunk_by(|a, b| a.0 == b.0) {
        for &(_, r, a) in run {
            for &(_, col, b) in run {
                rho[(r, col)] += a * b.conj();
            }
        }
    }
    rho
}

/// Eigenvalues of a Hermitian matrix in descending order.
///
/// Rows and columns that are identically zero contribute exact zero
/// eigenvalues and are dropped before diagonalization.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let dim = m.nrows();
    let support: Vec<usize> = (0..dim)
        .filter(|&i| m.row(i).iter().any(|z| z.re != 0.0 || z.im != 0.0))
        .collect();
    let mut eigs: Vec<f64> = match support.len() {
        0 => Vec::new(),
        1 => vec![m[(support[0], support[0])].re],
        k => {
            let sub = DMatrix::from_fn(k, k, |i, j| m[(support[i], support[j])]);
            sub.symmetric_eigenvalues().iter().copied().collect()
        }
    };
    eigs.resize(dim, 0.0);
    eigs.sort_by(|a, b| b.total_cmp(a));
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn w_state() -> StateVector {
        let a = (1.0f64 / 3.0).sqrt();
        let mut amps = vec![0.0; 8];
        amps[0b001] = a;
        amps[0b010] = a;
        amps[0b100] = a;
        StateVector::from_real(&amps).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let bell = StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        let rho = reduced_density(&bell, &[0], &Grouping::per_qubit(2)).unwrap();
        assert!((rho[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rho[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn product_state_marginal_is_pure() {
        let s = StateVector::new_basis_state(2, 0b01).unwrap();
        let rho = reduced_density(&s, &[0], &Grouping::per_qubit(2)).unwrap();
        assert_eq!(rho[(0, 0)].re, 1.0);
        assert_eq!(rho.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn w_state_marginal_spectrum() {
        // tracing qubits 2,3 of (|001⟩+|010⟩+|100⟩)/√3 leaves diag(2/3, 1/3)
        let rho = reduced_density(&w_state(), &[0], &Grouping::per_qubit(3)).unwrap();
        let e = hermitian_eigenvalues(&rho);
        assert!((e[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((e[1] - 1.0 / 3.0).abs() < 1e-12);
        let tr: f64 = (0..2).map(|i| rho[(i, i)].re).sum();
        assert!((tr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multi_qubit_particles() {
        let g = Grouping::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let rho = reduced_density(&w_state(), &[0], &g).unwrap();
        assert_eq!(rho.nrows(), 4);
        let e = hermitian_eigenvalues(&rho);
        assert!((e[0] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn argument_errors() {
        let s = w_state();
        let g = Grouping::per_qubit(3);
        assert!(reduced_density(&s, &[], &g).is_err());
        assert!(reduced_density(&s, &[0, 1, 2], &g).is_err());
        assert!(reduced_density(&s, &[0, 0], &g).is_err());
        assert!(reduced_density(&s, &[5], &g).is_err());
        let sub = StateVector::from_real(&[0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            reduced_density(&sub, &[0], &Grouping::per_qubit(2)),
            Err(Error::NotNormalized { .. })
        ));
        assert!(Grouping::new(2, vec![vec![0]]).is_err());
        assert!(Grouping::new(2, vec![vec![0, 1], vec![1]]).is_err());
    }
}
