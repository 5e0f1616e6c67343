#![allow(dead_code)]

use qsim::qcore::StateVector;
use qsim::rng::{stream_rng, uniform_f64};
use qsim::C64;

/// Random normalized state with components drawn uniformly from [-1, 1].
pub fn random_state(num_qubits: usize, seed: u64) -> StateVector {
    let mut rng = stream_rng(seed, 99);
    let amps: Vec<C64> = (0..1usize << num_qubits)
        .map(|_| C64::new(2.0 * uniform_f64(&mut rng) - 1.0, 2.0 * uniform_f64(&mut rng) - 1.0))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

pub fn ghz(n: usize) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![0.0; 1 << n];
    v[0] = h;
    v[(1 << n) - 1] = h;
    StateVector::from_real(&v).unwrap()
}

pub fn w_state(n: usize) -> StateVector {
    let a = 1.0 / (n as f64).sqrt();
    let mut v = vec![0.0; 1 << n];
    for k in 0..n {
        v[1 << k] = a;
    }
    StateVector::from_real(&v).unwrap()
}
