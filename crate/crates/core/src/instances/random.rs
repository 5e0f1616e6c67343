//! Seeded instance generators.
//!
//! Both generators draw from [`crate::rng::stream_rng`]`(seed, 0)` and use
//! only `uniform_below` and raw `next_u64` bits. Per clause: variables are
//! picked by a partial Fisher-Yates shuffle of `1..=n` (one `uniform_below`
//! draw per position), then one `next_u64` supplies the signs, bit `i` giving
//! the sign of literal `i` (set = negated). QBF prefixes use one further
//! `next_u64` per variable, low bit set = ∀.

use rand::RngCore;

use super::{CnfFormula, QbfInstance, Quantifier};
use crate::rng::{stream_rng, uniform_below};
use crate::{Error, Result};

fn clauses<R: RngCore>(rng: &mut R, n: usize, m: usize, k: usize) -> Vec<Vec<i32>> {
    (0..m)
        .map(|_| {
            let mut vars: Vec<i32> = (1..=n as i32).collect();
            for i in 0..k {
                let j = i + uniform_below(rng, (n - i) as u64) as usize;
                vars.swap(i, j);
            }
            let signs = rng.next_u64();
            vars[..k]
                .iter()
                .enumerate()
                .map(|(i, &v)| if signs >> i & 1 == 1 { -v } else { v })
                .collect()
        })
        .collect()
}

/// `m` clauses of `k` distinct variables each, over `n` variables.
pub fn random_ksat(n: usize, m: usize, k: usize, seed: u64) -> Result<CnfFormula> {
    if k > n {
        return Err(Error::arg(format!("clause width {k} exceeds {n} variables")));
    }
    if k > 64 {
        return Err(Error::arg("clause width above 64"));
    }
    let mut rng = stream_rng(seed, 0);
    CnfFormula::new(n, clauses(&mut rng, n, m, k))
}

/// Random prefix over a random k-CNF matrix.
pub fn random_qbf(n: usize, m: usize, k: usize, seed: u64) -> Result<QbfInstance> {
    if k > n {
        return Err(Error::arg(format!("clause width {k} exceeds {n} variables")));
    }
    let mut rng = stream_rng(seed, 0);
    let matrix = CnfFormula::new(n, clauses(&mut rng, n, m, k))?;
    let prefix = (0..n)
        .map(|_| {
            if rng.next_u64() & 1 == 1 {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            }
        })
        .collect();
    QbfInstance::new(prefix, matrix)
}
