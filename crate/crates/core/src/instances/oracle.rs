//! Exhaustive classical oracles. These enumerate assignments directly and
//! never touch the simulator, so they serve as independent ground truth.

use super::{CnfFormula, QbfInstance, Quantifier};
use crate::{Error, Result};

pub const MAX_BRUTE_VARS: usize = 24;

fn check_bound(n: usize) -> Result<()> {
    if n > MAX_BRUTE_VARS {
        return Err(Error::ResourceBound {
            what: "variables",
            value: n,
            max: MAX_BRUTE_VARS,
        });
    }
    Ok(())
}

pub fn brute_sat(cnf: &CnfFormula) -> Result<bool> {
    check_bound(cnf.num_vars())?;
    Ok((0..1usize << cnf.num_vars()).any(|x| cnf.eval_index(x)))
}

pub fn brute_count(cnf: &CnfFormula) -> Result<u64> {
    check_bound(cnf.num_vars())?;
    Ok((0..1usize << cnf.num_vars())
        .filter(|&x| cnf.eval_index(x))
        .count() as u64)
}

pub fn brute_taut(cnf: &CnfFormula) -> Result<bool> {
    check_bound(cnf.num_vars())?;
    Ok((0..1usize << cnf.num_vars()).all(|x| cnf.eval_index(x)))
}

/// Recursive evaluation: ∃ is OR over both branches, ∀ is AND.
pub fn brute_qbf(qbf: &QbfInstance) -> Result<bool> {
    check_bound(qbf.num_vars())?;
    fn rec(qbf: &QbfInstance, depth: usize, x: usize) -> bool {
        let n = qbf.num_vars();
        if depth == n {
            return qbf.matrix().eval_index(x);
        }
        let bit = 1 << (n - 1 - depth);
        match qbf.prefix()[depth] {
            Quantifier::Exists => rec(qbf, depth + 1, x) || rec(qbf, depth + 1, x | bit),
            Quantifier::Forall => rec(qbf, depth + 1, x) && rec(qbf, depth + 1, x | bit),
        }
    }
    Ok(rec(qbf, 0, 0))
}

/// Flag-1 probability after suppressing flag-0 amplitudes by `2^(-2n)`, for a
/// formula with `solutions` satisfying assignments out of `2^n`:
/// `M / (M + (2^n - M)·2^(-4n))`.
pub fn nonunitary_success_probability(solutions: u64, n: usize) -> Result<f64> {
    if n > 62 {
        return Err(Error::arg(format!("n = {n} too large")));
    }
    let total = 1u64 << n;
    if solutions > total {
        return Err(Error::arg(format!(
            "solution count {solutions} exceeds 2^{n}"
        )));
    }
    let m = solutions as f64;
    let rest = (total - solutions) as f64 * 2f64.powi(-4 * n as i32);
    if solutions == 0 {
        return Ok(0.0);
    }
    Ok(m / (m + rest))
}
