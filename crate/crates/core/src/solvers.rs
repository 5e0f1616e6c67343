//! Decision procedures on variant-QM hardware: nonlinear SAT, nonlinear
//! #SAT, non-unitary SAT/TAUT and nonlinear TQBF.
//!
//! Oracle values are written classically into the flag (or counter) register
//! during state preparation. Index qubit `k` holds variable `k + 1`.

use serde::{Deserialize, Serialize};

use crate::instances::{nonunitary_success_probability, CnfFormula, QbfInstance, Quantifier};
use crate::qcore::{marginal_distribution, qubit_mask, MeasurementRule, StateVector, SUPPORT_EPS};
use crate::variant::{apply_g, apply_xgx, disentangled_value, nonlinear_count, nonlinear_gate, NonlinearMode};
use crate::{Error, Result};

/// Largest index register the simulated decision backends accept.
pub const MAX_SIMULATED_VARS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    NonlinearOr,
    NonlinearAnd,
    NonlinearCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub gate: GateKind,
    pub control: usize,
    /// Supported basis states whose flag is 1 (for counting: whose counter
    /// is nonzero) after this gate.
    pub flag_one_terms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub steps: Vec<TraceStep>,
    pub final_flag_disentangled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatOutcome {
    pub decision: bool,
    pub trace: SolverTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountOutcome {
    pub count: u64,
    pub trace: SolverTrace,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonunitaryOutcome {
    pub decision: bool,
    pub p_flag_one: f64,
    pub error_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TautOutcome {
    pub decision: bool,
    pub p_flag_zero: f64,
}

fn check_size(n: usize, extra: usize) -> Result<()> {
    if n > MAX_SIMULATED_VARS {
        return Err(Error::ResourceBound {
            what: "variables",
            value: n,
            max: MAX_SIMULATED_VARS,
        });
    }
    let qubits = n + extra;
    if qubits > crate::qcore::MAX_QUBITS {
        return Err(Error::ResourceBound {
            what: "qubits",
            value: qubits,
            max: crate::qcore::MAX_QUBITS,
        });
    }
    Ok(())
}

fn prepare(cnf: &CnfFormula, width: usize) -> Result<StateVector> {
    StateVector::prepare_oracle_superposition(cnf.num_vars(), width, |x| u64::from(cnf.eval_index(x)))
}

fn terms_with(state: &StateVector, mask: usize) -> u64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, a)| i & mask != 0 && a.norm() > SUPPORT_EPS)
        .count() as u64
}

/// Runs nonlinear gates between each `(control, mode)` pair and the flag, in
/// the given order, and reads the disentangled flag.
fn run_flag_gates(state: StateVector, schedule: &[(usize, NonlinearMode)]) -> Result<SatOutcome> {
    let n = state.num_qubits() - 1;
    let flag_mask = qubit_mask(n + 1, n);
    let mut state = state;
    let mut trace = SolverTrace::default();
    for &(control, mode) in schedule {
        state = nonlinear_gate(&state, control, n, mode)?;
        trace.steps.push(TraceStep {
            gate: match mode {
                NonlinearMode::Or => GateKind::NonlinearOr,
                NonlinearMode::And => GateKind::NonlinearAnd,
            },
            control,
            flag_one_terms: terms_with(&state, flag_mask),
        });
    }
    let value = disentangled_value(&state, &[n])
        .ok_or_else(|| Error::Consistency(format!("flag still entangled after {} gates", schedule.len())))?;
    trace.final_flag_disentangled = true;
    Ok(SatOutcome {
        decision: value == 1,
        trace,
    })
}

/// Nonlinear SAT: one nonlinear OR per index qubit, ascending.
pub fn solve_sat_nonlinear(cnf: &CnfFormula) -> Result<SatOutcome> {
    let n = cnf.num_vars();
    check_size(n, 1)?;
    let schedule: Vec<_> = (0..n).map(|k| (k, NonlinearMode::Or)).collect();
    run_flag_gates(prepare(cnf, 1)?, &schedule)
}

/// Nonlinear SAT with the index qubits paired in a caller-chosen order.
pub fn solve_sat_nonlinear_in_order(cnf: &CnfFormula, order: &[usize]) -> Result<SatOutcome> {
    let n = cnf.num_vars();
    check_size(n, 1)?;
    check_permutation(order, n)?;
    let schedule: Vec<_> = order.iter().map(|&k| (k, NonlinearMode::Or)).collect();
    run_flag_gates(prepare(cnf, 1)?, &schedule)
}

/// Nonlinear #SAT with an `(n+1)`-qubit counter initialized to `f(x)`.
pub fn count_sat_nonlinear(cnf: &CnfFormula) -> Result<CountOutcome> {
    let n = cnf.num_vars();
    let w = n + 1;
    check_size(n, w)?;
    let mut state = prepare(cnf, w)?;
    let counter: Vec<usize> = (n..n + w).collect();
    let nonzero_mask = (1usize << w) - 1;
    let mut trace = SolverTrace::default();
    for control in 0..n {
        state = nonlinear_count(&state, control, &counter)?;
        trace.steps.push(TraceStep {
            gate: GateKind::NonlinearCount,
            control,
            flag_one_terms: terms_with(&state, nonzero_mask),
        });
    }
    let count = disentangled_value(&state, &counter)
        .ok_or_else(|| Error::Consistency("counter still entangled".into()))?;
    trace.final_flag_disentangled = true;
    Ok(CountOutcome {
        count: count as u64,
        trace,
    })
}

/// Non-unitary SAT: suppress the flag-0 amplitudes with `G` at scale `n` and
/// read the flag. `error_bound` is `2^(-2n)`.
pub fn solve_sat_nonunitary(cnf: &CnfFormula) -> Result<NonunitaryOutcome> {
    let n = cnf.num_vars();
    check_size(n, 1)?;
    let state = apply_g(&prepare(cnf, 1)?, n, n)?;
    let p_flag_one = marginal_distribution(&state, MeasurementRule::born(), &[n])?[1];
    Ok(NonunitaryOutcome {
        decision: p_flag_one > 0.5,
        p_flag_one,
        error_bound: 2f64.powi(-2 * n as i32),
    })
}

/// Non-unitary TAUT: suppress the flag-1 amplitudes with `XGX`; the formula
/// is a tautology iff flag 0 is not the likely outcome.
pub fn solve_taut_nonunitary(cnf: &CnfFormula) -> Result<TautOutcome> {
    let n = cnf.num_vars();
    check_size(n, 1)?;
    let state = apply_xgx(&prepare(cnf, 1)?, n, n)?;
    let p_flag_zero = marginal_distribution(&state, MeasurementRule::born(), &[n])?[0];
    Ok(TautOutcome {
        decision: p_flag_zero <= 0.5,
        p_flag_zero,
    })
}

/// Reference value for [`solve_sat_nonunitary`] from the solution count.
pub fn nonunitary_reference(cnf: &CnfFormula) -> Result<f64> {
    let m = crate::instances::brute_count(cnf)?;
    nonunitary_success_probability(m, cnf.num_vars())
}

fn mode_of(q: Quantifier) -> NonlinearMode {
    match q {
        Quantifier::Exists => NonlinearMode::Or,
        Quantifier::Forall => NonlinearMode::And,
    }
}

/// Nonlinear TQBF: OR for ∃ and AND for ∀, from the innermost variable
/// (qubit `n-1`) outwards.
pub fn solve_tqbf_nonlinear(qbf: &QbfInstance) -> Result<SatOutcome> {
    let n = qbf.num_vars();
    let order: Vec<usize> = (0..n).rev().collect();
    solve_tqbf_in_order(qbf, &order)
}

/// TQBF gate sequence in an arbitrary qubit order. Only innermost-first
/// order evaluates the quantifiers correctly; other orders exist to show that.
pub fn solve_tqbf_in_order(qbf: &QbfInstance, order: &[usize]) -> Result<SatOutcome> {
    let n = qbf.num_vars();
    check_size(n, 1)?;
    check_permutation(order, n)?;
    let schedule: Vec<_> = order.iter().map(|&k| (k, mode_of(qbf.prefix()[k]))).collect();
    run_flag_gates(prepare(qbf.matrix(), 1)?, &schedule)
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &k in order {
        if k >= n || std::mem::replace(&mut seen[k], true) {
            return Err(Error::arg(format!("order {order:?} is not a permutation of 0..{n}")));
        }
    }
    if order.len() != n {
        return Err(Error::arg(format!("order {order:?} is not a permutation of 0..{n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{brute_qbf, Quantifier::*};

    fn cnf(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn sat_examples() {
        let unsat = solve_sat_nonlinear(&cnf(1, &[&[1], &[-1]])).unwrap();
        assert!(!unsat.decision);
        assert_eq!(unsat.trace.steps.len(), 1);
        assert!(solve_sat_nonlinear(&cnf(2, &[&[1, 2]])).unwrap().decision);
    }

    #[test]
    fn unique_solution_doubles() {
        let out = solve_sat_nonlinear(&cnf(2, &[&[1], &[2]])).unwrap();
        assert!(out.decision);
        let counts: Vec<u64> = out.trace.steps.iter().map(|s| s.flag_one_terms).collect();
        assert_eq!(counts, [2, 4]);
        assert!(out.trace.final_flag_disentangled);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_sat_nonlinear(&cnf(1, &[&[1], &[-1]])).unwrap().count, 0);
        assert_eq!(count_sat_nonlinear(&cnf(2, &[&[1, 2]])).unwrap().count, 3);
        assert_eq!(count_sat_nonlinear(&cnf(3, &[])).unwrap().count, 8);
    }

    #[test]
    fn nonunitary_examples() {
        let out = solve_sat_nonunitary(&cnf(2, &[&[1], &[-1]])).unwrap();
        assert_eq!(out.p_flag_one, 0.0);
        assert!(!out.decision);
        let out = solve_sat_nonunitary(&cnf(2, &[&[1], &[2]])).unwrap();
        assert!((out.p_flag_one - 256.0 / 259.0).abs() < 1e-12);
        assert_eq!(out.error_bound, 1.0 / 16.0);
        let out = solve_sat_nonunitary(&cnf(3, &[])).unwrap();
        assert_eq!(out.p_flag_one, 1.0);
    }

    #[test]
    fn taut_examples() {
        assert!(solve_taut_nonunitary(&cnf(2, &[])).unwrap().decision);
        assert!(!solve_taut_nonunitary(&cnf(1, &[&[1]])).unwrap().decision);
        assert!(solve_taut_nonunitary(&cnf(1, &[&[1, -1]])).unwrap().decision);
    }

    #[test]
    fn tqbf_examples() {
        let q = |p, m| QbfInstance::new(p, m).unwrap();
        assert!(solve_tqbf_nonlinear(&q(vec![Exists], cnf(1, &[&[1]]))).unwrap().decision);
        assert!(!solve_tqbf_nonlinear(&q(vec![Forall], cnf(1, &[&[1]]))).unwrap().decision);
        let alt = q(
            vec![Exists, Forall, Exists, Forall],
            cnf(4, &[&[1, -3, 4], &[-2, 3, -4]]),
        );
        assert!(solve_tqbf_nonlinear(&alt).unwrap().decision);
    }

    #[test]
    fn tqbf_order_matters() {
        // ∀x1 ∃x2 (x1 ∨ x2)(¬x1 ∨ ¬x2): true, but evaluating x1 first gives false
        let q = QbfInstance::new(vec![Forall, Exists], cnf(2, &[&[1, 2], &[-1, -2]])).unwrap();
        assert!(brute_qbf(&q).unwrap());
        assert!(solve_tqbf_nonlinear(&q).unwrap().decision);
        assert!(!solve_tqbf_in_order(&q, &[0, 1]).unwrap().decision);
    }

    #[test]
    fn size_and_order_validation() {
        let big = CnfFormula::new(15, vec![]).unwrap();
        assert!(matches!(solve_sat_nonlinear(&big), Err(Error::ResourceBound { .. })));
        let twelve = CnfFormula::new(12, vec![]).unwrap();
        assert!(matches!(count_sat_nonlinear(&twelve), Err(Error::ResourceBound { .. })));
        let f = cnf(2, &[&[1]]);
        assert!(solve_sat_nonlinear_in_order(&f, &[0, 0]).is_err());
        assert!(solve_sat_nonlinear_in_order(&f, &[1]).is_err());
        assert!(solve_sat_nonlinear_in_order(&f, &[1, 0]).unwrap().decision);
    }
}
