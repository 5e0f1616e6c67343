//! One driver per subcommand. Every driver returns a [`ResultRecord`] and,
//! where a classical reference exists, records whether the simulation agrees
//! with it.
//!
//! Randomness: run `i` of experiment `e` draws from
//! `stream_rng(seed, (e << 32) | i)`, so batch runs are independent of each
//! other and of scheduling order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qsim::cmqm::{coherent_state_fidelity, evolve, ghz_staircase, random_circuit, CmqmConfig, RunStatus};
use qsim::instances::{
    brute_count, brute_qbf, brute_sat, brute_taut, parse_dimacs, parse_qdimacs_with, CnfFormula,
    FreeVariables, QbfInstance, Quantifier,
};
use qsim::qcore::{Grouping, StateVector};
use qsim::rng::stream_rng;
use qsim::solvers::{
    count_sat_nonlinear, nonunitary_reference, solve_sat_nonlinear, solve_sat_nonunitary,
    solve_taut_nonunitary, solve_tqbf_nonlinear,
};
use qsim::variant::{signaling_experiment, SignalingResult};
use qsim::C64;
use rayon::prelude::*;
use serde_json::Value;

use crate::args::{Backend, Cli, Command, Demo, Format};
use crate::record::{ConfigEcho, OracleCheck, Outcome, ResultRecord, Status, TraceSummary, SCHEMA_VERSION};
use crate::CliError;

/// Largest QBF accepted by `tqbf`, on every backend.
pub const MAX_TQBF_VARS: usize = 12;

/// Tolerance for comparing simulated probabilities with closed forms.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum ExperimentId {
    Sat = 1,
    Count = 2,
    Taut = 3,
    Tqbf = 4,
    Signal = 5,
    Cmqm = 6,
}

impl ExperimentId {
    pub fn stream(self, index: usize) -> u64 {
        ((self as u64) << 32) | index as u64
    }
}

/// Settings shared by every run of one invocation.
#[derive(Clone, Copy, Debug)]
pub struct RunContext {
    pub seed: u64,
    pub format: Format,
}

#[derive(Clone, Debug)]
pub struct CmqmParams {
    pub demo: Demo,
    pub mu: u32,
    pub theta: f64,
    pub qubits: usize,
    pub depth: usize,
    pub alpha: C64,
    pub cutoff: Option<usize>,
    pub trajectory: Option<PathBuf>,
}

/// Runs the parsed command. Results come back in input order.
pub fn run(cli: &Cli) -> Vec<Result<ResultRecord, CliError>> {
    let ctx = RunContext {
        seed: cli.seed,
        format: cli.format,
    };
    match &cli.command {
        Command::Sat { cnf, backend } => batch(cnf, |p, _| run_sat(p, *backend, &ctx)),
        Command::Count { cnf, backend } => batch(cnf, |p, _| run_count(p, *backend, &ctx)),
        Command::Taut { cnf, backend } => batch(cnf, |p, _| run_taut(p, *backend, &ctx)),
        Command::Tqbf {
            qdimacs,
            backend,
            strict,
        } => batch(qdimacs, |p, _| run_tqbf(p, *backend, *strict, &ctx)),
        Command::Signal { scale_n } => vec![run_signal(*scale_n, &ctx)],
        Command::Cmqm {
            demo,
            mu,
            theta,
            qubits,
            depth,
            alpha,
            alpha_im,
            cutoff,
            trajectory,
        } => {
            let params = CmqmParams {
                demo: *demo,
                mu: *mu,
                theta: *theta,
                qubits: *qubits,
                depth: *depth,
                alpha: C64::new(*alpha, *alpha_im),
                cutoff: *cutoff,
                trajectory: trajectory.clone(),
            };
            vec![run_cmqm(&params, 0, &ctx)]
        }
    }
}

fn batch<F>(paths: &[PathBuf], f: F) -> Vec<Result<ResultRecord, CliError>>
where
    F: Fn(&Path, usize) -> Result<ResultRecord, CliError> + Sync,
{
    paths
        .par_iter()
        .enumerate()
        .map(|(i, p)| f(p, i))
        .collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn instance_err(path: &Path) -> impl Fn(qsim::Error) -> CliError + '_ {
    move |source| CliError::Instance {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_cnf(path: &Path) -> Result<CnfFormula, CliError> {
    parse_dimacs(&read(path)?).map_err(instance_err(path))
}

pub fn load_qbf(path: &Path, strict: bool) -> Result<QbfInstance, CliError> {
    let free = if strict {
        FreeVariables::Reject
    } else {
        FreeVariables::OutermostExists
    };
    parse_qdimacs_with(&read(path)?, free).map_err(instance_err(path))
}

struct Draft {
    experiment: &'static str,
    backend: Option<Backend>,
    mu: Option<u32>,
    theta: Option<f64>,
    instance: Option<String>,
    params: BTreeMap<String, Value>,
    status: Status,
    result: Outcome,
    trace: Option<TraceSummary>,
    oracle: Option<OracleCheck>,
}

impl Draft {
    fn new(experiment: &'static str) -> Self {
        Self {
            experiment,
            backend: None,
            mu: None,
            theta: None,
            instance: None,
            params: BTreeMap::new(),
            status: Status::Ok,
            result: Outcome::default(),
            trace: None,
            oracle: None,
        }
    }

    fn finish(self, ctx: &RunContext, started: Instant) -> ResultRecord {
        ResultRecord {
            schema: SCHEMA_VERSION,
            experiment: self.experiment.to_string(),
            status: self.status,
            config: ConfigEcho {
                seed: ctx.seed,
                backend: self.backend,
                mu: self.mu,
                theta: self.theta,
                format: ctx.format,
                instance: self.instance,
                params: self.params,
            },
            result: self.result,
            trace: self.trace,
            oracle: self.oracle,
            duration_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

fn oracle(name: &str, expected: impl Into<Value>, agreement: bool) -> Option<OracleCheck> {
    Some(OracleCheck {
        name: name.to_string(),
        expected: expected.into(),
        agreement,
    })
}

fn unsupported(experiment: &str, backend: Backend) -> CliError {
    CliError::Usage(format!("{experiment} has no {backend:?} backend").to_lowercase())
}

pub fn run_sat(path: &Path, backend: Backend, ctx: &RunContext) -> Result<ResultRecord, CliError> {
    let started = Instant::now();
    let cnf = load_cnf(path)?;
    let mut d = Draft::new("sat");
    d.backend = Some(backend);
    d.instance = Some(path.display().to_string());
    d.result.num_vars = Some(cnf.num_vars());
    let expected = brute_sat(&cnf)?;
    let decision = match backend {
        Backend::Nonlinear => {
            let out = solve_sat_nonlinear(&cnf)?;
            d.trace = Some(TraceSummary::from(&out.trace));
            out.decision
        }
        Backend::Nonunitary => {
            let out = solve_sat_nonunitary(&cnf)?;
            let reference = nonunitary_reference(&cnf)?;
            d.result.p_flag_one = Some(out.p_flag_one);
            d.result.error_bound = Some(out.error_bound);
            d.result.reference = Some(reference);
            d.result.abs_error = Some((out.p_flag_one - reference).abs());
            out.decision
        }
        Backend::Brute => expected,
    };
    d.result.decision = Some(decision as u8);
    let within = d.result.abs_error.is_none_or(|e| e <= PROBABILITY_TOLERANCE);
    d.oracle = oracle("brute_sat", expected as u8, decision == expected && within);
    Ok(d.finish(ctx, started))
}

pub fn run_count(path: &Path, backend: Backend, ctx: &RunContext) -> Result<ResultRecord, CliError> {
    let started = Instant::now();
    let cnf = load_cnf(path)?;
    let mut d = Draft::new("count");
    d.backend = Some(backend);
    d.instance = Some(path.display().to_string());
    d.result.num_vars = Some(cnf.num_vars());
    let expected = brute_count(&cnf)?;
    let count = match backend {
        Backend::Nonlinear => {
            let out = count_sat_nonlinear(&cnf)?;
            d.trace = Some(TraceSummary::from(&out.trace));
            out.count
        }
        Backend::Brute => expected,
        Backend::Nonunitary => return Err(unsupported("count", backend)),
    };
    d.result.count = Some(count);
    d.oracle = oracle("brute_count", expected, count == expected);
    Ok(d.finish(ctx, started))
}

/// All-∀ prefix over the formula; its nonlinear evaluation is an AND over
/// every branch, i.e. a tautology check.
fn universal_closure(cnf: &CnfFormula) -> Result<QbfInstance, qsim::Error> {
    QbfInstance::new(vec![Quantifier::Forall; cnf.num_vars()], cnf.clone())
}

pub fn run_taut(path: &Path, backend: Backend, ctx: &RunContext) -> Result<ResultRecord, CliError> {
    let started = Instant::now();
    let cnf = load_cnf(path)?;
    let mut d = Draft::new("taut");
    d.backend = Some(backend);
    d.instance = Some(path.display().to_string());
    d.result.num_vars = Some(cnf.num_vars());
    let expected = brute_taut(&cnf)?;
    let decision = match backend {
        Backend::Nonunitary => {
            let out = solve_taut_nonunitary(&cnf)?;
            d.result.p_flag_zero = Some(out.p_flag_zero);
            out.decision
        }
        Backend::Nonlinear => {
            let out = solve_tqbf_nonlinear(&universal_closure(&cnf)?)?;
            d.trace = Some(TraceSummary::from(&out.trace));
            out.decision
        }
        Backend::Brute => expected,
    };
    d.result.decision = Some(decision as u8);
    d.oracle = oracle("brute_taut", expected as u8, decision == expected);
    Ok(d.finish(ctx, started))
}

pub fn run_tqbf(path: &Path, backend: Backend, strict: bool, ctx: &RunContext) -> Result<ResultRecord, CliError> {
    let started = Instant::now();
    let qbf = load_qbf(path, strict)?;
    let n = qbf.num_vars();
    if n > MAX_TQBF_VARS {
        return Err(CliError::Instance {
            path: path.display().to_string(),
            source: qsim::Error::ResourceBound {
                what: "quantified variables",
                value: n,
                max: MAX_TQBF_VARS,
            },
        });
    }
    let mut d = Draft::new("tqbf");
    d.backend = Some(backend);
    d.instance = Some(path.display().to_string());
    d.params.insert("strict".into(), strict.into());
    d.result.num_vars = Some(n);
    let expected = brute_qbf(&qbf)?;
    let decision = match backend {
        Backend::Nonlinear => {
            let out = solve_tqbf_nonlinear(&qbf)?;
            d.trace = Some(TraceSummary::from(&out.trace));
            out.decision
        }
        Backend::Brute => expected,
        Backend::Nonunitary => return Err(unsupported("tqbf", backend)),
    };
    d.result.decision = Some(decision as u8);
    d.oracle = oracle("brute_qbf", expected as u8, decision == expected);
    Ok(d.finish(ctx, started))
}

pub fn run_signal(scale_n: usize, ctx: &RunContext) -> Result<ResultRecord, CliError> {
    let started = Instant::now();
    if scale_n == 0 {
        return Err(CliError::Usage("--scale-n must be at least 1".into()));
    }
    let out = signaling_experiment(scale_n)?;
    let reference = SignalingResult::closed_form(scale_n);
    let err = (out.p_bob_zero_given_g - reference)
        .abs()
        .max((out.p_bob_one_given_xgx - reference).abs());
    let mut d = Draft::new("signal");
    d.params.insert("scale_n".into(), scale_n.into());
    d.result.p_bob_zero_given_g = Some(out.p_bob_zero_given_g);
    d.result.p_bob_one_given_xgx = Some(out.p_bob_one_given_xgx);
    d.result.reference = Some(reference);
    d.result.abs_error = Some(err);
    d.oracle = oracle("closed_form", reference, err < PROBABILITY_TOLERANCE);
    Ok(d.finish(ctx, started))
}

/// First step at which `ξ(GHZ_k) = k` reaches `θμ` on an `n`-qubit staircase.
pub fn ghz_first_collapse(n: usize, mu: u32, theta: f64) -> Option<usize> {
    let k = (theta * mu as f64).ceil().max(2.0);
    (k <= n as f64).then_some(k as usize)
}

/// Default Fock cutoff for a coherent amplitude: `⌈|α|² + 8|α| + 16⌉`.
pub fn default_cutoff(alpha: C64) -> usize {
    let a = alpha.norm();
    (a * a + 8.0 * a + 16.0).ceil() as usize
}

pub fn run_cmqm(p: &CmqmParams, index: usize, ctx: &RunContext) -> Result<ResultRecord, CliError> {
    let started = Instant::now();
    let config = CmqmConfig::new(p.mu, p.theta)?;
    let mut d = Draft::new("cmqm");
    d.mu = Some(p.mu);
    d.theta = Some(p.theta);
    d.params.insert("demo".into(), serde_json::to_value(p.demo).unwrap_or(Value::Null));

    if p.demo == Demo::CoherentFidelity {
        let cutoff = p.cutoff.unwrap_or_else(|| default_cutoff(p.alpha));
        d.params.insert("alpha_re".into(), p.alpha.re.into());
        d.params.insert("alpha_im".into(), p.alpha.im.into());
        d.params.insert("cutoff".into(), cutoff.into());
        d.result.fidelity = Some(coherent_state_fidelity(p.alpha, cutoff, p.mu)?);
        return Ok(d.finish(ctx, started));
    }

    let n = p.qubits;
    if n == 0 {
        return Err(CliError::Usage("--qubits must be at least 1".into()));
    }
    let mut rng = stream_rng(ctx.seed, ExperimentId::Cmqm.stream(index));
    d.params.insert("qubits".into(), n.into());
    let circuit = match p.demo {
        Demo::GhzStaircase => ghz_staircase(n),
        _ => {
            d.params.insert("depth".into(), p.depth.into());
            random_circuit(n, p.depth, &mut rng)?
        }
    };
    let initial = StateVector::new_basis_state(n, 0)?;
    let traj = evolve(&initial, &circuit, &Grouping::per_qubit(n), &config, &mut rng)?;

    if let Some(path) = &p.trajectory {
        crate::record::write_atomic(path, &crate::record::trajectory_csv(&traj.steps)?)?;
    }
    if let RunStatus::Instability { .. } = traj.status {
        d.status = Status::Instability;
    }
    d.result.xi_max = Some(traj.steps.iter().map(|s| s.xi).fold(0.0, f64::max));
    d.result.collapse_steps = Some(traj.collapse_events.clone());
    if p.demo == Demo::GhzStaircase {
        let expected = ghz_first_collapse(n, p.mu, p.theta);
        d.oracle = oracle(
            "ghz_entropy_count",
            expected.map_or(Value::Null, Value::from),
            traj.collapse_events.first().copied() == expected,
        );
    }
    d.result.trajectory = Some(traj.steps);
    Ok(d.finish(ctx, started))
}
