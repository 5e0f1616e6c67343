//! Result records and their JSON/CSV encodings. Field names and CSV column
//! order are frozen by `schema/result.schema.json` (version in
//! [`SCHEMA_VERSION`]).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use qsim::cmqm::StepRecord;
use qsim::solvers::SolverTrace;
use serde::Serialize;
use serde_json::Value;

use crate::args::{Backend, Format};
use crate::CliError;

pub const SCHEMA_VERSION: &str = "qsim.result/1";

pub const SUMMARY_COLUMNS: [&str; 11] = [
    "experiment",
    "status",
    "seed",
    "backend",
    "instance",
    "decision",
    "count",
    "probability",
    "reference",
    "oracle_agreement",
    "duration_ms",
];

pub const TRAJECTORY_COLUMNS: [&str; 4] = ["step", "xi", "norm_loss", "collapsed"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Instability,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub backend: Option<Backend>,
    pub mu: Option<u32>,
    pub theta: Option<f64>,
    pub format: Format,
    pub instance: Option<String>,
    pub params: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Outcome {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_vars: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_flag_one: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_flag_zero: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_bob_zero_given_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_bob_one_given_xgx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collapse_steps: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<StepRecord>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceSummary {
    pub gates: usize,
    pub flag_one_terms: Vec<u64>,
    pub flag_disentangled: bool,
}

impl From<&SolverTrace> for TraceSummary {
    fn from(t: &SolverTrace) -> Self {
        Self {
            gates: t.steps.len(),
            flag_one_terms: t.steps.iter().map(|s| s.flag_one_terms).collect(),
            flag_disentangled: t.final_flag_disentangled,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub expected: Value,
    pub agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub schema: &'static str,
    pub experiment: String,
    pub status: Status,
    pub config: ConfigEcho,
    pub result: Outcome,
    pub trace: Option<TraceSummary>,
    pub oracle: Option<OracleCheck>,
    pub duration_ms: f64,
}

impl ResultRecord {
    pub fn agreement(&self) -> Option<bool> {
        self.oracle.as_ref().map(|o| o.agreement)
    }

    /// The value reported in the summary CSV `probability` column.
    fn headline_probability(&self) -> Option<f64> {
        let r = &self.result;
        r.p_flag_one
            .or(r.p_flag_zero)
            .or(r.p_bob_zero_given_g)
            .or(r.fidelity)
    }

    fn summary_row(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            self.experiment.clone(),
            serde_plain(&self.status),
            self.config.seed.to_string(),
            opt(self.config.backend.map(|b| serde_plain(&b))),
            opt(self.config.instance.clone()),
            opt(self.result.decision.map(|d| d.to_string())),
            opt(self.result.count.map(|c| c.to_string())),
            opt(self.headline_probability().map(|p| p.to_string())),
            opt(self.result.reference.map(|p| p.to_string())),
            opt(self.agreement().map(|a| a.to_string())),
            self.duration_ms.to_string(),
        ]
    }
}

fn serde_plain<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

pub fn to_json(records: &[ResultRecord]) -> Result<String, CliError> {
    let text = match records {
        [single] => serde_json::to_string_pretty(single),
        many => serde_json::to_string_pretty(many),
    }
    .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(text + "\n")
}

fn csv_err(e: impl std::fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}

pub fn to_summary_csv(records: &[ResultRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record(r.summary_row()).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

pub fn trajectory_csv(steps: &[StepRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRAJECTORY_COLUMNS).map_err(csv_err)?;
    for s in steps {
        w.write_record([
            s.step.to_string(),
            s.xi.to_string(),
            s.norm_loss.to_string(),
            s.collapsed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

/// Renders the records in the requested format. A single cmqm trajectory
/// record renders as its trajectory CSV.
pub fn render(records: &[ResultRecord], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(records),
        Format::Csv => match records {
            [r] if r.result.trajectory.is_some() => {
                trajectory_csv(r.result.trajectory.as_deref().unwrap_or_default())
            }
            _ => to_summary_csv(records),
        },
    }
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial result.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}
