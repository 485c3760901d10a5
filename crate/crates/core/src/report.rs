//! Machine-readable run reports: per-experiment records whose every judged
//! number carries the bound it was compared against.

use serde::Serialize;
use serde_json::Value;

use crate::deficit::SweepReport;

/// Which side of the bound counts as a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One judged number: the value, the bound, and the outcome.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Verdict {
    /// Passes when `value <= bound` (discrepancy-style checks).
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Verdict { name: name.into(), value, bound, relation: Relation::AtMost, pass: value <= bound }
    }

    /// Passes when `value >= bound` (floor-style checks, e.g. deficit
    /// nonnegativity down to a small negative floor).
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Verdict { name: name.into(), value, bound, relation: Relation::AtLeast, pass: value >= bound }
    }

    fn csv_row(&self, id: &str, command: &str) -> String {
        format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(id),
            csv_field(command),
            csv_field(&self.name),
            fmt17(self.value),
            fmt17(self.bound),
            match self.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            },
            if self.pass { "pass" } else { "fail" }
        )
    }
}

/// The result of one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    /// Experiment id (explicit, or `command-index` when the record had none).
    pub id: String,
    pub command: String,
    /// Echo of the inputs the experiment actually used.
    pub inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Full numeric outputs.
    pub outputs: Value,
    /// Judged checks; `pass` is their conjunction.
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    /// One-line human description of the headline outputs.
    pub summary: String,
    pub elapsed_secs: f64,
}

impl ReportRecord {
    pub fn new(id: String, command: &str, inputs: Value) -> Self {
        ReportRecord {
            id,
            command: command.to_string(),
            inputs,
            seed: None,
            outputs: Value::Null,
            verdicts: Vec::new(),
            pass: true,
            summary: String::new(),
            elapsed_secs: 0.0,
        }
    }

    /// Adds a verdict and folds it into the overall pass flag.
    pub fn judge(&mut self, verdict: Verdict) {
        self.pass &= verdict.pass;
        self.verdicts.push(verdict);
    }
}

/// A whole run: every record plus the conjunction of their outcomes.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub records: Vec<ReportRecord>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(records: Vec<ReportRecord>) -> Self {
        let pass = records.iter().all(|r| r.pass);
        RunReport { records, pass }
    }
}

/// Decimal with 17 significant digits; round-trips binary64 exactly.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV of every verdict in a run, one row per judged number.
pub fn verdicts_csv(records: &[ReportRecord]) -> String {
    let mut out = String::from("id,command,name,value,bound,relation,verdict\n");
    for r in records {
        for v in &r.verdicts {
            out.push_str(&v.csv_row(&r.id, &r.command));
        }
    }
    out
}

/// CSV of a sweep, one row per trial.  The seed column is the derived
/// per-trial stream seed, so any row can be replayed in isolation.  The
/// sweep must have been run with trial collection enabled.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("dim,gens,seed,deficit,scale,normalized_deficit,verdict\n");
    for t in &report.trial_records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            t.dim,
            t.generators,
            t.stream,
            fmt17(t.deficit),
            fmt17(t.scale),
            fmt17(t.normalized),
            if t.pass { "pass" } else { "fail" }
        ));
    }
    out
}
