//! Verdict records shared by all bounded checks.

use serde::Serialize;
use serde_json::Value;

/// One checked clause: an id such as `pi.6`, its verdict, and a replayable
/// counterexample when it fails.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub id: String,
    pub description: String,
    pub pass: bool,
    pub counterexample: Option<Value>,
    /// Number of instances examined.
    pub checked: u64,
}

impl Verdict {
    pub fn new(id: impl Into<String>, description: impl Into<String>) -> Self {
        Verdict {
            id: id.into(),
            description: description.into(),
            pass: true,
            counterexample: None,
            checked: 0,
        }
    }

    /// Records one instance; the first failure wins.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.counterexample = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: Value) {
        self.record(false, || witness)
    }

    /// Folds another verdict for the same clause into this one.
    pub fn merge(&mut self, other: Verdict) {
        self.checked += other.checked;
        if !other.pass && self.pass {
            self.pass = false;
            self.counterexample = other.counterexample;
        }
    }
}

/// Verdicts for a family of clauses checked up to a size bound.
#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub subject: String,
    pub bound: usize,
    pub verdicts: Vec<Verdict>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>, bound: usize) -> Self {
        LawReport { subject: subject.into(), bound, verdicts: Vec::new() }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v)
    }

    pub fn extend(&mut self, other: LawReport) {
        self.verdicts.extend(other.verdicts)
    }
}
