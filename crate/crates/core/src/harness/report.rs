use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A failing instance: the operator word, the input basis key and both
/// sides in canonical text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub word: String,
    pub input: String,
    pub expected: String,
    pub actual: String,
}

/// The result of one relation or identity family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub instances_checked: u64,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub resolved_constants: BTreeMap<String, String>,
}

impl RelationReport {
    pub fn new(relation: impl Into<String>) -> Self {
        RelationReport {
            relation: relation.into(),
            instances_checked: 0,
            status: Status::Pass,
            witnesses: Vec::new(),
            resolved_constants: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub(crate) fn record_failure(&mut self, w: Witness) {
        self.status = Status::Fail;
        if self.witnesses.len() < super::MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    /// Folds another fragment of the same relation into this one.
    pub(crate) fn absorb(&mut self, other: RelationReport) {
        self.instances_checked += other.instances_checked;
        if !other.passed() {
            self.status = Status::Fail;
        }
        for w in other.witnesses {
            if self.witnesses.len() < super::MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self.resolved_constants.extend(other.resolved_constants);
    }
}

/// A full suite run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub matrix: Vec<Vec<i64>>,
    pub degree_cap: u32,
    pub lattice_box: u32,
    pub mode_range: i64,
    pub relations: Vec<RelationReport>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.passed())
    }

    pub fn relation(&self, tag: &str) -> Option<&RelationReport> {
        self.relations.iter().find(|r| r.relation == tag)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The report with the wall time zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Report {
        Report {
            wall_time_ms: 0,
            ..self.clone()
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.relations {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(
                out,
                "{status} {:<12} {} instances",
                r.relation, r.instances_checked
            );
            for (k, v) in &r.resolved_constants {
                let _ = writeln!(out, "    {k} = {v}");
            }
            for w in &r.witnesses {
                let _ = writeln!(out, "    witness: {} on {}", w.word, w.input);
                let _ = writeln!(out, "      expected: {}", w.expected);
                let _ = writeln!(out, "      actual:   {}", w.actual);
            }
        }
        let _ = writeln!(out, "wall time: {} ms", self.wall_time_ms);
        out
    }
}
