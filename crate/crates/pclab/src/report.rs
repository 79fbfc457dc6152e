//! Machine-readable verification reports.

use std::collections::BTreeMap;

use pclab_core::bitset::VertexSet;
use pclab_core::ff::{Elem, FieldInfo};
use serde::{Deserialize, Serialize};

use crate::job::Params;

/// Bumped whenever the JSON layout changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

/// The published JSON schema for [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted,
    HypothesisNotApplicable,
    Timeout,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Refuted => 1,
            Verdict::HypothesisNotApplicable => 2,
            Verdict::Timeout => 3,
        }
    }
}

/// Exit code for invalid parameters or command-line misuse.
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub omega: Option<usize>,
    pub counts: BTreeMap<String, u64>,
    pub margins: BTreeMap<String, f64>,
    pub timings_ms: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bounds: Option<Bounds>,
}

/// A sufficient condition from the literature, shown for orientation only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Advisory {
    pub name: String,
    /// The condition reads `p > threshold`.
    pub threshold: f64,
    pub p: u64,
    pub inside: bool,
}

impl Advisory {
    pub fn new(name: &str, threshold: f64, p: u64) -> Self {
        Self {
            name: name.to_string(),
            threshold,
            p,
            inside: p as f64 > threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// What was checked, in words.
    pub claim: String,
    pub params: Params,
    pub field: Option<FieldInfo>,
    pub verdict: Verdict,
    /// Element lists as sorted discrete logs, zero written as `-1`.
    pub witnesses: Vec<Vec<i64>>,
    pub metrics: Metrics,
    pub advisory: Vec<Advisory>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, claim: impl Into<String>, params: &Params) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            claim: claim.into(),
            params: params.clone(),
            field: None,
            verdict: Verdict::Verified,
            witnesses: Vec::new(),
            metrics: Metrics::default(),
            advisory: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn count(&mut self, key: &str, value: u64) {
        self.metrics.counts.insert(key.to_string(), value);
    }

    pub fn margin(&mut self, key: &str, value: f64) {
        self.metrics.margins.insert(key.to_string(), value);
    }

    pub fn timing(&mut self, key: &str, ms: f64) {
        self.metrics.timings_ms.insert(key.to_string(), ms);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn witness_set(&mut self, set: &VertexSet) {
        self.witnesses.push(set.dlog_list());
    }

    pub fn witness_elems(&mut self, elems: &[Elem]) {
        let mut codes: Vec<i64> = elems.iter().map(|x| x.dlog_code()).collect();
        codes.sort_unstable();
        self.witnesses.push(codes);
    }

    /// Downgrades the verdict: refuted beats verified; timeout and
    /// not-applicable are set explicitly.
    pub fn refute(&mut self) {
        if self.verdict == Verdict::Verified {
            self.verdict = Verdict::Refuted;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// The report without wall-clock timings, for reproducibility checks.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        r.metrics.timings_ms.clear();
        r
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let verdict = serde_json::to_value(self.verdict)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let mut s = format!("{}: {} [{}]", self.command, self.claim, verdict);
        if let Some(omega) = self.metrics.omega {
            s.push_str(&format!(" omega={omega}"));
        }
        for (k, v) in &self.metrics.counts {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }
}
