//! JSON reports shared by the command-line front end and the tests.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::alignment::ExhaustiveVerdict;
use crate::degree::Degree;
use crate::graph::KGraph;
use crate::tally::PropertyReport;

pub const SCHEMA: &str = "kgraph-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

/// One named outcome. A verdict that is not exact names the bound it holds
/// up to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Verdict {
    pub fn pass(name: &str) -> Self {
        Verdict { name: name.into(), status: Status::Pass, exact: true, bound: None, witness: None, detail: Value::Null }
    }

    pub fn fail(name: &str, witness: impl Into<String>) -> Self {
        Verdict { status: Status::Fail, witness: Some(witness.into()), ..Self::pass(name) }
    }

    pub fn unknown(name: &str, bound: &Degree) -> Self {
        Verdict { status: Status::Unknown, exact: false, bound: Some(bound.entries().to_vec()), ..Self::pass(name) }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    /// Marks a passing verdict as holding only up to `bound`.
    pub fn up_to(mut self, bound: &Degree) -> Self {
        self.exact = false;
        self.bound = Some(bound.entries().to_vec());
        self
    }

    pub fn from_exhaustive(name: &str, v: &ExhaustiveVerdict, g: &KGraph) -> Self {
        match v {
            ExhaustiveVerdict::Yes => Self::pass(name),
            ExhaustiveVerdict::No(w) => Self::fail(name, g.format_path(w)),
            ExhaustiveVerdict::UnknownUpTo(b) => Self::unknown(name, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub name: String,
    pub rank: usize,
    pub vertices: usize,
    pub edges: usize,
    /// True when rim vertices carry window marks.
    pub windowed: bool,
}

impl GraphMeta {
    pub fn of(name: &str, g: &KGraph) -> Self {
        GraphMeta {
            name: name.into(),
            rank: g.rank(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            windowed: g.is_windowed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub command: String,
    pub graph: GraphMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<u32>>,
    pub verdicts: Vec<Verdict>,
    /// Conventions in force, such as the empty-join convention of the base
    /// refinement.
    #[serde(default)]
    pub conventions: Vec<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl AnalysisReport {
    pub fn new(command: &str, graph: GraphMeta) -> Self {
        AnalysisReport {
            schema: SCHEMA.into(),
            command: command.into(),
            graph,
            window: None,
            verdicts: Vec::new(),
            conventions: Vec::new(),
            data: Value::Null,
        }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    /// One verdict per check. Undecided instances make a passing verdict
    /// inexact, bounded by `window`.
    pub fn push_properties(&mut self, prefix: &str, r: &PropertyReport, window: Option<&Degree>) {
        for t in &r.checks {
            let name = format!("{prefix}.{}", t.name);
            let mut v = if t.violations > 0 {
                Verdict::fail(&name, t.examples.first().cloned().unwrap_or_default())
            } else {
                Verdict::pass(&name)
            };
            if t.skipped > 0 {
                if let Some(w) = window {
                    v = v.up_to(w);
                } else {
                    v.exact = false;
                }
            }
            v.detail = serde_json::json!({ "checked": t.checked, "violations": t.violations, "skipped": t.skipped });
            self.push(v);
        }
    }

    /// 1 for any failure, else 3 for any unknown verdict, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            1
        } else if self.verdicts.iter().any(|v| v.status == Status::Unknown) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::src1;

    #[test]
    fn round_trip_and_exit_codes() {
        let g = src1();
        let mut r = AnalysisReport::new("check", GraphMeta::of("src1", &g));
        r.push(Verdict::pass("a"));
        assert_eq!(r.exit_code(), 0);
        r.push(Verdict::unknown("b", &Degree::new(vec![3])));
        assert_eq!(r.exit_code(), 3);
        r.push(Verdict::fail("c", "e").with_detail(serde_json::json!({"n": 1})));
        assert_eq!(r.exit_code(), 1);
        let back: AnalysisReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"schema\": \"kgraph-report/1\""));
        assert!(r.verdicts.iter().filter(|v| !v.exact).all(|v| v.bound.is_some()));
    }
}
