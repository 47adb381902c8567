use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::scenario::Scenario;

pub const TOOL_NAME: &str = "liouville";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeStatus {
    Completed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOutcome {
    pub index: usize,
    pub analysis: String,
    pub seed: u64,
    pub status: OutcomeStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// One-line human summary; verdicts always carry their certificate.
    pub summary: String,
}

/// Everything except wall-clock time, which goes to [`Timing`] so reports
/// stay byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub scenario: Scenario,
    pub seed: u64,
    pub analyses: Vec<AnalysisOutcome>,
}

impl Report {
    pub fn all_completed(&self) -> bool {
        self.analyses.iter().all(|a| a.status == OutcomeStatus::Completed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisTiming {
    pub index: usize,
    pub analysis: String,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub analyses: Vec<AnalysisTiming>,
    pub total_seconds: f64,
    pub threads: usize,
}
