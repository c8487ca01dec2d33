//! Serializable verification reports shared by the decomposition
//! procedures and the CLI. Field element values appear as plain integers,
//! polynomials and series in their text syntax, so reports are stable and
//! diffable across runs.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> CheckRecord {
        CheckRecord {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Umbrella report for a decomposition alpha = beta + gamma, covering both
/// the coefficientwise (Hall-type) modes and the alternating (Shulga-type)
/// mode. Mode-specific sections are optional and omitted from JSON when
/// absent.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub field: u64,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_nonzero_beta: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_nonzero_gamma: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<crate::hall::StepRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<crate::shulga::TraceJson>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}
