//! JSON document produced by a diagnostic run.

use serde::Serialize;
use serde_json::Value;

use crate::diagnostics::SemimartVerdict;
use crate::kernels::ProcessSpec;

/// Fitted log-log slope of some quantity against `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendFit {
    pub quantity: String,
    pub slope: f64,
    /// Exponent the theory predicts, when there is one.
    pub expected_slope: Option<f64>,
}

/// `{spec, operation, inputs, outputs, trend_fits, verdict, citations}`.
///
/// Map-valued fields go through [`serde_json::Value`], whose maps are
/// key-sorted, so the serialized form has a stable key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub spec: ProcessSpec,
    pub operation: String,
    pub inputs: Value,
    pub outputs: Value,
    pub trend_fits: Vec<TrendFit>,
    pub verdict: Option<SemimartVerdict>,
    pub citations: Vec<String>,
}

impl DiagnosticsReport {
    pub fn new(spec: ProcessSpec, operation: impl Into<String>, inputs: Value, outputs: Value) -> Self {
        DiagnosticsReport {
            spec,
            operation: operation.into(),
            inputs,
            outputs,
            trend_fits: Vec::new(),
            verdict: None,
            citations: Vec::new(),
        }
    }

    pub fn with_trend(mut self, quantity: impl Into<String>, slope: f64, expected_slope: Option<f64>) -> Self {
        self.trend_fits.push(TrendFit { quantity: quantity.into(), slope, expected_slope });
        self
    }

    pub fn with_verdict(mut self, verdict: SemimartVerdict) -> Self {
        self.citations.extend(verdict.citations.iter().cloned());
        self.verdict = Some(verdict);
        self
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are always serializable")
    }
}
