//! The envelope every CLI command prints.

use serde::Serialize;
use serde_json::Value;

use crate::format::InputDigest;
use crate::ic::Budget;

pub const SCHEMA: &str = "injcat.run/1";

#[derive(Clone, Debug, Serialize)]
pub struct BudgetUsage {
    pub max_nodes: u64,
    pub nodes_used: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub budget: BudgetUsage,
    pub results: Value,
    /// Wall clock; the only field that may differ between identical runs.
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: Vec<InputDigest>, seed: u64, budget: &Budget, nodes_used: u64, results: Value) -> Self {
        Self {
            schema: SCHEMA,
            command,
            inputs,
            seed,
            budget: BudgetUsage {
                max_nodes: budget.max_nodes,
                nodes_used,
            },
            results,
            timing_ms: 0.0,
        }
    }

    /// The report without its timing, for reproducibility comparisons.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing_ms");
        v
    }
}
