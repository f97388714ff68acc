use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of checking one inequality. `slack >= -tolerance` passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCertificate {
    pub name: String,
    pub params: Map<String, Value>,
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub seed: Option<u64>,
}

impl InequalityCertificate {
    pub fn new(name: impl Into<String>, slack: f64, tolerance: f64) -> Self {
        let verdict = if slack >= -tolerance { Verdict::Pass } else { Verdict::Fail };
        Self { name: name.into(), params: Map::new(), slack, tolerance, verdict, seed: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Combines certificates for one inequality over a grid: worst slack, shared name.
    pub fn worst(name: &str, certs: &[InequalityCertificate]) -> Self {
        let mut worst = certs
            .iter()
            .min_by(|a, b| (a.slack + a.tolerance).total_cmp(&(b.slack + b.tolerance)))
            .cloned()
            .unwrap_or_else(|| InequalityCertificate::new(name, 0.0, 0.0));
        worst.name = name.to_string();
        worst.verdict = if certs.iter().all(|c| c.passed()) { Verdict::Pass } else { Verdict::Fail };
        worst.params.insert("cases".into(), Value::from(certs.len()));
        worst
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}
