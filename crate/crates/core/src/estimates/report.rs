use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

/// One checked estimate: its slack, where it is tightest, and any fitted
/// constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: String,
    /// Human-readable statement being checked.
    pub statement: String,
    pub fitted_constants: BTreeMap<String, f64>,
    /// Grid index and field value at the tightest point, when pointwise.
    pub worst_point: Option<(usize, f64)>,
    /// Minimum slack; the estimate holds when `margin ≥ −tolerance`.
    pub margin: f64,
    pub tolerance: f64,
    pub resolution: usize,
    /// Slack at a coarse and a fine resolution, when a refinement study ran.
    pub refinement_trend: Option<(f64, f64)>,
    pub verdict: Verdict,
}

impl EstimateReport {
    pub fn new(name: &str, statement: &str, margin: f64, tolerance: f64, resolution: usize) -> Self {
        Self {
            name: name.to_string(),
            statement: statement.to_string(),
            fitted_constants: BTreeMap::new(),
            worst_point: None,
            margin,
            tolerance,
            resolution,
            refinement_trend: None,
            verdict: if margin >= -tolerance { Verdict::Pass } else { Verdict::Fail },
        }
    }

    pub fn info(name: &str, statement: &str, resolution: usize) -> Self {
        let mut r = Self::new(name, statement, 0.0, 0.0, resolution);
        r.verdict = Verdict::Info;
        r
    }

    pub fn with_constant(mut self, key: &str, value: f64) -> Self {
        self.fitted_constants.insert(key.to_string(), value);
        self
    }

    pub fn with_worst(mut self, point: usize, value: f64) -> Self {
        self.worst_point = Some((point, value));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    /// Two-resolution protocol: a negative margin at the fine resolution is
    /// tolerated only if it shrank at least `factor`× from the coarse one.
    pub fn with_refinement(mut self, coarse: f64, factor: f64) -> Self {
        let fine = self.margin;
        self.refinement_trend = Some((coarse, fine));
        if self.verdict != Verdict::Info {
            let ok = fine >= -self.tolerance || (coarse < 0.0 && fine.abs() * factor <= coarse.abs());
            self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        }
        self
    }
}

/// Relative spread `|a − b| / max(|a|, |b|)`.
pub fn relative_change(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}
