//! Experiment configuration: JSON file plus flag overrides.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Uniform,
    Pure,
}

/// Resource budgets; every bound is explicit, exceeding one is recorded
/// per-record (exit code 2), never a silent truncation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Budgets {
    #[serde(default = "default_matrix_entries")]
    pub matrix_entries: u64,
    #[serde(default = "default_shelling_nodes")]
    pub shelling_nodes: u64,
    #[serde(default = "default_face_budget")]
    pub face_budget: usize,
}

fn default_matrix_entries() -> u64 {
    200_000_000
}
fn default_shelling_nodes() -> u64 {
    5_000_000
}
fn default_face_budget() -> usize {
    1 << 26
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            matrix_entries: default_matrix_entries(),
            shelling_nodes: default_shelling_nodes(),
            face_budget: default_face_budget(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub model: ModelName,
    /// Ground-set sizes swept.
    pub n: Vec<usize>,
    pub t: usize,
    /// Skeleton layer for skeleton scans.
    #[serde(default)]
    pub t_prime: Option<usize>,
    /// Facet probabilities swept; the uniform model ignores these (its
    /// coin is fixed at 1/2) and runs one grid point per n.
    #[serde(default)]
    pub p: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub budgets: Budgets,
    /// Holes size s for homology runs; defaults to t+1.
    #[serde(default)]
    pub holes_size: Option<usize>,
    /// Field characteristic for homology; defaults to 2.
    #[serde(default)]
    pub field: Option<u32>,
    /// Target complex (text format) for induced-subcomplex scans.
    #[serde(default)]
    pub target: Option<String>,
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}
fn default_workers() -> usize {
    1
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.trials < 1 {
            return Err("trials must be at least 1".into());
        }
        if self.n.is_empty() {
            return Err("n grid must be nonempty".into());
        }
        if self.model == ModelName::Pure && self.p.is_empty() {
            return Err("p grid must be nonempty for the pure model".into());
        }
        for &p in &self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("p={p} outside [0,1]"));
            }
        }
        Ok(())
    }

    /// Grid points in deterministic order; the uniform model collapses the
    /// p-axis to the fixed coin 1/2.
    pub fn grid(&self) -> Vec<(usize, f64)> {
        let mut pts = Vec::new();
        for &n in &self.n {
            match self.model {
                ModelName::Uniform => pts.push((n, 0.5)),
                ModelName::Pure => pts.extend(self.p.iter().map(|&p| (n, p))),
            }
        }
        pts
    }
}
