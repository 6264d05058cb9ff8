//! Shared model surfaces: the classification and regression traits and the
//! result types they hand back.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;

/// Score of one label at a given bleaching level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelScore {
    pub label: String,
    /// Number of voting RAM nodes (0..=N).
    pub raw: usize,
    /// `raw / N`.
    pub normalized: f64,
    /// Value actually compared between labels (raw, or balanced raw).
    pub key: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreTable {
    pub bleach: u64,
    /// One entry per label, in label order.
    pub scores: Vec<LabelScore>,
}

impl ScoreTable {
    pub fn get(&self, label: &str) -> Option<&LabelScore> {
        self.scores.iter().find(|s| s.label == label)
    }

    pub fn raw(&self, label: &str) -> Option<usize> {
        self.get(label).map(|s| s.raw)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub label: String,
    pub scores: ScoreTable,
}

/// Memory footprint summary of a model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub discriminators: usize,
    pub ram_nodes: usize,
    /// Non-null memory locations across all RAM nodes.
    pub cells: usize,
    /// Trained-example count per label (summed over a label's discriminators).
    pub trained_counts: BTreeMap<String, u64>,
    /// Rough in-memory size of the stored cells, in bytes.
    pub approx_bytes: usize,
}

impl SizeReport {
    pub fn total_trained(&self) -> u64 {
        self.trained_counts.values().sum()
    }
}

pub trait ClassificationModel {
    fn train(&mut self, pattern: &[u8], label: &str) -> Result<()>;
    fn untrain(&mut self, pattern: &[u8], label: &str) -> Result<()>;
    /// Bleaching-resolved classification; may consume the model's tie RNG.
    fn classify(&mut self, pattern: &[u8]) -> Result<Classification>;
    fn score(&self, pattern: &[u8], bleach: u64) -> Result<ScoreTable>;
    /// Labels by descending bleach-0 score, ties in label order.
    fn rank(&self, pattern: &[u8]) -> Result<Vec<String>>;
    fn size_report(&self) -> SizeReport;
}

pub trait RegressionModel {
    fn train(&mut self, pattern: &[u8], target: f64) -> Result<()>;
    fn predict(&self, pattern: &[u8]) -> Result<f64>;
    fn size_report(&self) -> SizeReport;
}
