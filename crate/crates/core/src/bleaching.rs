//! Tie resolution by bleaching, shared by every classifier.
//!
//! A classifier reduces a query to the counters each of its discriminators
//! reads (one per RAM node, 0 for an empty or ignored location). Scores at any
//! bleaching level follow from those counters alone, so the loop below never
//! touches the RAM nodes again.

use crate::model::{LabelScore, ScoreTable};
use crate::rng::SeededRng;

/// Counters one discriminator reads for the current query.
#[derive(Debug, Clone)]
pub(crate) struct DiscriminatorReading {
    pub counters: Vec<u64>,
    /// Multiplier applied to the raw vote count (1 unless balanced).
    pub scale: f64,
}

impl DiscriminatorReading {
    pub fn raw(&self, bleach: u64) -> usize {
        self.counters.iter().filter(|&&c| c > bleach).count()
    }
}

/// All discriminators of one label.
#[derive(Debug, Clone)]
pub(crate) struct LabelReading {
    pub label: String,
    pub discriminators: Vec<DiscriminatorReading>,
}

impl LabelReading {
    /// Best discriminator's (raw, key) at `bleach`; first index wins ties.
    fn best(&self, bleach: u64) -> (usize, f64) {
        let mut best = (0, 0.0);
        for (i, d) in self.discriminators.iter().enumerate() {
            let raw = d.raw(bleach);
            let key = raw as f64 * d.scale;
            if i == 0 || key > best.1 {
                best = (raw, key);
            }
        }
        best
    }
}

pub(crate) fn score_table(readings: &[LabelReading], rams: usize, bleach: u64) -> ScoreTable {
    let scores = readings
        .iter()
        .map(|r| {
            let (raw, key) = r.best(bleach);
            LabelScore {
                label: r.label.clone(),
                raw,
                normalized: if rams == 0 {
                    0.0
                } else {
                    raw as f64 / rams as f64
                },
                key,
            }
        })
        .collect();
    ScoreTable { bleach, scores }
}

/// Labels sorted by descending key, ties in label order.
pub(crate) fn rank(table: &ScoreTable) -> Vec<String> {
    let mut order: Vec<&LabelScore> = table.scores.iter().collect();
    order.sort_by(|a, b| b.key.total_cmp(&a.key).then_with(|| a.label.cmp(&b.label)));
    order.into_iter().map(|s| s.label.clone()).collect()
}

/// Runs the bleaching loop from `start` and returns the winning label index
/// with the last score table computed.
///
/// At each level a unique positive maximum wins. Otherwise the level rises to
/// the next counter value present in the readings (scores cannot change in
/// between). Once every score is 0, one of the labels tied at the previous
/// level is drawn uniformly; at the first level that set is every label.
pub(crate) fn resolve(
    readings: &[LabelReading],
    rams: usize,
    start: u64,
    rng: &mut SeededRng,
) -> (usize, ScoreTable) {
    assert!(!readings.is_empty(), "resolve needs at least one label");
    let mut levels: Vec<u64> = readings
        .iter()
        .flat_map(|r| r.discriminators.iter())
        .flat_map(|d| d.counters.iter().copied())
        .filter(|&c| c > start)
        .collect();
    levels.sort_unstable();
    levels.dedup();
    let mut next_levels = levels.into_iter();

    let mut bleach = start;
    let mut tied: Vec<usize> = (0..readings.len()).collect();
    loop {
        let table = score_table(readings, rams, bleach);
        let top = table
            .scores
            .iter()
            .map(|s| s.key)
            .fold(f64::NEG_INFINITY, f64::max);
        if top <= 0.0 {
            let pick = tied[rng.below(tied.len() as u64) as usize];
            return (pick, table);
        }
        tied = (0..readings.len())
            .filter(|&i| table.scores[i].key == top)
            .collect();
        if tied.len() == 1 {
            return (tied[0], table);
        }
        // A positive score means some counter exceeds `bleach`.
        bleach = next_levels
            .next()
            .expect("a positive score implies a higher counter level");
    }
}
