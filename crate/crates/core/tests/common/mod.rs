//! Brute-force reference models and random data used by the integration tests.
//!
//! The references store raw pattern fragments in plain lookup tables and run
//! the bleaching loop one level at a time. They share nothing with the crate
//! except the seeded RNG used for tie draws and the mapping under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use ramnet_core::SeededRng;

pub struct ReferenceWisard {
    pub tuples: Vec<Vec<usize>>,
    pub ignore_zero: bool,
    pub balanced: bool,
    pub start_bleach: u64,
    tables: BTreeMap<String, Vec<HashMap<Vec<u8>, u64>>>,
    trained: BTreeMap<String, u64>,
}

impl ReferenceWisard {
    pub fn new(
        tuples: Vec<Vec<usize>>,
        ignore_zero: bool,
        balanced: bool,
        start_bleach: u64,
    ) -> Self {
        Self {
            tuples,
            ignore_zero,
            balanced,
            start_bleach,
            tables: BTreeMap::new(),
            trained: BTreeMap::new(),
        }
    }

    fn fragment(&self, t: usize, x: &[u8]) -> Vec<u8> {
        self.tuples[t].iter().map(|&p| x[p]).collect()
    }

    pub fn train(&mut self, x: &[u8], label: &str) {
        let fragments: Vec<Vec<u8>> = (0..self.tuples.len())
            .map(|t| self.fragment(t, x))
            .collect();
        let n = self.tuples.len();
        let tables = self
            .tables
            .entry(label.to_owned())
            .or_insert_with(|| vec![HashMap::new(); n]);
        for (table, f) in tables.iter_mut().zip(fragments) {
            *table.entry(f).or_insert(0) += 1;
        }
        *self.trained.entry(label.to_owned()).or_insert(0) += 1;
    }

    pub fn raw(&self, label: &str, x: &[u8], bleach: u64) -> usize {
        let tables = &self.tables[label];
        (0..self.tuples.len())
            .filter(|&t| {
                let f = self.fragment(t, x);
                if self.ignore_zero && f.iter().all(|&d| d == 0) {
                    return false;
                }
                tables[t].get(&f).copied().unwrap_or(0) > bleach
            })
            .count()
    }

    fn key(&self, label: &str, x: &[u8], bleach: u64) -> f64 {
        let raw = self.raw(label, x, bleach) as f64;
        if self.balanced {
            raw / (std::f64::consts::E + self.trained[label] as f64).ln()
        } else {
            raw
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.tables.keys().cloned().collect()
    }

    /// Naive loop: raise the bleach by one until a unique positive maximum
    /// appears; once everything is zero, draw among the last tied labels.
    pub fn classify(&self, x: &[u8], rng: &mut SeededRng) -> (String, u64) {
        let labels = self.labels();
        let mut tied: Vec<usize> = (0..labels.len()).collect();
        let mut bleach = self.start_bleach;
        loop {
            let keys: Vec<f64> = labels.iter().map(|l| self.key(l, x, bleach)).collect();
            let top = keys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if top <= 0.0 {
                let pick = tied[rng.below(tied.len() as u64) as usize];
                return (labels[pick].clone(), bleach);
            }
            let now: Vec<usize> = (0..labels.len()).filter(|&i| keys[i] == top).collect();
            if now.len() == 1 {
                return (labels[now[0]].clone(), bleach);
            }
            tied = now;
            bleach += 1;
        }
    }

    pub fn max_counter(&self) -> u64 {
        self.tables
            .values()
            .flat_map(|ts| ts.iter().flat_map(|t| t.values().copied()))
            .max()
            .unwrap_or(0)
    }
}

/// Regression reference: keeps the whole training log and recomputes the
/// pooled mean for every query.
pub struct TrainingLog {
    pub tuples: Vec<Vec<usize>>,
    events: Vec<(Vec<u8>, f64)>,
}

impl TrainingLog {
    pub fn new(tuples: Vec<Vec<usize>>) -> Self {
        Self {
            tuples,
            events: Vec::new(),
        }
    }

    pub fn record(&mut self, x: &[u8], y: f64) {
        self.events.push((x.to_vec(), y));
    }

    pub fn simple_mean(&self, x: &[u8]) -> Option<f64> {
        let (mut sum, mut count) = (0.0, 0u64);
        for tuple in &self.tuples {
            for (e, y) in &self.events {
                if tuple.iter().all(|&p| e[p] == x[p]) {
                    sum += y;
                    count += 1;
                }
            }
        }
        (count > 0).then(|| sum / count as f64)
    }
}

/// Class-structured binary data: each class has a prototype, examples flip
/// each bit with probability `noise`. Low noise and small retinas produce
/// plenty of duplicates and score ties.
pub struct Dataset {
    pub entry_size: usize,
    pub examples: Vec<(Vec<u8>, String)>,
    pub queries: Vec<Vec<u8>>,
}

pub fn random_bits(rng: &mut SeededRng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.below(2) as u8).collect()
}

pub fn dataset(rng: &mut SeededRng, entry_size: usize, classes: usize, examples: usize) -> Dataset {
    let protos: Vec<Vec<u8>> = (0..classes).map(|_| random_bits(rng, entry_size)).collect();
    let noise_per_mille = [0u64, 20, 100, 300, 500][rng.below(5) as usize];
    let sample = |rng: &mut SeededRng, c: usize| -> Vec<u8> {
        protos[c]
            .iter()
            .map(|&b| {
                if rng.below(1000) < noise_per_mille {
                    1 - b
                } else {
                    b
                }
            })
            .collect()
    };
    let examples: Vec<(Vec<u8>, String)> = (0..examples)
        .map(|_| {
            let c = rng.below(classes as u64) as usize;
            (sample(rng, c), format!("class{c}"))
        })
        .collect();
    let mut queries: Vec<Vec<u8>> = examples.iter().take(20).map(|(x, _)| x.clone()).collect();
    for _ in 0..20 {
        let c = rng.below(classes as u64) as usize;
        queries.push(sample(rng, c));
    }
    queries.push(vec![0; entry_size]);
    Dataset {
        entry_size,
        examples,
        queries,
    }
}
