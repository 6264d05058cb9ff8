//! Classifier that may hold several discriminators per class.
//!
//! A class starts with one discriminator. Each new example is offered to all
//! of the class's discriminators; those whose score clears their acceptance
//! threshold learn it, and if none does a fresh discriminator is opened (up to
//! the configured limit). Unlabelled examples go to the best match overall.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bleaching::{self, DiscriminatorReading, LabelReading};
use crate::error::{Error, Result};
use crate::mapping::{Address, TupleMapping};
use crate::model::{Classification, ClassificationModel, ScoreTable, SizeReport};
use crate::rng::SeededRng;
use crate::wisard::{self, Discriminator};

/// Score a discriminator with `trained_count` examples must reach to learn a
/// new one: `min(1, min_score + trained_count / threshold * (1 - min_score))`.
///
/// Starts at `min_score` and reaches 1 after `threshold` examples, so a
/// discriminator gets pickier as it fills up.
pub fn acceptance_threshold(min_score: f64, threshold: u64, trained_count: u64) -> f64 {
    let growth = trained_count as f64 / threshold as f64;
    (min_score + growth * (1.0 - min_score)).min(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusConfig {
    pub address_size: usize,
    /// Acceptance floor, in `[0, 1]`.
    pub min_score: f64,
    /// Number of trained examples after which acceptance requires a perfect score.
    pub threshold: u64,
    /// Maximum discriminators per class.
    pub discriminators_limit: usize,
    pub base: u32,
    pub ignore_zero: bool,
    pub complete_address: bool,
    pub initial_bleach: u64,
    pub seed: u64,
}

impl ClusConfig {
    pub fn new(
        address_size: usize,
        min_score: f64,
        threshold: u64,
        discriminators_limit: usize,
    ) -> Self {
        Self {
            address_size,
            min_score,
            threshold,
            discriminators_limit,
            base: 2,
            ignore_zero: false,
            complete_address: false,
            initial_bleach: 0,
            seed: 0,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        wisard::validate_tuple(self.address_size, self.base)?;
        validate_growth(self.min_score, self.threshold, self.discriminators_limit)
    }
}

pub(crate) fn validate_growth(min_score: f64, threshold: u64, limit: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&min_score) {
        return Err(Error::Config(format!(
            "minScore must be in [0, 1], got {min_score}"
        )));
    }
    if threshold == 0 {
        return Err(Error::Config("threshold must be at least 1".into()));
    }
    if limit == 0 {
        return Err(Error::Config(
            "discriminator limit must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Identifies one discriminator: its class and its position within the class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiscriminatorId {
    pub label: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusWisardModel {
    config: ClusConfig,
    mapping: Option<TupleMapping>,
    clusters: BTreeMap<String, Vec<Discriminator>>,
    rng: SeededRng,
}

/// Index of the highest-scoring item; first one wins ties.
fn argmax(scores: impl Iterator<Item = usize>) -> Option<(usize, usize)> {
    scores.enumerate().fold(None, |best, (i, s)| match best {
        Some((_, bs)) if bs >= s => best,
        _ => Some((i, s)),
    })
}

impl ClusWisardModel {
    pub fn new(config: ClusConfig) -> Result<Self> {
        config.validate()?;
        let rng = SeededRng::for_ties(config.seed);
        Ok(Self {
            config,
            mapping: None,
            clusters: BTreeMap::new(),
            rng,
        })
    }

    pub(crate) fn from_parts(
        config: ClusConfig,
        mapping: Option<TupleMapping>,
        clusters: BTreeMap<String, Vec<Discriminator>>,
        rng: SeededRng,
    ) -> Self {
        Self {
            config,
            mapping,
            clusters,
            rng,
        }
    }

    pub fn config(&self) -> &ClusConfig {
        &self.config
    }

    pub fn mapping(&self) -> Option<&TupleMapping> {
        self.mapping.as_ref()
    }

    pub fn clusters(&self) -> &BTreeMap<String, Vec<Discriminator>> {
        &self.clusters
    }

    pub fn rng(&self) -> &SeededRng {
        &self.rng
    }

    pub fn discriminator_count(&self, label: &str) -> usize {
        self.clusters.get(label).map_or(0, Vec::len)
    }

    pub fn set_mapping(&mut self, mapping: TupleMapping) -> Result<()> {
        if !self.clusters.is_empty() {
            return Err(Error::Mapping(
                "cannot change the mapping of a trained model".into(),
            ));
        }
        if mapping.tuple_size() != self.config.address_size {
            return Err(Error::Mapping(format!(
                "mapping tuples have {} positions, model address size is {}",
                mapping.tuple_size(),
                self.config.address_size
            )));
        }
        self.mapping = Some(mapping);
        Ok(())
    }

    fn ensure_mapping(&mut self, entry_size: usize) -> Result<&TupleMapping> {
        if self.mapping.is_none() {
            self.mapping = Some(TupleMapping::random(
                entry_size,
                self.config.address_size,
                self.config.seed,
                self.config.complete_address,
            )?);
        }
        Ok(self.mapping.as_ref().expect("mapping just set"))
    }

    fn addresses(&self, pattern: &[u8]) -> Result<Option<Vec<Address>>> {
        match &self.mapping {
            Some(m) => m.addresses(pattern, self.config.base).map(Some),
            None => Ok(None),
        }
    }

    fn new_discriminator(&self) -> Discriminator {
        let mapping = self
            .mapping
            .as_ref()
            .expect("discriminators need a mapping");
        Discriminator::new(mapping, self.config.base, self.config.ignore_zero)
    }

    fn ram_count(&self) -> usize {
        self.mapping.as_ref().map_or(0, TupleMapping::len)
    }

    pub fn train(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        let base = self.config.base;
        let addresses = self
            .ensure_mapping(pattern.len())?
            .addresses(pattern, base)?;
        let n = self.ram_count() as f64;
        let (min_score, threshold, limit) = (
            self.config.min_score,
            self.config.threshold,
            self.config.discriminators_limit,
        );
        if !self.clusters.contains_key(label) {
            let mut d = self.new_discriminator();
            d.train_addresses(&addresses);
            self.clusters.insert(label.to_owned(), vec![d]);
            return Ok(());
        }
        let fresh = self.new_discriminator();
        let discs = self.clusters.get_mut(label).expect("checked above");
        let raws: Vec<usize> = discs.iter().map(|d| d.raw_at(&addresses, 0)).collect();
        let mut accepted = false;
        for (d, &raw) in discs.iter_mut().zip(&raws) {
            if raw as f64 / n >= acceptance_threshold(min_score, threshold, d.trained_count()) {
                d.train_addresses(&addresses);
                accepted = true;
            }
        }
        if !accepted {
            if discs.len() < limit {
                let mut d = fresh;
                d.train_addresses(&addresses);
                discs.push(d);
            } else {
                let (best, _) = argmax(raws.into_iter()).expect("a seen label has a discriminator");
                discs[best].train_addresses(&addresses);
            }
        }
        Ok(())
    }

    /// Best-matching discriminator across all classes at bleach 0; ties go to
    /// the first in (label, index) order.
    pub fn classify_unsupervised(&self, pattern: &[u8]) -> Result<DiscriminatorId> {
        let addresses = match self.addresses(pattern)? {
            Some(a) if !self.clusters.is_empty() => a,
            _ => return Err(Error::Model("model has no discriminators".into())),
        };
        let ids: Vec<(&String, usize, usize)> = self
            .clusters
            .iter()
            .flat_map(|(label, discs)| {
                discs
                    .iter()
                    .enumerate()
                    .map(|(i, d)| (label, i, d.raw_at(&addresses, 0)))
                    .collect::<Vec<_>>()
            })
            .collect();
        let (best, _) = argmax(ids.iter().map(|&(_, _, s)| s)).expect("non-empty");
        Ok(DiscriminatorId {
            label: ids[best].0.clone(),
            index: ids[best].1,
        })
    }

    /// The best-matching discriminator, whatever its class, learns the pattern.
    pub fn train_unsupervised(&mut self, pattern: &[u8]) -> Result<DiscriminatorId> {
        let id = self.classify_unsupervised(pattern)?;
        let addresses = self
            .addresses(pattern)?
            .expect("checked by classify_unsupervised");
        self.clusters.get_mut(&id.label).expect("id from clusters")[id.index]
            .train_addresses(&addresses);
        Ok(id)
    }

    /// Removes the pattern from the class discriminator that matches it best.
    pub fn untrain(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        if !self.clusters.contains_key(label) {
            return Err(Error::Input(format!("unknown label {label:?}")));
        }
        let addresses = self
            .addresses(pattern)?
            .expect("a known label implies a mapping");
        let discs = self.clusters.get_mut(label).expect("checked above");
        let (best, _) = argmax(discs.iter().map(|d| d.raw_at(&addresses, 0))).expect("non-empty");
        discs[best].untrain_addresses(&addresses);
        Ok(())
    }

    fn readings(&self, addresses: &[Address]) -> Vec<LabelReading> {
        self.clusters
            .iter()
            .map(|(label, discs)| LabelReading {
                label: label.clone(),
                discriminators: discs
                    .iter()
                    .map(|d| DiscriminatorReading {
                        counters: d.counters(addresses),
                        scale: 1.0,
                    })
                    .collect(),
            })
            .collect()
    }

    /// Per-class score: the best of the class's discriminators.
    pub fn score(&self, pattern: &[u8], bleach: u64) -> Result<ScoreTable> {
        let readings = match self.addresses(pattern)? {
            Some(a) => self.readings(&a),
            None => Vec::new(),
        };
        Ok(bleaching::score_table(&readings, self.ram_count(), bleach))
    }

    pub fn classify(&mut self, pattern: &[u8]) -> Result<Classification> {
        let mut rng = self.rng.clone();
        let result = self.classify_with(pattern, &mut rng);
        self.rng = rng;
        result
    }

    pub fn classify_with(&self, pattern: &[u8], rng: &mut SeededRng) -> Result<Classification> {
        if self.clusters.is_empty() {
            return Err(Error::Model(
                "cannot classify with no trained classes".into(),
            ));
        }
        let addresses = self.addresses(pattern)?.expect("clusters imply a mapping");
        let readings = self.readings(&addresses);
        let (winner, scores) =
            bleaching::resolve(&readings, self.ram_count(), self.config.initial_bleach, rng);
        Ok(Classification {
            label: readings[winner].label.clone(),
            scores,
        })
    }

    pub fn rank(&self, pattern: &[u8]) -> Result<Vec<String>> {
        Ok(bleaching::rank(&self.score(pattern, 0)?))
    }

    /// Mental image of every discriminator, per class.
    pub fn mental_images(&self) -> BTreeMap<String, Vec<Vec<u64>>> {
        self.clusters
            .iter()
            .map(|(label, discs)| {
                (
                    label.clone(),
                    discs.iter().map(Discriminator::mental_image).collect(),
                )
            })
            .collect()
    }

    pub fn size_report(&self) -> SizeReport {
        wisard::size_report(
            self.clusters
                .iter()
                .flat_map(|(l, discs)| discs.iter().map(move |d| (l.as_str(), d))),
        )
    }
}

impl ClassificationModel for ClusWisardModel {
    fn train(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        ClusWisardModel::train(self, pattern, label)
    }

    fn untrain(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        ClusWisardModel::untrain(self, pattern, label)
    }

    fn classify(&mut self, pattern: &[u8]) -> Result<Classification> {
        ClusWisardModel::classify(self, pattern)
    }

    fn score(&self, pattern: &[u8], bleach: u64) -> Result<ScoreTable> {
        ClusWisardModel::score(self, pattern, bleach)
    }

    fn rank(&self, pattern: &[u8]) -> Result<Vec<String>> {
        ClusWisardModel::rank(self, pattern)
    }

    fn size_report(&self) -> SizeReport {
        ClusWisardModel::size_report(self)
    }
}
