//! The WiSARD n-tuple classifier with bleaching.

use std::collections::BTreeMap;

use crate::bleaching::{self, DiscriminatorReading, LabelReading};
use crate::error::{Error, Result};
use crate::mapping::{address_capacity, Address, TupleMapping};
use crate::model::{Classification, ClassificationModel, ScoreTable, SizeReport};
use crate::ram::RamNode;
use crate::rng::SeededRng;

/// N RAM nodes over one mapping, plus the number of examples it has learned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discriminator {
    entry_size: usize,
    rams: Vec<RamNode>,
    trained_count: u64,
}

impl Discriminator {
    pub fn new(mapping: &TupleMapping, base: u32, ignore_zero: bool) -> Self {
        Self {
            entry_size: mapping.entry_size(),
            rams: mapping
                .tuples()
                .iter()
                .map(|t| RamNode::new(t.clone(), base, ignore_zero))
                .collect(),
            trained_count: 0,
        }
    }

    pub(crate) fn from_parts(entry_size: usize, rams: Vec<RamNode>, trained_count: u64) -> Self {
        Self {
            entry_size,
            rams,
            trained_count,
        }
    }

    pub fn rams(&self) -> &[RamNode] {
        &self.rams
    }

    pub fn trained_count(&self) -> u64 {
        self.trained_count
    }

    pub fn cell_count(&self) -> usize {
        self.rams.iter().map(|r| r.cells().len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.trained_count == 0 && self.rams.iter().all(|r| r.cells().is_empty())
    }

    fn check(&self, pattern: &[u8]) -> Result<()> {
        if pattern.len() != self.entry_size {
            return Err(Error::Input(format!(
                "pattern has length {}, retina expects {}",
                pattern.len(),
                self.entry_size
            )));
        }
        let base = self.rams.first().map_or(2, RamNode::base);
        crate::mapping::check_digits(pattern, base)
    }

    pub fn train(&mut self, pattern: &[u8]) -> Result<()> {
        self.check(pattern)?;
        for ram in &mut self.rams {
            let a = ram.address_unchecked(pattern);
            ram.train_address(a);
        }
        self.trained_count += 1;
        Ok(())
    }

    pub fn untrain(&mut self, pattern: &[u8]) -> Result<()> {
        self.check(pattern)?;
        for ram in &mut self.rams {
            let a = ram.address_unchecked(pattern);
            ram.untrain_address(a);
        }
        self.trained_count = self.trained_count.saturating_sub(1);
        Ok(())
    }

    /// Number of RAM nodes whose addressed counter exceeds `bleach`.
    pub fn score(&self, pattern: &[u8], bleach: u64) -> Result<usize> {
        self.check(pattern)?;
        Ok(self
            .rams
            .iter()
            .map(|r| usize::from(r.vote_address(r.address_unchecked(pattern), bleach)))
            .sum())
    }

    pub(crate) fn train_addresses(&mut self, addresses: &[Address]) {
        for (ram, &a) in self.rams.iter_mut().zip(addresses) {
            ram.train_address(a);
        }
        self.trained_count += 1;
    }

    pub(crate) fn untrain_addresses(&mut self, addresses: &[Address]) {
        for (ram, &a) in self.rams.iter_mut().zip(addresses) {
            ram.untrain_address(a);
        }
        self.trained_count = self.trained_count.saturating_sub(1);
    }

    pub(crate) fn counters(&self, addresses: &[Address]) -> Vec<u64> {
        self.rams
            .iter()
            .zip(addresses)
            .map(|(r, &a)| r.effective_counter(a))
            .collect()
    }

    pub(crate) fn raw_at(&self, addresses: &[Address], bleach: u64) -> usize {
        self.rams
            .iter()
            .zip(addresses)
            .filter(|(r, &a)| r.effective_counter(a) > bleach)
            .count()
    }

    pub fn mental_image(&self) -> Vec<u64> {
        let mut image = vec![0; self.entry_size];
        for ram in &self.rams {
            ram.add_mental_image(&mut image);
        }
        image
    }
}

/// Comparison weight of a balanced discriminator: `1 / ln(e + trained)`.
pub fn balance_factor(trained_count: u64) -> f64 {
    1.0 / (std::f64::consts::E + trained_count as f64).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WisardConfig {
    /// Tuple size n (address lines per RAM node).
    pub address_size: usize,
    pub base: u32,
    pub ignore_zero: bool,
    /// Weight scores by the number of trained examples per class.
    pub balanced: bool,
    /// Pad the last tuple instead of rejecting retinas not divisible by n.
    pub complete_address: bool,
    /// Bleaching level the classification loop starts from.
    pub initial_bleach: u64,
    pub seed: u64,
}

impl WisardConfig {
    pub fn new(address_size: usize) -> Self {
        Self {
            address_size,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        validate_tuple(self.address_size, self.base)
    }
}

impl Default for WisardConfig {
    fn default() -> Self {
        Self {
            address_size: 2,
            base: 2,
            ignore_zero: false,
            balanced: false,
            complete_address: false,
            initial_bleach: 0,
            seed: 0,
        }
    }
}

pub(crate) fn validate_tuple(address_size: usize, base: u32) -> Result<()> {
    if address_size == 0 {
        return Err(Error::Config("address size must be at least 1".into()));
    }
    if base < 2 || base > u32::from(u8::MAX) + 1 {
        return Err(Error::Config(format!(
            "base must be in 2..=256, got {base}"
        )));
    }
    if address_capacity(base, address_size).is_none() {
        return Err(Error::Config(format!(
            "base {base} with address size {address_size} overflows a 64-bit address"
        )));
    }
    Ok(())
}

/// One discriminator per label over a shared retina mapping.
///
/// The mapping is drawn from the seed on the first training call, which also
/// fixes the retina size, unless one was installed with [`set_mapping`].
///
/// [`set_mapping`]: WisardModel::set_mapping
#[derive(Debug, Clone, PartialEq)]
pub struct WisardModel {
    config: WisardConfig,
    mapping: Option<TupleMapping>,
    discriminators: BTreeMap<String, Discriminator>,
    rng: SeededRng,
}

impl WisardModel {
    pub fn new(config: WisardConfig) -> Result<Self> {
        config.validate()?;
        let rng = SeededRng::for_ties(config.seed);
        Ok(Self {
            config,
            mapping: None,
            discriminators: BTreeMap::new(),
            rng,
        })
    }

    pub(crate) fn from_parts(
        config: WisardConfig,
        mapping: Option<TupleMapping>,
        discriminators: BTreeMap<String, Discriminator>,
        rng: SeededRng,
    ) -> Self {
        Self {
            config,
            mapping,
            discriminators,
            rng,
        }
    }

    pub fn config(&self) -> &WisardConfig {
        &self.config
    }

    pub fn mapping(&self) -> Option<&TupleMapping> {
        self.mapping.as_ref()
    }

    pub fn entry_size(&self) -> Option<usize> {
        self.mapping.as_ref().map(TupleMapping::entry_size)
    }

    pub fn discriminators(&self) -> &BTreeMap<String, Discriminator> {
        &self.discriminators
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.discriminators.keys().map(String::as_str)
    }

    pub fn rng(&self) -> &SeededRng {
        &self.rng
    }

    /// Installs an explicit mapping. Only allowed before any training.
    pub fn set_mapping(&mut self, mapping: TupleMapping) -> Result<()> {
        if self.discriminators.values().any(|d| !d.is_empty()) {
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
        for d in self.discriminators.values_mut() {
            *d = Discriminator::new(&mapping, self.config.base, self.config.ignore_zero);
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

    fn key_scale(&self, d: &Discriminator) -> f64 {
        if self.config.balanced {
            balance_factor(d.trained_count)
        } else {
            1.0
        }
    }

    fn readings(&self, addresses: &[Address]) -> Vec<LabelReading> {
        self.discriminators
            .iter()
            .map(|(label, d)| LabelReading {
                label: label.clone(),
                discriminators: vec![DiscriminatorReading {
                    counters: d.counters(addresses),
                    scale: self.key_scale(d),
                }],
            })
            .collect()
    }

    fn ram_count(&self) -> usize {
        self.mapping.as_ref().map_or(0, TupleMapping::len)
    }

    pub fn train(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        let (base, ignore_zero) = (self.config.base, self.config.ignore_zero);
        let addresses = self
            .ensure_mapping(pattern.len())?
            .addresses(pattern, base)?;
        if !self.discriminators.contains_key(label) {
            let mapping = self.mapping.as_ref().expect("mapping ensured above");
            let fresh = Discriminator::new(mapping, base, ignore_zero);
            self.discriminators.insert(label.to_owned(), fresh);
        }
        self.discriminators
            .get_mut(label)
            .expect("inserted above")
            .train_addresses(&addresses);
        Ok(())
    }

    pub fn untrain(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        if !self.discriminators.contains_key(label) {
            return Err(Error::Input(format!("unknown label {label:?}")));
        }
        let addresses = self
            .addresses(pattern)?
            .expect("a known label implies a mapping");
        self.discriminators
            .get_mut(label)
            .expect("checked above")
            .untrain_addresses(&addresses);
        Ok(())
    }

    pub fn score(&self, pattern: &[u8], bleach: u64) -> Result<ScoreTable> {
        let readings = match self.addresses(pattern)? {
            Some(a) => self.readings(&a),
            None => Vec::new(),
        };
        Ok(bleaching::score_table(&readings, self.ram_count(), bleach))
    }

    /// Classifies with the model's own tie RNG.
    pub fn classify(&mut self, pattern: &[u8]) -> Result<Classification> {
        let mut rng = self.rng.clone();
        let result = self.classify_with(pattern, &mut rng);
        self.rng = rng;
        result
    }

    /// Classifies with a caller-supplied tie RNG, leaving the model untouched.
    pub fn classify_with(&self, pattern: &[u8], rng: &mut SeededRng) -> Result<Classification> {
        if self.discriminators.is_empty() {
            return Err(Error::Model(
                "cannot classify with no trained classes".into(),
            ));
        }
        let addresses = self
            .addresses(pattern)?
            .expect("discriminators imply a mapping");
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

    /// Per-label retina-shaped summaries of the learned content.
    pub fn mental_images(&self) -> BTreeMap<String, Vec<u64>> {
        self.discriminators
            .iter()
            .map(|(label, d)| (label.clone(), d.mental_image()))
            .collect()
    }

    pub fn size_report(&self) -> SizeReport {
        size_report(self.discriminators.iter().map(|(l, d)| (l.as_str(), d)))
    }

    /// Score of `label` computed directly from the RAM nodes, without readings.
    pub fn label_score(&self, pattern: &[u8], label: &str, bleach: u64) -> Result<usize> {
        let d = self
            .discriminators
            .get(label)
            .ok_or_else(|| Error::Input(format!("unknown label {label:?}")))?;
        let addresses = self
            .addresses(pattern)?
            .expect("a known label implies a mapping");
        Ok(d.raw_at(&addresses, bleach))
    }
}

pub(crate) fn size_report<'a>(
    discriminators: impl Iterator<Item = (&'a str, &'a Discriminator)>,
) -> SizeReport {
    let mut report = SizeReport::default();
    for (label, d) in discriminators {
        report.discriminators += 1;
        report.ram_nodes += d.rams.len();
        report.cells += d.cell_count();
        *report.trained_counts.entry(label.to_owned()).or_insert(0) += d.trained_count;
    }
    report.approx_bytes = report.cells * 2 * std::mem::size_of::<u64>();
    report
}

impl ClassificationModel for WisardModel {
    fn train(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        WisardModel::train(self, pattern, label)
    }

    fn untrain(&mut self, pattern: &[u8], label: &str) -> Result<()> {
        WisardModel::untrain(self, pattern, label)
    }

    fn classify(&mut self, pattern: &[u8]) -> Result<Classification> {
        WisardModel::classify(self, pattern)
    }

    fn score(&self, pattern: &[u8], bleach: u64) -> Result<ScoreTable> {
        WisardModel::score(self, pattern, bleach)
    }

    fn rank(&self, pattern: &[u8]) -> Result<Vec<String>> {
        WisardModel::rank(self, pattern)
    }

    fn size_report(&self) -> SizeReport {
        WisardModel::size_report(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn identity_model() -> WisardModel {
        let mut m = WisardModel::new(WisardConfig::new(2)).unwrap();
        m.set_mapping(TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2, 3]]).unwrap())
            .unwrap();
        m
    }

    fn cells(m: &WisardModel, label: &str) -> Vec<Vec<(u64, u64)>> {
        m.discriminators()[label]
            .rams()
            .iter()
            .map(RamNode::sorted_cells)
            .collect()
    }

    #[test]
    fn train_writes_addressed_cells() {
        let mut m = identity_model();
        m.train(&p("1100"), "A").unwrap();
        assert_eq!(cells(&m, "A"), vec![vec![(3, 1)], vec![(0, 1)]]);
        m.train(&p("1100"), "A").unwrap();
        assert_eq!(cells(&m, "A"), vec![vec![(3, 2)], vec![(0, 2)]]);
        assert_eq!(m.discriminators()["A"].trained_count(), 2);
        assert!(matches!(m.train(&p("110"), "A"), Err(Error::Input(_))));
    }

    #[test]
    fn untrain_examples() {
        let mut m = identity_model();
        m.train(&p("0101"), "A").unwrap();
        let before = m.clone();
        m.train(&p("1100"), "A").unwrap();
        m.untrain(&p("1100"), "A").unwrap();
        assert_eq!(m, before);
        assert!(matches!(m.untrain(&p("1100"), "Z"), Err(Error::Input(_))));

        let mut m = identity_model();
        m.train(&p("1100"), "X").unwrap();
        m.train(&p("0011"), "Y").unwrap();
        m.untrain(&p("1100"), "X").unwrap();
        assert!(m.discriminators()["X"].is_empty());
        assert_eq!(cells(&m, "Y"), vec![vec![(0, 1)], vec![(3, 1)]]);
    }

    #[test]
    fn score_examples() {
        let mut m = identity_model();
        assert!(m.score(&p("1111"), 0).unwrap().scores.is_empty());
        m.train(&p("1100"), "A").unwrap();
        m.train(&p("0011"), "B").unwrap();
        assert_eq!(m.score(&p("1100"), 0).unwrap().raw("A"), Some(2));
        let t = m.score(&p("1111"), 0).unwrap();
        assert_eq!(t.raw("A"), Some(1));
        assert_eq!(t.raw("B"), Some(1));
        assert_eq!(t.get("A").unwrap().normalized, 0.5);
    }

    #[test]
    fn bleaching_breaks_counter_tie() {
        let mut m = identity_model();
        let x = p("1100");
        m.train(&x, "A").unwrap();
        m.train(&x, "A").unwrap();
        m.train(&x, "B").unwrap();
        m.train(&p("1110"), "B").unwrap();
        assert_eq!(cells(&m, "B"), vec![vec![(3, 2)], vec![(0, 1), (1, 1)]]);
        let c = m.classify(&x).unwrap();
        assert_eq!(c.label, "A");
        assert_eq!(c.scores.bleach, 1);
        assert_eq!(c.scores.raw("A"), Some(2));
        assert_eq!(c.scores.raw("B"), Some(1));
    }

    #[test]
    fn single_class_needs_no_loop() {
        let mut m = identity_model();
        m.train(&p("1000"), "only").unwrap();
        let c = m.classify(&p("0111")).unwrap();
        assert_eq!(c.label, "only");
        assert!(matches!(
            identity_model().classify(&p("0000")),
            Err(Error::Model(_))
        ));
    }

    #[test]
    fn identical_classes_draw_deterministically() {
        let run = || {
            let mut m = identity_model();
            m.train(&p("1010"), "A").unwrap();
            m.train(&p("1010"), "B").unwrap();
            (0..20)
                .map(|_| m.classify(&p("1010")).unwrap().label)
                .collect::<Vec<_>>()
        };
        let first = run();
        assert_eq!(first, run());
        assert!(first.iter().any(|l| l == "A") && first.iter().any(|l| l == "B"));
    }

    #[test]
    fn rank_examples() {
        let mut m = identity_model();
        m.train(&p("1100"), "B").unwrap();
        assert_eq!(m.rank(&p("1100")).unwrap(), ["B"]);
        m.train(&p("0011"), "A").unwrap();
        assert_eq!(m.rank(&p("1100")).unwrap(), ["B", "A"]);
        assert_eq!(m.rank(&p("1111")).unwrap(), ["A", "B"]);
    }

    #[test]
    fn mental_image_examples() {
        let mut m = identity_model();
        m.train(&p("1100"), "A").unwrap();
        assert_eq!(m.mental_images()["A"], [1, 1, 0, 0]);
        for _ in 0..4 {
            m.train(&p("1100"), "A").unwrap();
        }
        assert_eq!(m.mental_images()["A"], [5, 5, 0, 0]);
    }

    #[test]
    fn size_report_tracks_training() {
        let mut m = identity_model();
        assert_eq!(m.size_report(), SizeReport::default());
        for s in ["1100", "0011", "1010"] {
            m.train(&p(s), "A").unwrap();
        }
        m.train(&p("1111"), "B").unwrap();
        let r = m.size_report();
        assert_eq!(r.total_trained(), 4);
        assert_eq!(r.discriminators, 2);
        assert!(r.cells <= 4 * 2);
    }

    #[test]
    fn set_mapping_rules() {
        let mut m = WisardModel::new(WisardConfig::new(2)).unwrap();
        assert!(matches!(
            m.set_mapping(TupleMapping::from_tuples(4, vec![vec![0, 1, 2]]).unwrap()),
            Err(Error::Mapping(_))
        ));
        let identity = TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        m.set_mapping(identity.clone()).unwrap();
        m.train(&p("1100"), "A").unwrap();
        assert!(matches!(m.set_mapping(identity), Err(Error::Mapping(_))));
    }

    #[test]
    fn lazy_mapping_follows_seed() {
        let mut a = WisardModel::new(WisardConfig {
            seed: 3,
            ..WisardConfig::new(3)
        })
        .unwrap();
        let mut b = a.clone();
        a.train(&[1; 9], "x").unwrap();
        b.train(&[0; 9], "y").unwrap();
        assert_eq!(a.mapping(), b.mapping());
        assert_eq!(
            a.mapping().unwrap(),
            &TupleMapping::random(9, 3, 3, false).unwrap()
        );
        let mut c = WisardModel::new(WisardConfig::new(2)).unwrap();
        assert!(matches!(c.train(&[1; 5], "x"), Err(Error::Mapping(_))));
    }

    #[test]
    fn balanced_damps_heavily_trained_classes() {
        let mut m = identity_model();
        m.config.balanced = true;
        for _ in 0..10 {
            m.train(&p("1100"), "big").unwrap();
        }
        m.train(&p("1100"), "small").unwrap();
        let t = m.score(&p("1100"), 0).unwrap();
        assert!(t.get("small").unwrap().key > t.get("big").unwrap().key);
        assert_eq!(m.classify(&p("1100")).unwrap().label, "small");
    }

    #[test]
    fn ignore_zero_model() {
        let mut m = WisardModel::new(WisardConfig {
            ignore_zero: true,
            ..WisardConfig::new(2)
        })
        .unwrap();
        m.set_mapping(TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2, 3]]).unwrap())
            .unwrap();
        m.train(&p("0000"), "A").unwrap();
        assert_eq!(m.score(&p("0000"), 0).unwrap().raw("A"), Some(0));
    }

    #[test]
    fn bleach_monotonicity() {
        let mut m = identity_model();
        for (s, l) in [
            ("1100", "A"),
            ("1101", "A"),
            ("1100", "B"),
            ("0011", "B"),
            ("1100", "A"),
        ] {
            m.train(&p(s), l).unwrap();
        }
        for q in ["1100", "1101", "0000"] {
            for label in ["A", "B"] {
                let mut last = usize::MAX;
                for b in 0..5 {
                    let raw = m.label_score(&p(q), label, b).unwrap();
                    assert!(raw <= last);
                    assert_eq!(Some(raw), m.score(&p(q), b).unwrap().raw(label));
                    last = raw;
                }
            }
        }
    }
}
