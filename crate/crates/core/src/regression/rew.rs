use crate::error::{Error, Result};
use crate::mapping::{Address, TupleMapping};
use crate::model::{RegressionModel, SizeReport};
use crate::wisard::validate_tuple;

use super::mean::{apply_mean, MeanKind};
use super::ram::RegressionRamNode;

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionConfig {
    pub address_size: usize,
    pub mean: MeanKind,
    /// Minimum number of 0 digits an address needs to take part in a prediction.
    pub min_zero: usize,
    /// Minimum number of 1 digits an address needs to take part in a prediction.
    pub min_one: usize,
    pub base: u32,
    pub complete_address: bool,
    pub seed: u64,
}

impl RegressionConfig {
    pub fn new(address_size: usize) -> Self {
        Self {
            address_size,
            mean: MeanKind::Simple,
            min_zero: 0,
            min_one: 0,
            base: 2,
            complete_address: false,
            seed: 0,
        }
    }

    pub fn with_mean(mut self, mean: MeanKind) -> Self {
        self.mean = mean;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        validate_tuple(self.address_size, self.base)?;
        self.mean.validate()
    }
}

/// The N regression RAM nodes of one predictor.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDiscriminator {
    rams: Vec<RegressionRamNode>,
    trained_count: u64,
}

impl RegressionDiscriminator {
    pub fn new(mapping: &TupleMapping, base: u32) -> Self {
        Self {
            rams: mapping
                .tuples()
                .iter()
                .map(|t| RegressionRamNode::new(t.clone(), base))
                .collect(),
            trained_count: 0,
        }
    }

    pub(crate) fn from_parts(rams: Vec<RegressionRamNode>, trained_count: u64) -> Self {
        Self {
            rams,
            trained_count,
        }
    }

    pub fn rams(&self) -> &[RegressionRamNode] {
        &self.rams
    }

    pub fn trained_count(&self) -> u64 {
        self.trained_count
    }

    pub fn cell_count(&self) -> usize {
        self.rams.iter().map(|r| r.cells().len()).sum()
    }

    pub(crate) fn train_addresses(&mut self, addresses: &[Address], target: f64) {
        for (ram, &a) in self.rams.iter_mut().zip(addresses) {
            ram.train_address(a, target);
        }
        self.trained_count += 1;
    }

    /// Accessed cells with a non-zero counter that pass the digit filter.
    pub(crate) fn valid_cells(
        &self,
        addresses: &[Address],
        min_zero: usize,
        min_one: usize,
    ) -> Vec<(u64, f64)> {
        self.rams
            .iter()
            .zip(addresses)
            .filter_map(|(ram, &a)| {
                let cell = ram.cell(a);
                (cell.counter >= 1 && ram.admits(a, min_zero, min_one))
                    .then_some((cell.counter, cell.partial_sum))
            })
            .collect()
    }

    /// Fraction of RAM nodes whose accessed cell has been trained.
    pub(crate) fn similarity(&self, addresses: &[Address]) -> f64 {
        if self.rams.is_empty() {
            return 0.0;
        }
        let hits = self
            .rams
            .iter()
            .zip(addresses)
            .filter(|(ram, &a)| ram.cell(a).counter >= 1)
            .count();
        hits as f64 / self.rams.len() as f64
    }

    pub(crate) fn predict_addresses(
        &self,
        addresses: &[Address],
        config: &RegressionConfig,
    ) -> Result<f64> {
        let cells = self.valid_cells(addresses, config.min_zero, config.min_one);
        apply_mean(config.mean, &cells)
    }
}

pub(crate) fn check_target(target: f64) -> Result<()> {
    if target.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "regression target must be finite, got {target}"
        )))
    }
}

/// Single-predictor regression network.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionWisard {
    config: RegressionConfig,
    mapping: Option<TupleMapping>,
    predictor: Option<RegressionDiscriminator>,
}

impl RegressionWisard {
    pub fn new(config: RegressionConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            mapping: None,
            predictor: None,
        })
    }

    pub(crate) fn from_parts(
        config: RegressionConfig,
        mapping: Option<TupleMapping>,
        predictor: Option<RegressionDiscriminator>,
    ) -> Self {
        Self {
            config,
            mapping,
            predictor,
        }
    }

    pub fn config(&self) -> &RegressionConfig {
        &self.config
    }

    pub fn mapping(&self) -> Option<&TupleMapping> {
        self.mapping.as_ref()
    }

    pub fn predictor(&self) -> Option<&RegressionDiscriminator> {
        self.predictor.as_ref()
    }

    /// Switches the mean used by later predictions; the memory is unaffected.
    pub fn set_mean(&mut self, mean: MeanKind) -> Result<()> {
        mean.validate()?;
        self.config.mean = mean;
        Ok(())
    }

    pub fn set_mapping(&mut self, mapping: TupleMapping) -> Result<()> {
        if self.predictor.as_ref().is_some_and(|p| p.trained_count > 0) {
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
        self.predictor = Some(RegressionDiscriminator::new(&mapping, self.config.base));
        self.mapping = Some(mapping);
        Ok(())
    }

    pub fn train(&mut self, pattern: &[u8], target: f64) -> Result<()> {
        check_target(target)?;
        if self.mapping.is_none() {
            let mapping = TupleMapping::random(
                pattern.len(),
                self.config.address_size,
                self.config.seed,
                self.config.complete_address,
            )?;
            self.predictor = Some(RegressionDiscriminator::new(&mapping, self.config.base));
            self.mapping = Some(mapping);
        }
        let mapping = self.mapping.as_ref().expect("mapping set above");
        let addresses = mapping.addresses(pattern, self.config.base)?;
        self.predictor
            .as_mut()
            .expect("predictor created with mapping")
            .train_addresses(&addresses, target);
        Ok(())
    }

    pub fn predict(&self, pattern: &[u8]) -> Result<f64> {
        let (Some(mapping), Some(predictor)) = (&self.mapping, &self.predictor) else {
            return Err(Error::NoInformation);
        };
        let addresses = mapping.addresses(pattern, self.config.base)?;
        predictor.predict_addresses(&addresses, &self.config)
    }

    pub fn size_report(&self) -> SizeReport {
        let mut report = SizeReport::default();
        if let Some(p) = &self.predictor {
            report.discriminators = 1;
            report.ram_nodes = p.rams.len();
            report.cells = p.cell_count();
            report.trained_counts.insert(String::new(), p.trained_count);
            report.approx_bytes = report.cells * 3 * std::mem::size_of::<u64>();
        }
        report
    }
}

impl RegressionModel for RegressionWisard {
    fn train(&mut self, pattern: &[u8], target: f64) -> Result<()> {
        RegressionWisard::train(self, pattern, target)
    }

    fn predict(&self, pattern: &[u8]) -> Result<f64> {
        RegressionWisard::predict(self, pattern)
    }

    fn size_report(&self) -> SizeReport {
        RegressionWisard::size_report(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::RegressionCell;

    fn p(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn model(mean: MeanKind) -> RegressionWisard {
        let mut m = RegressionWisard::new(RegressionConfig::new(2).with_mean(mean)).unwrap();
        m.set_mapping(TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2, 3]]).unwrap())
            .unwrap();
        m
    }

    fn cells(m: &RegressionWisard) -> Vec<Vec<(u64, RegressionCell)>> {
        m.predictor()
            .unwrap()
            .rams()
            .iter()
            .map(|r| r.sorted_cells())
            .collect()
    }

    #[test]
    fn train_examples() {
        let mut m = model(MeanKind::Simple);
        m.train(&p("1100"), 5.0).unwrap();
        let c = |n, s| RegressionCell {
            counter: n,
            partial_sum: s,
        };
        assert_eq!(cells(&m), vec![vec![(3, c(1, 5.0))], vec![(0, c(1, 5.0))]]);

        let mut m = model(MeanKind::Simple);
        m.train(&p("1100"), 4.0).unwrap();
        m.train(&p("1100"), 6.0).unwrap();
        assert_eq!(
            cells(&m),
            vec![vec![(3, c(2, 10.0))], vec![(0, c(2, 10.0))]]
        );

        m.train(&p("0111"), 1.0).unwrap();
        assert_eq!(
            cells(&m),
            vec![
                vec![(2, c(1, 1.0)), (3, c(2, 10.0))],
                vec![(0, c(2, 10.0)), (3, c(1, 1.0))]
            ]
        );
        assert!(matches!(
            m.train(&p("0111"), f64::NAN),
            Err(Error::Input(_))
        ));
        assert!(matches!(m.train(&p("011"), 1.0), Err(Error::Input(_))));
    }

    #[test]
    fn predict_examples() {
        let mut m = model(MeanKind::Simple);
        m.train(&p("1100"), 5.0).unwrap();
        assert_eq!(m.predict(&p("1100")).unwrap(), 5.0);

        let mut m = model(MeanKind::Simple);
        m.train(&p("1100"), 4.0).unwrap();
        m.train(&p("1100"), 6.0).unwrap();
        assert_eq!(m.predict(&p("1100")).unwrap(), 5.0);
        assert_eq!(m.predict(&p("0011")), Err(Error::NoInformation));
        assert_eq!(
            RegressionWisard::new(RegressionConfig::new(2))
                .unwrap()
                .predict(&p("1100")),
            Err(Error::NoInformation)
        );
    }

    #[test]
    fn partial_overlap_uses_only_trained_cells() {
        let mut m = model(MeanKind::Simple);
        m.train(&p("1100"), 2.0).unwrap();
        m.train(&p("0011"), 8.0).unwrap();
        // RAM0 sees 11 (trained with 2.0), RAM1 sees 11 (trained with 8.0)
        assert_eq!(m.predict(&p("1111")).unwrap(), 5.0);
    }

    #[test]
    fn digit_filter_shrinks_admitted_cells() {
        let mut cfg = RegressionConfig::new(2);
        cfg.min_one = 2;
        let mut m = RegressionWisard::new(cfg).unwrap();
        m.set_mapping(TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2, 3]]).unwrap())
            .unwrap();
        m.train(&p("1100"), 3.0).unwrap();
        // only RAM0's address (digits 1,1) has two ones
        assert_eq!(m.predict(&p("1100")).unwrap(), 3.0);
        m.train(&p("1011"), 9.0).unwrap();
        assert_eq!(m.predict(&p("0011")).unwrap(), 9.0);
        assert_eq!(m.predict(&p("0000")), Err(Error::NoInformation));
    }

    #[test]
    fn means_switchable_after_training() {
        let mut m = model(MeanKind::Simple);
        m.train(&p("1100"), 1.0).unwrap();
        m.train(&p("0011"), 4.0).unwrap();
        m.set_mean(MeanKind::Geometric).unwrap();
        assert!((m.predict(&p("1111")).unwrap() - 2.0).abs() < 1e-12);
        m.set_mean(MeanKind::Power(1.0)).unwrap();
        assert!((m.predict(&p("1111")).unwrap() - 2.5).abs() < 1e-12);
    }
}
