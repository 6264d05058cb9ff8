use crate::cluswisard::{acceptance_threshold, validate_growth};
use crate::error::{Error, Result};
use crate::mapping::{Address, TupleMapping};
use crate::model::{RegressionModel, SizeReport};

use super::mean::MeanKind;
use super::rew::{check_target, RegressionConfig, RegressionDiscriminator};

#[derive(Debug, Clone, PartialEq)]
pub struct ClusRegressionConfig {
    pub address_size: usize,
    pub min_score: f64,
    pub threshold: u64,
    /// Maximum number of predictors.
    pub limit: usize,
    pub mean: MeanKind,
    pub min_zero: usize,
    pub min_one: usize,
    pub base: u32,
    pub complete_address: bool,
    pub seed: u64,
}

impl ClusRegressionConfig {
    pub fn new(address_size: usize, min_score: f64, threshold: u64, limit: usize) -> Self {
        Self {
            address_size,
            min_score,
            threshold,
            limit,
            mean: MeanKind::Simple,
            min_zero: 0,
            min_one: 0,
            base: 2,
            complete_address: false,
            seed: 0,
        }
    }

    /// Settings shared with every predictor.
    pub fn predictor_config(&self) -> RegressionConfig {
        RegressionConfig {
            address_size: self.address_size,
            mean: self.mean,
            min_zero: self.min_zero,
            min_one: self.min_one,
            base: self.base,
            complete_address: self.complete_address,
            seed: self.seed,
        }
    }

    fn validate(&self) -> Result<()> {
        self.predictor_config().validate()?;
        validate_growth(self.min_score, self.threshold, self.limit)
    }
}

/// Several regression predictors over one mapping; each example goes to the
/// predictors it resembles, and each query to the most similar one.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusRegressionWisard {
    config: ClusRegressionConfig,
    mapping: Option<TupleMapping>,
    predictors: Vec<RegressionDiscriminator>,
}

fn best_index(scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &s) in scores.iter().enumerate() {
        if best.is_none_or(|b| s > scores[b]) {
            best = Some(i);
        }
    }
    best
}

impl ClusRegressionWisard {
    pub fn new(config: ClusRegressionConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            mapping: None,
            predictors: Vec::new(),
        })
    }

    pub(crate) fn from_parts(
        config: ClusRegressionConfig,
        mapping: Option<TupleMapping>,
        predictors: Vec<RegressionDiscriminator>,
    ) -> Self {
        Self {
            config,
            mapping,
            predictors,
        }
    }

    pub fn config(&self) -> &ClusRegressionConfig {
        &self.config
    }

    pub fn mapping(&self) -> Option<&TupleMapping> {
        self.mapping.as_ref()
    }

    pub fn predictors(&self) -> &[RegressionDiscriminator] {
        &self.predictors
    }

    pub fn set_mean(&mut self, mean: MeanKind) -> Result<()> {
        mean.validate()?;
        self.config.mean = mean;
        Ok(())
    }

    pub fn set_mapping(&mut self, mapping: TupleMapping) -> Result<()> {
        if !self.predictors.is_empty() {
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

    fn similarities(&self, addresses: &[Address]) -> Vec<f64> {
        self.predictors
            .iter()
            .map(|p| p.similarity(addresses))
            .collect()
    }

    pub fn train(&mut self, pattern: &[u8], target: f64) -> Result<()> {
        check_target(target)?;
        if self.mapping.is_none() {
            self.mapping = Some(TupleMapping::random(
                pattern.len(),
                self.config.address_size,
                self.config.seed,
                self.config.complete_address,
            )?);
        }
        let mapping = self.mapping.as_ref().expect("mapping set above");
        let addresses = mapping.addresses(pattern, self.config.base)?;
        let fresh = || RegressionDiscriminator::new(mapping, self.config.base);

        if self.predictors.is_empty() {
            let mut p = fresh();
            p.train_addresses(&addresses, target);
            self.predictors.push(p);
            return Ok(());
        }
        let scores = self.similarities(&addresses);
        let (min_score, threshold) = (self.config.min_score, self.config.threshold);
        let accepted: Vec<usize> = (0..self.predictors.len())
            .filter(|&i| {
                scores[i]
                    >= acceptance_threshold(
                        min_score,
                        threshold,
                        self.predictors[i].trained_count(),
                    )
            })
            .collect();
        if !accepted.is_empty() {
            for i in accepted {
                self.predictors[i].train_addresses(&addresses, target);
            }
        } else if self.predictors.len() < self.config.limit {
            let mut p = fresh();
            p.train_addresses(&addresses, target);
            self.predictors.push(p);
        } else {
            let best = best_index(&scores).expect("non-empty");
            self.predictors[best].train_addresses(&addresses, target);
        }
        Ok(())
    }

    /// Index of the predictor that would answer `pattern`.
    pub fn route(&self, pattern: &[u8]) -> Result<usize> {
        let mapping = match &self.mapping {
            Some(m) if !self.predictors.is_empty() => m,
            _ => return Err(Error::Model("model has no predictors".into())),
        };
        let addresses = mapping.addresses(pattern, self.config.base)?;
        Ok(best_index(&self.similarities(&addresses)).expect("non-empty"))
    }

    pub fn predict(&self, pattern: &[u8]) -> Result<f64> {
        let index = self.route(pattern)?;
        let mapping = self.mapping.as_ref().expect("route checked the mapping");
        let addresses = mapping.addresses(pattern, self.config.base)?;
        self.predictors[index].predict_addresses(&addresses, &self.config.predictor_config())
    }

    pub fn size_report(&self) -> SizeReport {
        let mut report = SizeReport {
            discriminators: self.predictors.len(),
            ..SizeReport::default()
        };
        for (i, p) in self.predictors.iter().enumerate() {
            report.ram_nodes += p.rams().len();
            report.cells += p.cell_count();
            report
                .trained_counts
                .insert(i.to_string(), p.trained_count());
        }
        report.approx_bytes = report.cells * 3 * std::mem::size_of::<u64>();
        report
    }
}

impl RegressionModel for ClusRegressionWisard {
    fn train(&mut self, pattern: &[u8], target: f64) -> Result<()> {
        ClusRegressionWisard::train(self, pattern, target)
    }

    fn predict(&self, pattern: &[u8]) -> Result<f64> {
        ClusRegressionWisard::predict(self, pattern)
    }

    fn size_report(&self) -> SizeReport {
        ClusRegressionWisard::size_report(self)
    }
}
