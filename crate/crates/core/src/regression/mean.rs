//! Aggregation of the accessed cells into one prediction.
//!
//! Each cell contributes its per-cell mean `q = partial_sum / counter`, except
//! for [`MeanKind::Simple`], which pools all sums and counters. Every kind
//! returns `c` when all `q` equal `c`, and stays within `[min q, max q]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum MeanKind {
    /// `Σ sum / Σ counter`.
    #[default]
    Simple,
    /// `(Σ q^p / k)^(1/p)`.
    Power(f64),
    Median,
    /// `k / Σ 1/q`.
    Harmonic,
    /// `(k / Σ q^-p)^(1/p)`.
    HarmonicPower(f64),
    /// `exp(Σ ln q / k)`.
    Geometric,
    /// `ln(Σ exp(q) / k)`.
    Exponential,
    /// `logit(Σ σ(q) / k)`.
    Logistic,
}

pub const DEFAULT_POWER: f64 = 2.0;

impl MeanKind {
    pub fn name(&self) -> &'static str {
        match self {
            MeanKind::Simple => "simple",
            MeanKind::Power(_) => "power",
            MeanKind::Median => "median",
            MeanKind::Harmonic => "harmonic",
            MeanKind::HarmonicPower(_) => "harmonicPower",
            MeanKind::Geometric => "geometric",
            MeanKind::Exponential => "exponential",
            MeanKind::Logistic => "logistic",
        }
    }

    pub fn power(&self) -> Option<f64> {
        match *self {
            MeanKind::Power(p) | MeanKind::HarmonicPower(p) => Some(p),
            _ => None,
        }
    }

    /// Builds a kind from its name; `power` is used by the two power means
    /// and defaults to 2.
    pub fn from_name(name: &str, power: Option<f64>) -> Result<Self> {
        let p = power.unwrap_or(DEFAULT_POWER);
        let kind = match name {
            "simple" => MeanKind::Simple,
            "power" => MeanKind::Power(p),
            "median" => MeanKind::Median,
            "harmonic" => MeanKind::Harmonic,
            "harmonicPower" | "harmonic-power" => MeanKind::HarmonicPower(p),
            "geometric" => MeanKind::Geometric,
            "exponential" => MeanKind::Exponential,
            "logistic" => MeanKind::Logistic,
            other => return Err(Error::Config(format!("unknown mean function {other:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        match self.power() {
            Some(p) if !(p.is_finite() && p > 0.0) => Err(Error::Config(format!(
                "power mean exponent must be finite and positive, got {p}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn all(power: f64) -> [MeanKind; 8] {
        [
            MeanKind::Simple,
            MeanKind::Power(power),
            MeanKind::Median,
            MeanKind::Harmonic,
            MeanKind::HarmonicPower(power),
            MeanKind::Geometric,
            MeanKind::Exponential,
            MeanKind::Logistic,
        ]
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power() {
            Some(p) => write!(f, "{}({p})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for MeanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeanKind::from_name(s, None)
    }
}

/// `ln Σ exp(x_i)` without overflow.
fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `ln σ(x) = -ln(1 + e^-x)`, stable for large |x|.
fn ln_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

fn require_positive(qs: &[f64], kind: MeanKind) -> Result<()> {
    match qs.iter().find(|&&q| q <= 0.0) {
        Some(q) => Err(Error::Domain(format!(
            "{} mean needs positive cell values, found {q}",
            kind.name()
        ))),
        None => Ok(()),
    }
}

/// Combines `(counter, partial_sum)` cells with the chosen mean.
pub fn apply_mean(kind: MeanKind, cells: &[(u64, f64)]) -> Result<f64> {
    if cells.is_empty() {
        return Err(Error::NoInformation);
    }
    if let Some(&(c, _)) = cells.iter().find(|&&(c, _)| c == 0) {
        return Err(Error::Domain(format!(
            "cell counter must be at least 1, got {c}"
        )));
    }
    if kind == MeanKind::Simple {
        let total: f64 = cells.iter().map(|&(_, s)| s).sum();
        let count: f64 = cells.iter().map(|&(c, _)| c as f64).sum();
        return Ok(total / count);
    }

    let qs: Vec<f64> = cells.iter().map(|&(c, s)| s / c as f64).collect();
    let k = qs.len() as f64;
    let value = match kind {
        MeanKind::Simple => unreachable!("handled above"),
        MeanKind::Power(p) => {
            require_positive(&qs, kind)?;
            (qs.iter().map(|q| q.powf(p)).sum::<f64>() / k).powf(1.0 / p)
        }
        MeanKind::Median => {
            let mut sorted = qs;
            sorted.sort_by(f64::total_cmp);
            let mid = sorted.len() / 2;
            if sorted.len() % 2 == 1 {
                sorted[mid]
            } else {
                (sorted[mid - 1] + sorted[mid]) / 2.0
            }
        }
        MeanKind::Harmonic => {
            require_positive(&qs, kind)?;
            k / qs.iter().map(|q| q.recip()).sum::<f64>()
        }
        MeanKind::HarmonicPower(p) => {
            require_positive(&qs, kind)?;
            (k / qs.iter().map(|q| q.powf(-p)).sum::<f64>()).powf(1.0 / p)
        }
        MeanKind::Geometric => {
            require_positive(&qs, kind)?;
            (qs.iter().map(|q| q.ln()).sum::<f64>() / k).exp()
        }
        MeanKind::Exponential => log_sum_exp(qs.iter().copied()) - k.ln(),
        MeanKind::Logistic => {
            // logit(m) = ln m - ln(1 - m), with m = mean σ(q) and 1 - m = mean σ(-q).
            let ln_m = log_sum_exp(qs.iter().map(|&q| ln_sigmoid(q)));
            let ln_not_m = log_sum_exp(qs.iter().map(|&q| ln_sigmoid(-q)));
            ln_m - ln_not_m
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(values: &[f64]) -> Vec<(u64, f64)> {
        values.iter().map(|&v| (1, v)).collect()
    }

    #[test]
    fn examples() {
        let v = apply_mean(MeanKind::Power(2.0), &q(&[3.0, 4.0])).unwrap();
        assert!((v - 12.5f64.sqrt()).abs() < 1e-12);
        assert!((v - 3.535534).abs() < 1e-6);
        let h = apply_mean(MeanKind::Harmonic, &q(&[1.0, 2.0])).unwrap();
        assert!((h - 4.0 / 3.0).abs() < 1e-12);
        let g = apply_mean(MeanKind::Geometric, &q(&[4.0, 9.0])).unwrap();
        assert!((g - 6.0).abs() < 1e-12);
        assert_eq!(
            apply_mean(MeanKind::Median, &q(&[9.0, 1.0, 2.0])).unwrap(),
            2.0
        );
        assert_eq!(
            apply_mean(MeanKind::Median, &q(&[4.0, 1.0, 2.0, 9.0])).unwrap(),
            3.0
        );
    }

    #[test]
    fn simple_pools_counters() {
        // per-cell means 5 and 1, but the first cell carries three examples
        let v = apply_mean(MeanKind::Simple, &[(3, 15.0), (1, 1.0)]).unwrap();
        assert_eq!(v, 4.0);
    }

    #[test]
    fn domain_errors() {
        for kind in [
            MeanKind::Power(2.0),
            MeanKind::Harmonic,
            MeanKind::HarmonicPower(2.0),
            MeanKind::Geometric,
        ] {
            assert!(matches!(
                apply_mean(kind, &q(&[1.0, -1.0])),
                Err(Error::Domain(_))
            ));
        }
        assert!(apply_mean(MeanKind::Median, &q(&[1.0, -1.0])).is_ok());
        assert!(matches!(
            apply_mean(MeanKind::Simple, &[]),
            Err(Error::NoInformation)
        ));
    }

    #[test]
    fn extreme_values_stay_finite() {
        let e = apply_mean(MeanKind::Exponential, &q(&[1000.0, 1000.0])).unwrap();
        assert!((e - 1000.0).abs() < 1e-9);
        let l = apply_mean(MeanKind::Logistic, &q(&[800.0, 800.0])).unwrap();
        assert!((l - 800.0).abs() < 1e-9, "{l}");
        let l = apply_mean(MeanKind::Logistic, &q(&[-800.0, -800.0])).unwrap();
        assert!((l + 800.0).abs() < 1e-9, "{l}");
    }

    #[test]
    fn names_round_trip() {
        for kind in MeanKind::all(3.0) {
            assert_eq!(
                MeanKind::from_name(kind.name(), kind.power()).unwrap(),
                kind
            );
        }
        assert!(MeanKind::from_name("power", Some(-1.0)).is_err());
        assert!("mode".parse::<MeanKind>().is_err());
    }

    proptest! {
        #[test]
        fn constant_cells(c in 0.01f64..100.0, k in 1usize..12) {
            for kind in MeanKind::all(2.0) {
                let v = apply_mean(kind, &vec![(2, 2.0 * c); k]).unwrap();
                prop_assert!((v - c).abs() <= 1e-9 * c.max(1.0), "{kind}: {v} vs {c}");
            }
        }
    }
}
