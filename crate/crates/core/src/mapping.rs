//! Retina-to-tuple mapping and tuple-to-address encoding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Index of a RAM location: the little-endian base-`base` value of a tuple's digits.
pub type Address = u64;

/// Number of addressable locations `base^n`, or `None` if it does not fit an [`Address`].
pub fn address_capacity(base: u32, tuple_size: usize) -> Option<u128> {
    let exp = u32::try_from(tuple_size).ok()?;
    let cap = u128::from(base).checked_pow(exp)?;
    (cap <= u128::from(u64::MAX) + 1).then_some(cap)
}

/// Ordered groups of retina positions, one group per RAM node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleMapping {
    entry_size: usize,
    tuple_size: usize,
    tuples: Vec<Vec<usize>>,
}

impl TupleMapping {
    /// Seeded pseudo-random mapping.
    ///
    /// The retina indices are Fisher–Yates shuffled and cut into tuples of
    /// `tuple_size`. When `entry_size` is not a multiple of `tuple_size` the
    /// call fails unless `complete_address` is set, in which case the last
    /// tuple is filled up by continuing cyclically from the start of the
    /// shuffled sequence.
    pub fn random(
        entry_size: usize,
        tuple_size: usize,
        seed: u64,
        complete_address: bool,
    ) -> Result<Self> {
        if tuple_size == 0 || entry_size < tuple_size {
            return Err(Error::Mapping(format!(
                "need entry size >= tuple size >= 1, got entry {entry_size}, tuple {tuple_size}"
            )));
        }
        let remainder = entry_size % tuple_size;
        if remainder != 0 && !complete_address {
            return Err(Error::Mapping(format!(
                "entry size {entry_size} is not a multiple of tuple size {tuple_size} \
                 (enable complete address size to pad the last tuple)"
            )));
        }

        let mut order: Vec<usize> = (0..entry_size).collect();
        SeededRng::new(seed).shuffle(&mut order);

        let mut tuples: Vec<Vec<usize>> = order.chunks(tuple_size).map(<[usize]>::to_vec).collect();
        if remainder != 0 {
            let last = tuples.last_mut().expect("entry_size >= tuple_size");
            last.extend(order.iter().cycle().take(tuple_size - remainder));
        }
        Ok(Self {
            entry_size,
            tuple_size,
            tuples,
        })
    }

    /// Wraps an explicit mapping after checking lengths and index ranges.
    pub fn from_tuples(entry_size: usize, tuples: Vec<Vec<usize>>) -> Result<Self> {
        let tuple_size = match tuples.first() {
            Some(t) if !t.is_empty() => t.len(),
            _ => {
                return Err(Error::Mapping(
                    "mapping needs at least one non-empty tuple".into(),
                ))
            }
        };
        for (i, tuple) in tuples.iter().enumerate() {
            if tuple.len() != tuple_size {
                return Err(Error::Mapping(format!(
                    "tuple {i} has {} positions, expected {tuple_size}",
                    tuple.len()
                )));
            }
            if let Some(&bad) = tuple.iter().find(|&&p| p >= entry_size) {
                return Err(Error::Mapping(format!(
                    "tuple {i} references position {bad} outside a retina of {entry_size}"
                )));
            }
        }
        Ok(Self {
            entry_size,
            tuple_size,
            tuples,
        })
    }

    pub fn entry_size(&self) -> usize {
        self.entry_size
    }

    pub fn tuple_size(&self) -> usize {
        self.tuple_size
    }

    /// Number of tuples, i.e. RAM nodes per discriminator.
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// Addresses of every tuple for `pattern`, after validating its length and digits.
    pub fn addresses(&self, pattern: &[u8], base: u32) -> Result<Vec<Address>> {
        self.check_pattern(pattern, base)?;
        Ok(self
            .tuples
            .iter()
            .map(|t| encode_unchecked(pattern, t, base))
            .collect())
    }

    pub fn check_pattern(&self, pattern: &[u8], base: u32) -> Result<()> {
        if pattern.len() != self.entry_size {
            return Err(Error::Input(format!(
                "pattern has length {}, retina expects {}",
                pattern.len(),
                self.entry_size
            )));
        }
        check_digits(pattern, base)
    }
}

pub(crate) fn check_digits(pattern: &[u8], base: u32) -> Result<()> {
    match pattern.iter().position(|&d| u32::from(d) >= base) {
        Some(i) => Err(Error::Encoding(format!(
            "digit {} at position {i} is not valid in base {base}",
            pattern[i]
        ))),
        None => Ok(()),
    }
}

/// Little-endian positional value of the digits selected by `tuple`.
pub fn encode_address(pattern: &[u8], tuple: &[usize], base: u32) -> Result<Address> {
    if base < 2 {
        return Err(Error::Config(format!(
            "base must be at least 2, got {base}"
        )));
    }
    if address_capacity(base, tuple.len()).is_none() {
        return Err(Error::Config(format!(
            "base {base} with {} address lines overflows a 64-bit address",
            tuple.len()
        )));
    }
    for &p in tuple {
        match pattern.get(p) {
            None => {
                return Err(Error::Input(format!(
                    "tuple position {p} outside a pattern of length {}",
                    pattern.len()
                )))
            }
            Some(&d) if u32::from(d) >= base => {
                return Err(Error::Encoding(format!(
                    "digit {d} at position {p} is not valid in base {base}"
                )))
            }
            Some(_) => {}
        }
    }
    Ok(encode_unchecked(pattern, tuple, base))
}

#[inline]
pub(crate) fn encode_unchecked(pattern: &[u8], tuple: &[usize], base: u32) -> Address {
    if base == 2 {
        tuple
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &p)| acc | (u64::from(pattern[p]) << j))
    } else {
        let base = u64::from(base);
        tuple
            .iter()
            .rev()
            .fold(0, |acc, &p| acc.wrapping_mul(base) + u64::from(pattern[p]))
    }
}

/// Digits of `address` in tuple order (inverse of [`encode_address`]).
pub fn decode_address(mut address: Address, tuple_size: usize, base: u32) -> Vec<u8> {
    let base = u64::from(base);
    (0..tuple_size)
        .map(|_| {
            let d = (address % base) as u8;
            address /= base;
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_by_two_is_a_partition() {
        for seed in 0..20 {
            let m = TupleMapping::random(4, 2, seed, false).unwrap();
            assert_eq!(m.len(), 2);
            let mut all: Vec<usize> = m.tuples().concat();
            all.sort_unstable();
            assert_eq!(all, [0, 1, 2, 3]);
        }
    }

    #[test]
    fn single_chunk_is_a_permutation() {
        let m = TupleMapping::random(4, 4, 123, false).unwrap();
        assert_eq!(m.len(), 1);
        let mut t = m.tuples()[0].clone();
        t.sort_unstable();
        assert_eq!(t, [0, 1, 2, 3]);
    }

    #[test]
    fn indivisible_without_padding_fails() {
        assert!(matches!(
            TupleMapping::random(5, 2, 0, false),
            Err(Error::Mapping(_))
        ));
        assert!(matches!(
            TupleMapping::random(1, 2, 0, true),
            Err(Error::Mapping(_))
        ));
        assert!(matches!(
            TupleMapping::random(4, 0, 0, true),
            Err(Error::Mapping(_))
        ));
    }

    #[test]
    fn padding_repeats_only_in_last_tuple() {
        let m = TupleMapping::random(7, 3, 5, true).unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.tuples().iter().all(|t| t.len() == 3));
        let head: Vec<usize> = m.tuples()[..2].concat();
        let mut sorted = head.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
        let last = &m.tuples()[2];
        let mut l = last.clone();
        l.sort_unstable();
        l.dedup();
        assert_eq!(l.len(), 3, "no repeats inside the padded tuple");
        let mut covered: Vec<usize> = m.tuples().concat();
        covered.sort_unstable();
        covered.dedup();
        assert_eq!(covered, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn explicit_mapping_validation() {
        assert!(TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2, 3]]).is_ok());
        assert!(matches!(
            TupleMapping::from_tuples(4, vec![vec![0, 9]]),
            Err(Error::Mapping(_))
        ));
        assert!(matches!(
            TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2]]),
            Err(Error::Mapping(_))
        ));
        assert!(TupleMapping::from_tuples(4, vec![]).is_err());
    }

    #[test]
    fn address_examples() {
        assert_eq!(encode_address(&[1, 0, 1, 1], &[0, 1, 2], 2).unwrap(), 5);
        assert_eq!(encode_address(&[0, 0, 0, 0], &[3, 1, 2], 2).unwrap(), 0);
        assert_eq!(encode_address(&[0, 0, 0], &[0, 2], 5).unwrap(), 0);
        assert_eq!(encode_address(&[2, 1], &[0, 1], 3).unwrap(), 5);
        assert!(matches!(
            encode_address(&[2, 1], &[0, 1], 2),
            Err(Error::Encoding(_))
        ));
    }

    #[test]
    fn capacity_limits() {
        assert_eq!(address_capacity(2, 64), Some(1u128 << 64));
        assert_eq!(address_capacity(2, 65), None);
        assert_eq!(address_capacity(3, 4), Some(81));
    }

    #[test]
    fn addresses_checks_length() {
        let m = TupleMapping::from_tuples(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(m.addresses(&[1, 0, 1], 2), Err(Error::Input(_))));
        assert_eq!(m.addresses(&[1, 1, 0, 0], 2).unwrap(), [3, 0]);
    }

    proptest! {
        #[test]
        fn partition_property(n in 1usize..9, k in 1usize..9, seed: u64) {
            let m = TupleMapping::random(n * k, n, seed, false).unwrap();
            let mut all: Vec<usize> = m.tuples().concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n * k).collect::<Vec<_>>());
            prop_assert_eq!(m, TupleMapping::random(n * k, n, seed, false).unwrap());
        }

        #[test]
        fn encoding_is_a_bijection(base in 2u32..5, n in 1usize..5) {
            let tuple: Vec<usize> = (0..n).rev().collect();
            let cap = address_capacity(base, n).unwrap() as u64;
            let mut seen = vec![false; cap as usize];
            for value in 0..cap {
                // tuple reads positions in reverse, so lay the digits out to match
                let mut pattern = decode_address(value, n, base);
                pattern.reverse();
                let addr = encode_address(&pattern, &tuple, base).unwrap();
                prop_assert_eq!(addr, value);
                prop_assert!(!seen[addr as usize]);
                seen[addr as usize] = true;
            }
        }
    }
}
