//! Sparse counter memory behind every classification RAM node.

use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::mapping::{decode_address, encode_address, encode_unchecked, Address};

/// One RAM node: `base^n` logical locations, stored sparsely.
///
/// Absent addresses read as counter 0 and a counter that drops to 0 is
/// removed, so `cells()` holds exactly the non-null locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamNode {
    tuple: Vec<usize>,
    base: u32,
    ignore_zero: bool,
    cells: FxHashMap<Address, u64>,
}

impl RamNode {
    pub fn new(tuple: Vec<usize>, base: u32, ignore_zero: bool) -> Self {
        Self {
            tuple,
            base,
            ignore_zero,
            cells: FxHashMap::default(),
        }
    }

    pub fn tuple(&self) -> &[usize] {
        &self.tuple
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn ignore_zero(&self) -> bool {
        self.ignore_zero
    }

    pub fn cells(&self) -> &FxHashMap<Address, u64> {
        &self.cells
    }

    pub fn counter(&self, address: Address) -> u64 {
        self.cells.get(&address).copied().unwrap_or(0)
    }

    /// Sets a counter directly; 0 removes the cell.
    pub(crate) fn set_counter(&mut self, address: Address, count: u64) {
        if count == 0 {
            self.cells.remove(&address);
        } else {
            self.cells.insert(address, count);
        }
    }

    pub fn address_of(&self, pattern: &[u8]) -> Result<Address> {
        encode_address(pattern, &self.tuple, self.base)
    }

    /// Address lookup for a pattern already validated by the caller.
    #[inline]
    pub(crate) fn address_unchecked(&self, pattern: &[u8]) -> Address {
        encode_unchecked(pattern, &self.tuple, self.base)
    }

    pub fn train(&mut self, pattern: &[u8]) -> Result<()> {
        let address = self.address_of(pattern)?;
        self.train_address(address);
        Ok(())
    }

    #[inline]
    pub fn train_address(&mut self, address: Address) {
        *self.cells.entry(address).or_insert(0) += 1;
    }

    /// Decrements the addressed counter; never-trained locations stay at 0.
    pub fn untrain(&mut self, pattern: &[u8]) -> Result<()> {
        let address = self.address_of(pattern)?;
        self.untrain_address(address);
        Ok(())
    }

    #[inline]
    pub fn untrain_address(&mut self, address: Address) {
        if let Some(count) = self.cells.get_mut(&address) {
            *count -= 1;
            if *count == 0 {
                self.cells.remove(&address);
            }
        }
    }

    /// Counter seen by classification: 0 for address 0 when `ignore_zero` is set.
    #[inline]
    pub fn effective_counter(&self, address: Address) -> u64 {
        if self.ignore_zero && address == 0 {
            0
        } else {
            self.counter(address)
        }
    }

    /// 1 when the addressed counter is strictly greater than `bleach`.
    pub fn vote(&self, pattern: &[u8], bleach: u64) -> Result<u8> {
        let address = self.address_of(pattern)?;
        Ok(self.vote_address(address, bleach))
    }

    #[inline]
    pub fn vote_address(&self, address: Address, bleach: u64) -> u8 {
        u8::from(self.effective_counter(address) > bleach)
    }

    /// Retina-shaped summary: each tuple position accumulates the counters of
    /// stored addresses whose digit at that position is non-zero.
    pub fn mental_image(&self, entry_size: usize) -> Vec<u64> {
        let mut image = vec![0; entry_size];
        self.add_mental_image(&mut image);
        image
    }

    pub(crate) fn add_mental_image(&self, image: &mut [u64]) {
        for (&address, &count) in &self.cells {
            let digits = decode_address(address, self.tuple.len(), self.base);
            for (slot, &d) in digits.iter().enumerate() {
                if d >= 1 {
                    if let Some(px) = image.get_mut(self.tuple[slot]) {
                        *px += count;
                    }
                }
            }
        }
    }

    /// Stored cells ordered by address.
    pub fn sorted_cells(&self) -> Vec<(Address, u64)> {
        let mut cells: Vec<_> = self.cells.iter().map(|(&a, &c)| (a, c)).collect();
        cells.sort_unstable_by_key(|&(a, _)| a);
        cells
    }

    pub fn max_counter(&self) -> u64 {
        self.cells.values().copied().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use proptest::prelude::*;

    fn ram(tuple: &[usize]) -> RamNode {
        RamNode::new(tuple.to_vec(), 2, false)
    }

    #[test]
    fn repeated_training_accumulates() {
        let mut r = ram(&[0, 1, 2]);
        r.train(&[1, 0, 1, 1]).unwrap();
        r.train(&[1, 0, 1, 0]).unwrap();
        assert_eq!(r.sorted_cells(), [(5, 2)]);
        assert_eq!(r.counter(3), 0);
    }

    #[test]
    fn distinct_patterns_distinct_cells() {
        let mut r = ram(&[0, 1]);
        for p in [[0u8, 1], [1, 0], [1, 1]] {
            r.train(&p).unwrap();
        }
        assert_eq!(r.sorted_cells(), [(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn untrain_is_inverse_and_floored() {
        let mut r = ram(&[0, 1]);
        r.untrain(&[1, 1]).unwrap();
        assert!(r.cells().is_empty());
        r.train(&[1, 1]).unwrap();
        r.train(&[1, 1]).unwrap();
        r.untrain(&[1, 1]).unwrap();
        assert_eq!(r.sorted_cells(), [(3, 1)]);
        r.untrain(&[1, 1]).unwrap();
        assert!(r.cells().is_empty());
    }

    #[test]
    fn vote_uses_strict_bleach() {
        let mut r = ram(&[0, 1]);
        r.train(&[1, 0]).unwrap();
        assert_eq!(r.vote(&[1, 0], 0).unwrap(), 1);
        assert_eq!(r.vote(&[1, 0], 1).unwrap(), 0);
        assert_eq!(r.vote(&[0, 1], 0).unwrap(), 0);
    }

    #[test]
    fn ignore_zero_silences_address_zero() {
        let mut r = RamNode::new(vec![0, 1], 2, true);
        for _ in 0..7 {
            r.train(&[0, 0]).unwrap();
        }
        assert_eq!(r.counter(0), 7);
        assert_eq!(r.vote(&[0, 0], 0).unwrap(), 0);
    }

    #[test]
    fn digit_outside_base_is_rejected() {
        let mut r = ram(&[0, 1]);
        assert!(matches!(r.train(&[2, 0]), Err(Error::Encoding(_))));
        let mut r3 = RamNode::new(vec![0, 1], 3, false);
        r3.train(&[2, 1]).unwrap();
        assert_eq!(r3.sorted_cells(), [(5, 1)]);
    }

    #[test]
    fn mental_image_examples() {
        assert_eq!(ram(&[0, 1]).mental_image(4), [0, 0, 0, 0]);
        let mut r = ram(&[0, 1]);
        for _ in 0..3 {
            r.train(&[1, 0, 0, 0]).unwrap();
        }
        assert_eq!(r.mental_image(4), [3, 0, 0, 0]);
        let mut r = ram(&[0, 1]);
        r.train(&[1, 1, 0, 0]).unwrap();
        assert_eq!(r.mental_image(4), [1, 1, 0, 0]);
        // tuple order maps back to retina positions
        let mut r = ram(&[3, 1]);
        r.train(&[0, 0, 0, 1]).unwrap();
        assert_eq!(r.mental_image(4), [0, 0, 0, 1]);
    }

    proptest! {
        #[test]
        fn train_untrain_interleaving_restores_state(
            ops in prop::collection::vec((0u8..16, any::<bool>()), 0..60)
        ) {
            let mut r = ram(&[0, 1, 2, 3]);
            r.train(&[1, 1, 1, 1]).unwrap();
            let baseline = r.clone();
            let pattern = |v: u8| [v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1];
            // every op is trained first and undone in reverse order afterwards
            for &(v, _) in &ops {
                r.train(&pattern(v)).unwrap();
            }
            for &(v, _) in ops.iter().rev() {
                r.untrain(&pattern(v)).unwrap();
            }
            prop_assert_eq!(r, baseline);
        }

        #[test]
        fn sparsity_and_vote_monotonicity(
            patterns in prop::collection::vec(0u8..16, 0..40), probe in 0u8..16
        ) {
            let mut r = ram(&[0, 1, 2, 3]);
            let pattern = |v: u8| [v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1];
            for &v in &patterns {
                r.train(&pattern(v)).unwrap();
            }
            prop_assert!(r.cells().len() <= patterns.len().min(16));
            let mut last = 1;
            for b in 0..45 {
                let v = r.vote(&pattern(probe), b).unwrap();
                prop_assert!(v <= last);
                last = v;
            }
        }
    }
}
