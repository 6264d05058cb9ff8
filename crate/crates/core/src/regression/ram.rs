use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::mapping::{decode_address, Address};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RegressionCell {
    pub counter: u64,
    /// Sum of the targets of every example that addressed this cell.
    pub partial_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionRamNode {
    tuple: Vec<usize>,
    base: u32,
    cells: FxHashMap<Address, RegressionCell>,
}

impl RegressionRamNode {
    pub fn new(tuple: Vec<usize>, base: u32) -> Self {
        Self {
            tuple,
            base,
            cells: FxHashMap::default(),
        }
    }

    pub fn tuple(&self) -> &[usize] {
        &self.tuple
    }

    pub fn cells(&self) -> &FxHashMap<Address, RegressionCell> {
        &self.cells
    }

    pub fn cell(&self, address: Address) -> RegressionCell {
        self.cells.get(&address).copied().unwrap_or_default()
    }

    pub fn sorted_cells(&self) -> Vec<(Address, RegressionCell)> {
        let mut cells: Vec<_> = self.cells.iter().map(|(&a, &c)| (a, c)).collect();
        cells.sort_unstable_by_key(|&(a, _)| a);
        cells
    }

    pub(crate) fn insert_cell(&mut self, address: Address, cell: RegressionCell) {
        self.cells.insert(address, cell);
    }

    pub fn train_address(&mut self, address: Address, target: f64) {
        let cell = self.cells.entry(address).or_default();
        cell.counter += 1;
        cell.partial_sum += target;
    }

    /// Whether the address's digits include at least `min_zero` zeros and
    /// `min_one` ones.
    pub fn admits(&self, address: Address, min_zero: usize, min_one: usize) -> bool {
        if min_zero == 0 && min_one == 0 {
            return true;
        }
        let digits = decode_address(address, self.tuple.len(), self.base);
        let zeros = digits.iter().filter(|&&d| d == 0).count();
        let ones = digits.iter().filter(|&&d| d == 1).count();
        zeros >= min_zero && ones >= min_one
    }
}
