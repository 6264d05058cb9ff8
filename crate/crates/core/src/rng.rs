//! Seeded pseudo-random source shared by every component that needs randomness.
//!
//! The generator is xoshiro256++ seeded through SplitMix64. Bounded integers and
//! unit floats are derived here from raw 64-bit outputs rather than through
//! `rand`'s distribution code, so a seed produces the same mapping, kernel
//! centres and tie draws on every platform and every dependency version.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeededRng(Xoshiro256PlusPlus);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Generator used for classification tie draws: the seed's stream
    /// advanced by 2^128 steps, disjoint from the mapping stream.
    pub fn for_ties(seed: u64) -> Self {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        rng.jump();
        Self(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..bound` by rejection sampling on the top bits.
    ///
    /// Panics if `bound` is zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below() needs a positive bound");
        if bound.is_power_of_two() {
            return self.next_u64() & (bound - 1);
        }
        // Largest multiple of `bound` that fits in u64; draws past it are rejected.
        let zone = u64::MAX - (u64::MAX % bound) - 1;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }

    /// Uniform float in [0, 1) with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// In-place Fisher–Yates shuffle (Durstenfeld, high index first).
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// Raw generator state, as persisted in model documents.
    pub fn state(&self) -> [u64; 4] {
        let value = serde_json::to_value(&self.0).expect("xoshiro state serializes");
        serde_json::from_value::<XoshiroState>(value)
            .expect("xoshiro state has the documented layout")
            .s
    }

    pub fn from_state(s: [u64; 4]) -> Option<Self> {
        if s == [0; 4] {
            return None;
        }
        let value = serde_json::to_value(XoshiroState { s }).ok()?;
        serde_json::from_value(value).ok().map(Self)
    }
}

#[derive(Serialize, Deserialize)]
struct XoshiroState {
    s: [u64; 4],
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::new(7);
        let mut b = SeededRng::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn pinned_first_outputs() {
        // Frozen so that any change in the generator or its seeding is caught.
        let mut rng = SeededRng::new(0);
        let first: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        assert_eq!(first, PINNED_SEED0.to_vec());
    }

    // Reference values from an independent SplitMix64 + xoshiro256++ implementation.
    const PINNED_SEED0: [u64; 3] = [
        5987356902031041503,
        7051070477665621255,
        6633766593972829180,
    ];

    #[test]
    fn below_stays_in_range() {
        let mut rng = SeededRng::new(3);
        for bound in [1u64, 2, 3, 5, 7, 10, 1000] {
            for _ in 0..200 {
                assert!(rng.below(bound) < bound);
            }
        }
    }

    #[test]
    fn below_is_roughly_uniform() {
        let mut rng = SeededRng::new(11);
        let mut counts = [0u32; 3];
        for _ in 0..30_000 {
            counts[rng.below(3) as usize] += 1;
        }
        for c in counts {
            assert!((9_500..10_500).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = SeededRng::new(5);
        let mut v: Vec<usize> = (0..50).collect();
        rng.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
        assert_ne!(v, sorted);
    }

    #[test]
    fn state_round_trip_resumes_stream() {
        let mut rng = SeededRng::new(42);
        rng.next_u64();
        let mut restored = SeededRng::from_state(rng.state()).unwrap();
        assert_eq!(rng.next_u64(), restored.next_u64());
        assert!(SeededRng::from_state([0; 4]).is_none());
    }

    #[test]
    fn tie_stream_differs_from_mapping_stream() {
        assert_ne!(
            SeededRng::new(1).next_u64(),
            SeededRng::for_ties(1).next_u64()
        );
    }
}
