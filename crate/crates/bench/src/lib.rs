//! Workload generators shared by the benchmarks.

use ramnet_core::SeededRng;

pub fn random_patterns(seed: u64, count: usize, bits: usize) -> Vec<Vec<u8>> {
    let mut rng = SeededRng::new(seed);
    (0..count)
        .map(|_| (0..bits).map(|_| rng.below(2) as u8).collect())
        .collect()
}

/// Noisy copies of `classes` random prototypes, labelled `c0`, `c1`, ...
pub fn labelled_patterns(
    seed: u64,
    count: usize,
    bits: usize,
    classes: usize,
) -> Vec<(Vec<u8>, String)> {
    let protos = random_patterns(seed, classes, bits);
    let mut rng = SeededRng::new(seed ^ 0x5eed);
    (0..count)
        .map(|i| {
            let c = i % classes;
            let bits = protos[c]
                .iter()
                .map(|&b| if rng.below(10) == 0 { 1 - b } else { b })
                .collect();
            (bits, format!("c{c}"))
        })
        .collect()
}
