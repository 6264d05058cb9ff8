//! Binarization of real-valued inputs into retina patterns.
//!
//! Every binarizer is immutable once built and `transform` is pure, so a single
//! instance can be shared between threads.

use crate::error::{Error, Result};
use crate::pattern::BitPattern;
use crate::rng::SeededRng;

/// Common surface of all binarizers: one real array in, one bit pattern out.
pub trait Binarizer {
    fn transform(&self, input: &[f64]) -> Result<BitPattern>;
}

fn check_finite(input: &[f64]) -> Result<()> {
    match input.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Encoding(format!(
            "non-finite value {} at position {i}",
            input[i]
        ))),
        None => Ok(()),
    }
}

/// `1` where the value is strictly above `threshold`.
pub fn threshold_transform(input: &[f64], threshold: f64) -> Result<BitPattern> {
    check_finite(input)?;
    if !threshold.is_finite() {
        return Err(Error::Encoding(format!("non-finite threshold {threshold}")));
    }
    Ok(input.iter().map(|&v| u8::from(v > threshold)).collect())
}

/// Thresholds against the arithmetic mean of the input itself.
pub fn mean_threshold_transform(input: &[f64]) -> Result<BitPattern> {
    if input.is_empty() {
        return Err(Error::Encoding(
            "mean thresholding needs a non-empty input".into(),
        ));
    }
    check_finite(input)?;
    let mean = input.iter().sum::<f64>() / input.len() as f64;
    Ok(input.iter().map(|&v| u8::from(v > mean)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholding {
    pub threshold: f64,
}

impl Thresholding {
    pub fn new(threshold: f64) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(Error::Config(format!(
                "threshold must be finite, got {threshold}"
            )));
        }
        Ok(Self { threshold })
    }
}

impl Binarizer for Thresholding {
    fn transform(&self, input: &[f64]) -> Result<BitPattern> {
        threshold_transform(input, self.threshold)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanThresholding;

impl Binarizer for MeanThresholding {
    fn transform(&self, input: &[f64]) -> Result<BitPattern> {
        mean_threshold_transform(input)
    }
}

/// Thermometer code: each variable becomes `size` bits of the form `1^k 0^(size-k)`.
///
/// Values are clamped into `[minimum, maximum]`; bit `i` is set when
/// `value - minimum > i * (maximum - minimum) / size`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thermometer {
    size: usize,
    minimum: f64,
    maximum: f64,
    thresholds: Vec<f64>,
}

impl Thermometer {
    pub fn new(size: usize, minimum: f64, maximum: f64) -> Result<Self> {
        if size == 0 {
            return Err(Error::Config("thermometer size must be at least 1".into()));
        }
        if !(minimum.is_finite() && maximum.is_finite()) || minimum >= maximum {
            return Err(Error::Config(format!(
                "thermometer range must satisfy minimum < maximum, got [{minimum}, {maximum}]"
            )));
        }
        let range = maximum - minimum;
        let thresholds = (0..size).map(|i| i as f64 * range / size as f64).collect();
        Ok(Self {
            size,
            minimum,
            maximum,
            thresholds,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn minimum(&self) -> f64 {
        self.minimum
    }

    pub fn maximum(&self) -> f64 {
        self.maximum
    }

    fn encode_into(&self, value: f64, out: &mut Vec<u8>) {
        let shifted = value.clamp(self.minimum, self.maximum) - self.minimum;
        out.extend(self.thresholds.iter().map(|&t| u8::from(shifted > t)));
    }
}

impl Binarizer for Thermometer {
    fn transform(&self, input: &[f64]) -> Result<BitPattern> {
        check_finite(input)?;
        let mut out = Vec::with_capacity(input.len() * self.size);
        for &v in input {
            self.encode_into(v, &mut out);
        }
        Ok(BitPattern::new(out))
    }
}

/// Fixed-size activation bitmap over seeded kernels.
///
/// Kernel centres are drawn uniformly from the unit hypercube, so inputs are
/// expected to be normalized to `[0, 1]^dim`. Each input point activates the
/// kernel with the nearest centre (Euclidean; lowest index wins ties), and each
/// active kernel contributes `bits_by_kernel` ones. The output length is
/// `num_kernels * bits_by_kernel` whatever the number of points.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCanvas {
    dim: usize,
    bits_by_kernel: usize,
    seed: u64,
    centers: Vec<Vec<f64>>,
}

impl KernelCanvas {
    pub fn new(dim: usize, num_kernels: usize, bits_by_kernel: usize, seed: u64) -> Result<Self> {
        Self::check_shape(dim, num_kernels, bits_by_kernel)?;
        let mut rng = SeededRng::new(seed);
        let centers = (0..num_kernels)
            .map(|_| (0..dim).map(|_| rng.unit_f64()).collect())
            .collect();
        Ok(Self {
            dim,
            bits_by_kernel,
            seed,
            centers,
        })
    }

    /// Builds a canvas around explicit kernel centres.
    pub fn with_centers(centers: Vec<Vec<f64>>, bits_by_kernel: usize, seed: u64) -> Result<Self> {
        let dim = centers.first().map_or(0, Vec::len);
        Self::check_shape(dim, centers.len(), bits_by_kernel)?;
        if let Some(bad) = centers.iter().position(|c| c.len() != dim) {
            return Err(Error::Config(format!(
                "kernel centre {bad} has {} coordinates, expected {dim}",
                centers[bad].len()
            )));
        }
        if centers.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("kernel centres must be finite".into()));
        }
        Ok(Self {
            dim,
            bits_by_kernel,
            seed,
            centers,
        })
    }

    fn check_shape(dim: usize, num_kernels: usize, bits_by_kernel: usize) -> Result<()> {
        if dim == 0 || num_kernels == 0 || bits_by_kernel == 0 {
            return Err(Error::Config(format!(
                "kernel canvas needs dim, numKernels and bitsByKernel >= 1 \
                 (got {dim}, {num_kernels}, {bits_by_kernel})"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_kernels(&self) -> usize {
        self.centers.len()
    }

    pub fn bits_by_kernel(&self) -> usize {
        self.bits_by_kernel
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn output_len(&self) -> usize {
        self.centers.len() * self.bits_by_kernel
    }

    fn nearest(&self, point: &[f64]) -> usize {
        let mut best = (0, f64::INFINITY);
        for (k, center) in self.centers.iter().enumerate() {
            let d2: f64 = center
                .iter()
                .zip(point)
                .map(|(c, p)| (c - p) * (c - p))
                .sum();
            if d2 < best.1 {
                best = (k, d2);
            }
        }
        best.0
    }

    pub fn transform_points<P: AsRef<[f64]>>(&self, points: &[P]) -> Result<BitPattern> {
        let mut active = vec![false; self.centers.len()];
        for (i, point) in points.iter().enumerate() {
            let point = point.as_ref();
            if point.len() != self.dim {
                return Err(Error::Encoding(format!(
                    "point {i} has dimension {}, expected {}",
                    point.len(),
                    self.dim
                )));
            }
            check_finite(point)?;
            active[self.nearest(point)] = true;
        }
        let mut out = Vec::with_capacity(self.output_len());
        for on in active {
            out.extend(std::iter::repeat_n(u8::from(on), self.bits_by_kernel));
        }
        Ok(BitPattern::new(out))
    }
}

impl Binarizer for KernelCanvas {
    /// Treats `input` as consecutive points of `dim` coordinates each.
    fn transform(&self, input: &[f64]) -> Result<BitPattern> {
        if !input.len().is_multiple_of(self.dim) {
            return Err(Error::Encoding(format!(
                "input length {} is not a multiple of dim {}",
                input.len(),
                self.dim
            )));
        }
        let points: Vec<&[f64]> = input.chunks(self.dim).collect();
        self.transform_points(&points)
    }
}
