//! RAM-based regression: a single predictor whose cells hold an access
//! counter and a partial sum of targets, and a clustered variant that routes
//! each query to its best-matching predictor.

mod crew;
mod mean;
mod ram;
mod rew;

pub use crew::{ClusRegressionConfig, ClusRegressionWisard};
pub use mean::{apply_mean, MeanKind, DEFAULT_POWER};
pub use ram::{RegressionCell, RegressionRamNode};
pub use rew::{RegressionConfig, RegressionDiscriminator, RegressionWisard};
