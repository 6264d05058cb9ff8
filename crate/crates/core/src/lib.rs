//! Weightless neural networks of the WiSARD family.
//!
//! Patterns are slices of small digits (bits in the default base 2). A
//! [`TupleMapping`] splits the retina into tuples, each feeding a sparse
//! counter [`RamNode`]. On top of that sit the classifiers ([`WisardModel`],
//! [`ClusWisardModel`]), the regressors ([`RegressionWisard`],
//! [`ClusRegressionWisard`]), the binarizers in [`encoding`], and the JSON
//! document format in [`persistence`].
//!
//! ```
//! use ramnet_core::{WisardConfig, WisardModel};
//!
//! let mut model = WisardModel::new(WisardConfig::new(2)).unwrap();
//! model.train(&[1, 1, 0, 0], "A").unwrap();
//! model.train(&[0, 0, 1, 1], "B").unwrap();
//! assert_eq!(model.classify(&[1, 1, 0, 0]).unwrap().label, "A");
//! ```

mod bleaching;
pub mod cluswisard;
pub mod encoding;
pub mod error;
pub mod mapping;
pub mod model;
mod pattern;
pub mod persistence;
pub mod ram;
pub mod regression;
pub mod rng;
pub mod wisard;

pub use cluswisard::{acceptance_threshold, ClusConfig, ClusWisardModel, DiscriminatorId};
pub use encoding::{Binarizer, KernelCanvas, MeanThresholding, Thermometer, Thresholding};
pub use error::{Error, LoadError, Result};
pub use mapping::{encode_address, Address, TupleMapping};
pub use model::{
    Classification, ClassificationModel, LabelScore, RegressionModel, ScoreTable, SizeReport,
};
pub use pattern::BitPattern;
pub use persistence::{load_model, save_model, AnyModel};
pub use ram::RamNode;
pub use regression::{
    apply_mean, ClusRegressionConfig, ClusRegressionWisard, MeanKind, RegressionConfig,
    RegressionWisard,
};
pub use rng::SeededRng;
pub use wisard::{Discriminator, WisardConfig, WisardModel};
