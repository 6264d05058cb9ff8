//! JSON model documents.
//!
//! Every model and binarizer saves to one document:
//!
//! ```json
//! {"content":{...},"formatVersion":1,"mapping":[[0,3],[1,2]],"modelType":"wisard","params":{...}}
//! ```
//!
//! Keys are sorted at every level, RAM addresses are decimal strings, and
//! reals use the shortest representation that parses back to the same value,
//! so a given model state always produces the same bytes. `mapping` is `[]`
//! until a model has seen its first pattern. Per-type layouts are described
//! in `docs/model-format.md`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::cluswisard::{ClusConfig, ClusWisardModel};
use crate::encoding::{Binarizer, KernelCanvas, MeanThresholding, Thermometer, Thresholding};
use crate::error::{Error, LoadError, Result};
use crate::mapping::{address_capacity, TupleMapping};
use crate::ram::RamNode;
use crate::regression::{
    ClusRegressionConfig, ClusRegressionWisard, MeanKind, RegressionCell, RegressionConfig,
    RegressionDiscriminator, RegressionRamNode, RegressionWisard,
};
use crate::rng::SeededRng;
use crate::wisard::{Discriminator, WisardConfig, WisardModel};

/// A stored RAM object paired with its tuple.
type RamEntry<'v, 't> = (&'v Map<String, Value>, &'t Vec<usize>);

pub const FORMAT_VERSION: u64 = 1;

/// Any persistable model, as returned by [`load_model`].
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    Wisard(WisardModel),
    ClusWisard(ClusWisardModel),
    Regression(RegressionWisard),
    ClusRegression(ClusRegressionWisard),
    Thermometer(Thermometer),
    KernelCanvas(KernelCanvas),
    Thresholding(Thresholding),
    MeanThresholding(MeanThresholding),
}

impl AnyModel {
    /// The document's `modelType` tag.
    pub fn model_type(&self) -> &'static str {
        match self {
            AnyModel::Wisard(_) => "wisard",
            AnyModel::ClusWisard(_) => "cluswisard",
            AnyModel::Regression(_) => "regressionWisard",
            AnyModel::ClusRegression(_) => "clusRegressionWisard",
            AnyModel::Thermometer(_) => "thermometer",
            AnyModel::KernelCanvas(_) => "kernelCanvas",
            AnyModel::Thresholding(_) => "thresholding",
            AnyModel::MeanThresholding(_) => "meanThresholding",
        }
    }

    /// The encoder inside, when the document holds a binarizer.
    pub fn as_binarizer(&self) -> Option<&dyn Binarizer> {
        match self {
            AnyModel::Thermometer(b) => Some(b),
            AnyModel::KernelCanvas(b) => Some(b),
            AnyModel::Thresholding(b) => Some(b),
            AnyModel::MeanThresholding(b) => Some(b),
            _ => None,
        }
    }
}

macro_rules! any_model_from {
    ($($variant:ident($ty:ty)),* $(,)?) => {$(
        impl From<$ty> for AnyModel {
            fn from(m: $ty) -> Self {
                AnyModel::$variant(m)
            }
        }
    )*};
}

any_model_from!(
    Wisard(WisardModel),
    ClusWisard(ClusWisardModel),
    Regression(RegressionWisard),
    ClusRegression(ClusRegressionWisard),
    Thermometer(Thermometer),
    KernelCanvas(KernelCanvas),
    Thresholding(Thresholding),
    MeanThresholding(MeanThresholding),
);

/// Something that can be written as a model document.
pub trait Persist {
    fn model_type(&self) -> &'static str;
    fn params(&self) -> Value;
    fn mapping(&self) -> Option<&TupleMapping> {
        None
    }
    fn content(&self) -> Value {
        json!({})
    }

    fn to_document(&self) -> Value {
        let mapping = self
            .mapping()
            .map_or_else(|| json!([]), |m| json!(m.tuples()));
        canonical(json!({
            "formatVersion": FORMAT_VERSION,
            "modelType": self.model_type(),
            "params": self.params(),
            "mapping": mapping,
            "content": self.content(),
        }))
    }
}

/// Serializes a model to its canonical JSON text.
pub fn save_model<M: Persist + ?Sized>(model: &M) -> String {
    serde_json::to_string(&model.to_document()).expect("documents contain only finite values")
}

/// Rebuilds objects with keys inserted in sorted order, whatever map type
/// `serde_json` was compiled with.
fn canonical(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> =
                map.into_iter().map(|(k, v)| (k, canonical(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

fn rams_json(rams: &[RamNode]) -> Value {
    Value::Array(
        rams.iter()
            .map(|r| {
                let cells: Map<String, Value> = r
                    .sorted_cells()
                    .into_iter()
                    .map(|(a, c)| (a.to_string(), json!(c)))
                    .collect();
                Value::Object(cells)
            })
            .collect(),
    )
}

fn discriminator_json(d: &Discriminator) -> Value {
    json!({ "rams": rams_json(d.rams()), "trainedCount": d.trained_count() })
}

fn regression_json(d: &RegressionDiscriminator) -> Value {
    let rams: Vec<Value> = d
        .rams()
        .iter()
        .map(|r| {
            let cells: Map<String, Value> = r
                .sorted_cells()
                .into_iter()
                .map(|(a, c)| (a.to_string(), json!([c.counter, c.partial_sum])))
                .collect();
            Value::Object(cells)
        })
        .collect();
    json!({ "rams": rams, "trainedCount": d.trained_count() })
}

fn mean_params(params: &mut Value, mean: MeanKind) {
    params["mean"] = json!(mean.name());
    if let Some(p) = mean.power() {
        params["power"] = json!(p);
    }
}

impl Persist for WisardModel {
    fn model_type(&self) -> &'static str {
        "wisard"
    }

    fn params(&self) -> Value {
        let c = self.config();
        json!({
            "addressSize": c.address_size,
            "balanced": c.balanced,
            "base": c.base,
            "completeAddressSize": c.complete_address,
            "entrySize": self.entry_size(),
            "ignoreZero": c.ignore_zero,
            "initialBleach": c.initial_bleach,
            "rngState": self.rng().state(),
            "seed": c.seed,
        })
    }

    fn mapping(&self) -> Option<&TupleMapping> {
        WisardModel::mapping(self)
    }

    fn content(&self) -> Value {
        Value::Object(
            self.discriminators()
                .iter()
                .map(|(l, d)| (l.clone(), discriminator_json(d)))
                .collect(),
        )
    }
}

impl Persist for ClusWisardModel {
    fn model_type(&self) -> &'static str {
        "cluswisard"
    }

    fn params(&self) -> Value {
        let c = self.config();
        json!({
            "addressSize": c.address_size,
            "base": c.base,
            "completeAddressSize": c.complete_address,
            "discriminatorsLimit": c.discriminators_limit,
            "entrySize": self.mapping().map(TupleMapping::entry_size),
            "ignoreZero": c.ignore_zero,
            "initialBleach": c.initial_bleach,
            "minScore": c.min_score,
            "rngState": self.rng().state(),
            "seed": c.seed,
            "threshold": c.threshold,
        })
    }

    fn mapping(&self) -> Option<&TupleMapping> {
        ClusWisardModel::mapping(self)
    }

    fn content(&self) -> Value {
        Value::Object(
            self.clusters()
                .iter()
                .map(|(l, ds)| (l.clone(), ds.iter().map(discriminator_json).collect()))
                .collect(),
        )
    }
}

impl Persist for RegressionWisard {
    fn model_type(&self) -> &'static str {
        "regressionWisard"
    }

    fn params(&self) -> Value {
        let c = self.config();
        let mut params = json!({
            "addressSize": c.address_size,
            "base": c.base,
            "completeAddressSize": c.complete_address,
            "entrySize": self.mapping().map(TupleMapping::entry_size),
            "minOne": c.min_one,
            "minZero": c.min_zero,
            "seed": c.seed,
        });
        mean_params(&mut params, c.mean);
        params
    }

    fn mapping(&self) -> Option<&TupleMapping> {
        RegressionWisard::mapping(self)
    }

    fn content(&self) -> Value {
        self.predictor().map_or_else(|| json!({}), regression_json)
    }
}

impl Persist for ClusRegressionWisard {
    fn model_type(&self) -> &'static str {
        "clusRegressionWisard"
    }

    fn params(&self) -> Value {
        let c = self.config();
        let mut params = json!({
            "addressSize": c.address_size,
            "base": c.base,
            "completeAddressSize": c.complete_address,
            "entrySize": self.mapping().map(TupleMapping::entry_size),
            "limit": c.limit,
            "minOne": c.min_one,
            "minScore": c.min_score,
            "minZero": c.min_zero,
            "seed": c.seed,
            "threshold": c.threshold,
        });
        mean_params(&mut params, c.mean);
        params
    }

    fn mapping(&self) -> Option<&TupleMapping> {
        ClusRegressionWisard::mapping(self)
    }

    fn content(&self) -> Value {
        json!({ "predictors": self.predictors().iter().map(regression_json).collect::<Vec<_>>() })
    }
}

impl Persist for Thermometer {
    fn model_type(&self) -> &'static str {
        "thermometer"
    }

    fn params(&self) -> Value {
        json!({ "maximum": self.maximum(), "minimum": self.minimum(), "size": self.size() })
    }
}

impl Persist for KernelCanvas {
    fn model_type(&self) -> &'static str {
        "kernelCanvas"
    }

    fn params(&self) -> Value {
        json!({
            "bitsByKernel": self.bits_by_kernel(),
            "dim": self.dim(),
            "numKernels": self.num_kernels(),
            "seed": self.seed(),
        })
    }

    fn content(&self) -> Value {
        json!({ "centers": self.centers() })
    }
}

impl Persist for Thresholding {
    fn model_type(&self) -> &'static str {
        "thresholding"
    }

    fn params(&self) -> Value {
        json!({ "threshold": self.threshold })
    }
}

impl Persist for MeanThresholding {
    fn model_type(&self) -> &'static str {
        "meanThresholding"
    }

    fn params(&self) -> Value {
        json!({})
    }
}

impl Persist for AnyModel {
    fn model_type(&self) -> &'static str {
        AnyModel::model_type(self)
    }

    fn params(&self) -> Value {
        self.inner().params()
    }

    fn mapping(&self) -> Option<&TupleMapping> {
        self.inner().mapping()
    }

    fn content(&self) -> Value {
        self.inner().content()
    }
}

impl AnyModel {
    fn inner(&self) -> &dyn Persist {
        match self {
            AnyModel::Wisard(m) => m,
            AnyModel::ClusWisard(m) => m,
            AnyModel::Regression(m) => m,
            AnyModel::ClusRegression(m) => m,
            AnyModel::Thermometer(m) => m,
            AnyModel::KernelCanvas(m) => m,
            AnyModel::Thresholding(m) => m,
            AnyModel::MeanThresholding(m) => m,
        }
    }
}

// ---------------------------------------------------------------------------
// Loading

type LoadResult<T> = std::result::Result<T, LoadError>;

fn schema(msg: impl Into<String>) -> LoadError {
    LoadError::Schema(msg.into())
}

/// Typed access to one JSON object, with the path used in error messages.
struct Fields<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Fields<'a> {
    fn of(value: &'a Value, path: impl Into<String>) -> LoadResult<Self> {
        let path = path.into();
        match value {
            Value::Object(map) => Ok(Self { map, path }),
            _ => Err(schema(format!("{path} must be an object"))),
        }
    }

    fn field(&self, key: &str) -> LoadResult<&'a Value> {
        self.map
            .get(key)
            .ok_or_else(|| schema(format!("{}.{key} is missing", self.path)))
    }

    fn u64(&self, key: &str) -> LoadResult<u64> {
        self.field(key)?.as_u64().ok_or_else(|| {
            schema(format!(
                "{}.{key} must be a non-negative integer",
                self.path
            ))
        })
    }

    fn usize(&self, key: &str) -> LoadResult<usize> {
        usize::try_from(self.u64(key)?)
            .map_err(|_| schema(format!("{}.{key} too large", self.path)))
    }

    fn u32(&self, key: &str) -> LoadResult<u32> {
        u32::try_from(self.u64(key)?).map_err(|_| schema(format!("{}.{key} too large", self.path)))
    }

    fn opt_usize(&self, key: &str) -> LoadResult<Option<usize>> {
        match self.field(key)? {
            Value::Null => Ok(None),
            _ => self.usize(key).map(Some),
        }
    }

    fn f64(&self, key: &str) -> LoadResult<f64> {
        self.field(key)?
            .as_f64()
            .ok_or_else(|| schema(format!("{}.{key} must be a number", self.path)))
    }

    fn bool(&self, key: &str) -> LoadResult<bool> {
        self.field(key)?
            .as_bool()
            .ok_or_else(|| schema(format!("{}.{key} must be a boolean", self.path)))
    }

    fn str(&self, key: &str) -> LoadResult<&'a str> {
        self.field(key)?
            .as_str()
            .ok_or_else(|| schema(format!("{}.{key} must be a string", self.path)))
    }

    fn array(&self, key: &str) -> LoadResult<&'a Vec<Value>> {
        self.field(key)?
            .as_array()
            .ok_or_else(|| schema(format!("{}.{key} must be an array", self.path)))
    }

    fn rng_state(&self) -> LoadResult<SeededRng> {
        let words = self.array("rngState")?;
        let state: Vec<u64> = words
            .iter()
            .map(|w| w.as_u64())
            .collect::<Option<_>>()
            .ok_or_else(|| schema("rngState must hold unsigned integers"))?;
        let state: [u64; 4] = state
            .try_into()
            .map_err(|_| schema("rngState must hold exactly four words"))?;
        SeededRng::from_state(state).ok_or_else(|| schema("rngState must not be all zero"))
    }
}

fn config_err(e: Error) -> LoadError {
    match e {
        Error::Load(l) => l,
        other => schema(other.to_string()),
    }
}

fn counter(value: &Value, what: &str) -> LoadResult<u64> {
    match value {
        Value::Number(n) => {
            if let Some(c) = n.as_u64() {
                if c == 0 {
                    return Err(schema(format!(
                        "{what}: stored counters must be at least 1"
                    )));
                }
                Ok(c)
            } else if n.as_i64().is_some_and(|c| c < 0) || n.as_f64().is_some_and(|c| c < 0.0) {
                Err(LoadError::NegativeCounter(format!("{what}: {n}")))
            } else {
                Err(schema(format!(
                    "{what}: counter must be an integer, got {n}"
                )))
            }
        }
        other => Err(schema(format!(
            "{what}: counter must be a number, got {other}"
        ))),
    }
}

fn address(key: &str, capacity: u128) -> LoadResult<u64> {
    let canonical = !key.is_empty()
        && key.bytes().all(|b| b.is_ascii_digit())
        && (key == "0" || !key.starts_with('0'));
    if !canonical {
        return Err(schema(format!(
            "RAM address {key:?} is not a canonical decimal"
        )));
    }
    match key.parse::<u128>() {
        Ok(a) if a < capacity => Ok(a as u64),
        _ => Err(LoadError::AddressOutOfRange {
            address: key.to_owned(),
            capacity,
        }),
    }
}

/// Mapping, entry size and address capacity shared by a model's RAM nodes.
struct Layout {
    mapping: Option<TupleMapping>,
    base: u32,
    capacity: u128,
}

impl Layout {
    fn read(doc: &Fields, params: &Fields, address_size: usize, base: u32) -> LoadResult<Self> {
        crate::wisard::validate_tuple(address_size, base).map_err(config_err)?;
        let capacity = address_capacity(base, address_size).expect("validated above");
        let tuples: Vec<Vec<usize>> = serde_json::from_value(doc.field("mapping")?.clone())
            .map_err(|e| schema(format!("mapping must be an array of index arrays: {e}")))?;
        let entry_size = params.opt_usize("entrySize")?;
        let mapping = match (tuples.is_empty(), entry_size) {
            (true, None) => None,
            (false, Some(entry)) => {
                let m = TupleMapping::from_tuples(entry, tuples).map_err(config_err)?;
                if m.tuple_size() != address_size {
                    return Err(schema(format!(
                        "mapping tuples have {} positions but addressSize is {address_size}",
                        m.tuple_size()
                    )));
                }
                Some(m)
            }
            (true, Some(_)) => return Err(schema("entrySize is set but the mapping is empty")),
            (false, None) => return Err(schema("mapping is set but entrySize is null")),
        };
        Ok(Self {
            mapping,
            base,
            capacity,
        })
    }

    fn require_mapping(&self, what: &str) -> LoadResult<&TupleMapping> {
        self.mapping
            .as_ref()
            .ok_or_else(|| schema(format!("{what} present but the mapping is empty")))
    }

    fn ram_array<'v>(&self, rams: &'v Value, path: &str) -> LoadResult<Vec<RamEntry<'v, '_>>> {
        let mapping = self.require_mapping(path)?;
        let rams = rams
            .as_array()
            .ok_or_else(|| schema(format!("{path} must be an array")))?;
        if rams.len() != mapping.len() {
            return Err(schema(format!(
                "{path} has {} RAM nodes, mapping has {} tuples",
                rams.len(),
                mapping.len()
            )));
        }
        rams.iter()
            .zip(mapping.tuples())
            .enumerate()
            .map(|(i, (r, t))| {
                r.as_object()
                    .map(|m| (m, t))
                    .ok_or_else(|| schema(format!("{path}[{i}] must be an object")))
            })
            .collect()
    }

    fn discriminator(
        &self,
        value: &Value,
        path: &str,
        ignore_zero: bool,
    ) -> LoadResult<Discriminator> {
        let f = Fields::of(value, path)?;
        let trained = f.u64("trainedCount")?;
        let mut rams = Vec::new();
        for (i, (cells, tuple)) in self
            .ram_array(f.field("rams")?, &format!("{path}.rams"))?
            .into_iter()
            .enumerate()
        {
            let mut ram = RamNode::new(tuple.clone(), self.base, ignore_zero);
            for (key, v) in cells {
                let a = address(key, self.capacity)?;
                ram.set_counter(a, counter(v, &format!("{path}.rams[{i}].{key}"))?);
            }
            rams.push(ram);
        }
        let entry = self
            .mapping
            .as_ref()
            .expect("ram_array checked")
            .entry_size();
        Ok(Discriminator::from_parts(entry, rams, trained))
    }

    fn regression(&self, value: &Value, path: &str) -> LoadResult<RegressionDiscriminator> {
        let f = Fields::of(value, path)?;
        let trained = f.u64("trainedCount")?;
        let mut rams = Vec::new();
        for (i, (cells, tuple)) in self
            .ram_array(f.field("rams")?, &format!("{path}.rams"))?
            .into_iter()
            .enumerate()
        {
            let mut ram = RegressionRamNode::new(tuple.clone(), self.base);
            for (key, v) in cells {
                let what = format!("{path}.rams[{i}].{key}");
                let a = address(key, self.capacity)?;
                let pair = v
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| schema(format!("{what}: cell must be [counter, partialSum]")))?;
                let count = counter(&pair[0], &what)?;
                let sum = pair[1]
                    .as_f64()
                    .ok_or_else(|| schema(format!("{what}: partialSum must be a number")))?;
                ram.insert_cell(
                    a,
                    RegressionCell {
                        counter: count,
                        partial_sum: sum,
                    },
                );
            }
            rams.push(ram);
        }
        Ok(RegressionDiscriminator::from_parts(rams, trained))
    }
}

fn mean_kind(params: &Fields) -> LoadResult<MeanKind> {
    let name = params.str("mean")?;
    let power = match params.map.get("power") {
        Some(_) => Some(params.f64("power")?),
        None => None,
    };
    MeanKind::from_name(name, power).map_err(config_err)
}

fn load_wisard(doc: &Fields, params: &Fields) -> LoadResult<WisardModel> {
    let config = WisardConfig {
        address_size: params.usize("addressSize")?,
        base: params.u32("base")?,
        ignore_zero: params.bool("ignoreZero")?,
        balanced: params.bool("balanced")?,
        complete_address: params.bool("completeAddressSize")?,
        initial_bleach: params.u64("initialBleach")?,
        seed: params.u64("seed")?,
    };
    let layout = Layout::read(doc, params, config.address_size, config.base)?;
    let content = Fields::of(doc.field("content")?, "content")?;
    let mut discriminators = BTreeMap::new();
    for (label, d) in content.map {
        let d = layout.discriminator(d, &format!("content.{label}"), config.ignore_zero)?;
        discriminators.insert(label.clone(), d);
    }
    let rng = params.rng_state()?;
    WisardModel::new(config.clone()).map_err(config_err)?;
    Ok(WisardModel::from_parts(
        config,
        layout.mapping,
        discriminators,
        rng,
    ))
}

fn load_cluswisard(doc: &Fields, params: &Fields) -> LoadResult<ClusWisardModel> {
    let config = ClusConfig {
        address_size: params.usize("addressSize")?,
        min_score: params.f64("minScore")?,
        threshold: params.u64("threshold")?,
        discriminators_limit: params.usize("discriminatorsLimit")?,
        base: params.u32("base")?,
        ignore_zero: params.bool("ignoreZero")?,
        complete_address: params.bool("completeAddressSize")?,
        initial_bleach: params.u64("initialBleach")?,
        seed: params.u64("seed")?,
    };
    ClusWisardModel::new(config.clone()).map_err(config_err)?;
    let layout = Layout::read(doc, params, config.address_size, config.base)?;
    let content = Fields::of(doc.field("content")?, "content")?;
    let mut clusters = BTreeMap::new();
    for (label, ds) in content.map {
        let ds = ds
            .as_array()
            .filter(|ds| !ds.is_empty())
            .ok_or_else(|| schema(format!("content.{label} must be a non-empty array")))?;
        if ds.len() > config.discriminators_limit {
            return Err(schema(format!(
                "content.{label} has {} discriminators, limit is {}",
                ds.len(),
                config.discriminators_limit
            )));
        }
        let ds = ds
            .iter()
            .enumerate()
            .map(|(i, d)| {
                layout.discriminator(d, &format!("content.{label}[{i}]"), config.ignore_zero)
            })
            .collect::<LoadResult<Vec<_>>>()?;
        clusters.insert(label.clone(), ds);
    }
    let rng = params.rng_state()?;
    Ok(ClusWisardModel::from_parts(
        config,
        layout.mapping,
        clusters,
        rng,
    ))
}

fn load_regression(doc: &Fields, params: &Fields) -> LoadResult<RegressionWisard> {
    let config = RegressionConfig {
        address_size: params.usize("addressSize")?,
        mean: mean_kind(params)?,
        min_zero: params.usize("minZero")?,
        min_one: params.usize("minOne")?,
        base: params.u32("base")?,
        complete_address: params.bool("completeAddressSize")?,
        seed: params.u64("seed")?,
    };
    RegressionWisard::new(config.clone()).map_err(config_err)?;
    let layout = Layout::read(doc, params, config.address_size, config.base)?;
    let content = doc.field("content")?;
    let is_empty = Fields::of(content, "content")?.map.is_empty();
    let predictor = match (&layout.mapping, is_empty) {
        (None, true) => None,
        (Some(_), false) => Some(layout.regression(content, "content")?),
        (Some(_), true) => return Err(schema("content.rams is missing")),
        (None, false) => return Err(schema("content present but the mapping is empty")),
    };
    Ok(RegressionWisard::from_parts(
        config,
        layout.mapping,
        predictor,
    ))
}

fn load_clus_regression(doc: &Fields, params: &Fields) -> LoadResult<ClusRegressionWisard> {
    let config = ClusRegressionConfig {
        address_size: params.usize("addressSize")?,
        min_score: params.f64("minScore")?,
        threshold: params.u64("threshold")?,
        limit: params.usize("limit")?,
        mean: mean_kind(params)?,
        min_zero: params.usize("minZero")?,
        min_one: params.usize("minOne")?,
        base: params.u32("base")?,
        complete_address: params.bool("completeAddressSize")?,
        seed: params.u64("seed")?,
    };
    ClusRegressionWisard::new(config.clone()).map_err(config_err)?;
    let layout = Layout::read(doc, params, config.address_size, config.base)?;
    let content = Fields::of(doc.field("content")?, "content")?;
    let predictors = content
        .array("predictors")?
        .iter()
        .enumerate()
        .map(|(i, p)| layout.regression(p, &format!("content.predictors[{i}]")))
        .collect::<LoadResult<Vec<_>>>()?;
    if predictors.len() > config.limit {
        return Err(schema(format!(
            "{} predictors exceed the limit of {}",
            predictors.len(),
            config.limit
        )));
    }
    Ok(ClusRegressionWisard::from_parts(
        config,
        layout.mapping,
        predictors,
    ))
}

fn load_kernel_canvas(doc: &Fields, params: &Fields) -> LoadResult<KernelCanvas> {
    let (dim, num_kernels) = (params.usize("dim")?, params.usize("numKernels")?);
    let content = Fields::of(doc.field("content")?, "content")?;
    let centers: Vec<Vec<f64>> = serde_json::from_value(content.field("centers")?.clone())
        .map_err(|e| schema(format!("content.centers must be an array of points: {e}")))?;
    if centers.len() != num_kernels || centers.iter().any(|c| c.len() != dim) {
        return Err(schema(format!(
            "content.centers must hold {num_kernels} points of dimension {dim}"
        )));
    }
    KernelCanvas::with_centers(centers, params.usize("bitsByKernel")?, params.u64("seed")?)
        .map_err(config_err)
}

/// Parses a model document produced by [`save_model`] (or written by hand).
pub fn load_model(text: &str) -> Result<AnyModel> {
    let value: Value = serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    let doc = Fields::of(&value, "document")?;
    let version = doc.field("formatVersion")?;
    match version.as_u64() {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(LoadError::Version(v).into()),
        None => return Err(schema("formatVersion must be a non-negative integer").into()),
    }
    let model_type = doc.str("modelType")?;
    let params = Fields::of(doc.field("params")?, "params")?;
    let model = match model_type {
        "wisard" => AnyModel::Wisard(load_wisard(&doc, &params)?),
        "cluswisard" => AnyModel::ClusWisard(load_cluswisard(&doc, &params)?),
        "regressionWisard" => AnyModel::Regression(load_regression(&doc, &params)?),
        "clusRegressionWisard" => AnyModel::ClusRegression(load_clus_regression(&doc, &params)?),
        "thermometer" => AnyModel::Thermometer(
            Thermometer::new(
                params.usize("size")?,
                params.f64("minimum")?,
                params.f64("maximum")?,
            )
            .map_err(config_err)?,
        ),
        "kernelCanvas" => AnyModel::KernelCanvas(load_kernel_canvas(&doc, &params)?),
        "thresholding" => {
            AnyModel::Thresholding(Thresholding::new(params.f64("threshold")?).map_err(config_err)?)
        }
        "meanThresholding" => AnyModel::MeanThresholding(MeanThresholding),
        other => return Err(LoadError::UnknownType(other.to_owned()).into()),
    };
    Ok(model)
}
