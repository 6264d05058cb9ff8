use std::io::Write;

use clap::ValueEnum;
use ramnet_core::{
    load_model, save_model, AnyModel, ClusConfig, ClusRegressionConfig, ClusRegressionWisard,
    ClusWisardModel, Error, KernelCanvas, MeanKind, MeanThresholding, RegressionConfig,
    RegressionWisard, Thermometer, Thresholding, WisardConfig, WisardModel,
};

use crate::data::{self, ColumnSpec, Row};
use crate::failure::{CliResult, Failure, Outcome};
use crate::{BinarizeArgs, EncoderKind, EvalArgs, Metric, ModelKind, PredictArgs, TrainArgs};

fn need<T>(value: Option<T>, flag: &str, encoder: &str) -> CliResult<T> {
    value.ok_or_else(|| Failure::usage(format!("--{flag} is required by the {encoder} encoder")))
}

fn build_encoder(args: &BinarizeArgs) -> CliResult<AnyModel> {
    if let Some(path) = &args.encoder_file {
        let model = load_model(&data::read_to_string(path)?)?;
        if model.as_binarizer().is_none() {
            return Err(Failure::usage(format!(
                "{} holds a {} model, not an encoder",
                path.display(),
                model.model_type()
            )));
        }
        return Ok(model);
    }
    let kind = args
        .encoder
        .expect("clap requires --encoder without --encoder-file");
    Ok(match kind {
        EncoderKind::Threshold => Thresholding::new(args.threshold)?.into(),
        EncoderKind::MeanThreshold => MeanThresholding.into(),
        EncoderKind::Thermometer => Thermometer::new(
            need(args.size, "size", "thermometer")?,
            need(args.min, "min", "thermometer")?,
            need(args.max, "max", "thermometer")?,
        )?
        .into(),
        EncoderKind::KernelCanvas => KernelCanvas::new(
            need(args.dim, "dim", "kernel-canvas")?,
            need(args.kernels, "kernels", "kernel-canvas")?,
            args.bits_by_kernel,
            args.seed,
        )?
        .into(),
    })
}

fn single_column(
    spec: &str,
    flag: &str,
    header: Option<&csv::StringRecord>,
    width: usize,
) -> CliResult<usize> {
    match ColumnSpec::parse(spec)?.resolve(header, width)?.as_slice() {
        [i] => Ok(*i),
        _ => Err(Failure::usage(format!(
            "--{flag} must name exactly one column"
        ))),
    }
}

struct Columns {
    features: Vec<usize>,
    label: Option<usize>,
    target: Option<usize>,
}

impl Columns {
    fn resolve(
        args: &BinarizeArgs,
        header: Option<&csv::StringRecord>,
        width: usize,
    ) -> CliResult<Self> {
        let label = args
            .label
            .as_deref()
            .map(|s| single_column(s, "label", header, width))
            .transpose()?;
        let target = args
            .target
            .as_deref()
            .map(|s| single_column(s, "target", header, width))
            .transpose()?;
        let features = match &args.features {
            Some(spec) => ColumnSpec::parse(spec)?.resolve(header, width)?,
            None => (0..width)
                .filter(|&i| Some(i) != label && Some(i) != target)
                .collect(),
        };
        Ok(Columns {
            features,
            label,
            target,
        })
    }
}

pub fn binarize(args: &BinarizeArgs) -> CliResult<Outcome> {
    if let Some(spec) = &args.features {
        ColumnSpec::parse(spec)?;
    }
    let encoder = build_encoder(args)?;
    let binarizer = encoder.as_binarizer().expect("encoder checked above");
    if let Some(path) = &args.save_encoder {
        let mut out = data::writer(Some(path))?;
        writeln!(out, "{}", save_model(&encoder))?;
        out.flush()?;
    }

    let mut csv = csv::ReaderBuilder::new()
        .has_headers(args.header)
        .trim(csv::Trim::All)
        .from_reader(data::reader(args.input.as_deref())?);
    let header = if args.header {
        Some(csv.headers()?.clone())
    } else {
        None
    };
    let mut out = data::writer(args.out.as_deref())?;
    let mut columns: Option<Columns> = None;
    for (i, record) in csv.records().enumerate() {
        let record = record?;
        let line = i + 1 + usize::from(args.header);
        let cols = match &columns {
            Some(c) => c,
            None => columns.insert(Columns::resolve(args, header.as_ref(), record.len())?),
        };
        let field = |c: usize| {
            record
                .get(c)
                .ok_or_else(|| Failure::usage(format!("line {line}: missing column {c}")))
        };
        let mut values = Vec::with_capacity(cols.features.len());
        for &c in &cols.features {
            let text = field(c)?;
            values.push(text.parse::<f64>().map_err(|_| {
                Failure::usage(format!("line {line}: column {c} is not a number: {text:?}"))
            })?);
        }
        let bits = binarizer
            .transform(&values)
            .map_err(|e| Failure::usage(format!("line {line}: {e}")))?;
        let label = cols
            .label
            .map(|c| field(c).map(str::to_string))
            .transpose()?;
        let target = match cols.target {
            Some(c) => {
                let text = field(c)?;
                Some(text.parse::<f64>().map_err(|_| {
                    Failure::usage(format!("line {line}: target {text:?} is not a number"))
                })?)
            }
            None => None,
        };
        data::write_row(
            &mut out,
            &Row {
                bits: bits.into_inner(),
                label,
                target,
            },
        )?;
    }
    out.flush()?;
    Ok(Outcome::Clean)
}

fn mean_kind(args: &TrainArgs) -> CliResult<MeanKind> {
    Ok(MeanKind::from_name(&args.mean, args.power)?)
}

fn new_model(args: &TrainArgs) -> CliResult<AnyModel> {
    let n = args.tuple_size;
    Ok(match args.model {
        ModelKind::Wisard => WisardModel::new(WisardConfig {
            address_size: n,
            base: args.base,
            ignore_zero: args.ignore_zero,
            balanced: args.balanced,
            complete_address: args.complete_address,
            initial_bleach: args.bleaching,
            seed: args.seed,
        })?
        .into(),
        ModelKind::Clus => ClusWisardModel::new(ClusConfig {
            base: args.base,
            ignore_zero: args.ignore_zero,
            complete_address: args.complete_address,
            initial_bleach: args.bleaching,
            seed: args.seed,
            ..ClusConfig::new(n, args.min_score, args.threshold, args.limit)
        })?
        .into(),
        ModelKind::Rew => RegressionWisard::new(RegressionConfig {
            address_size: n,
            mean: mean_kind(args)?,
            min_zero: args.min_zero,
            min_one: args.min_one,
            base: args.base,
            complete_address: args.complete_address,
            seed: args.seed,
        })?
        .into(),
        ModelKind::Crew => ClusRegressionWisard::new(ClusRegressionConfig {
            mean: mean_kind(args)?,
            min_zero: args.min_zero,
            min_one: args.min_one,
            base: args.base,
            complete_address: args.complete_address,
            seed: args.seed,
            ..ClusRegressionConfig::new(n, args.min_score, args.threshold, args.limit)
        })?
        .into(),
    })
}

fn missing(line: usize, what: &str, model: &AnyModel) -> Failure {
    Failure::usage(format!(
        "row {line}: a {} model needs a {what}",
        model.model_type()
    ))
}

fn train_row(model: &mut AnyModel, row: &Row, line: usize) -> CliResult<()> {
    let bits = &row.bits;
    let result = match (&mut *model, row.label.as_deref(), row.target) {
        (AnyModel::Wisard(m), Some(label), _) => m.train(bits, label),
        (AnyModel::ClusWisard(m), Some(label), _) => m.train(bits, label),
        (AnyModel::ClusWisard(m), None, _) => m.train_unsupervised(bits).map(|_| ()),
        (AnyModel::Regression(m), _, Some(y)) => m.train(bits, y),
        (AnyModel::ClusRegression(m), _, Some(y)) => m.train(bits, y),
        (AnyModel::Wisard(_), None, _) => return Err(missing(line, "label", model)),
        _ => return Err(missing(line, "target", model)),
    };
    result.map_err(|e| Failure::usage(format!("row {line}: {e}")))
}

pub fn train(args: &TrainArgs) -> CliResult<Outcome> {
    let mut model = new_model(args)?;
    let rows = data::read_rows(data::reader(args.input.as_deref())?)?;
    for (i, row) in rows.iter().enumerate() {
        train_row(&mut model, row, i + 1)?;
    }
    let mut out = data::writer(args.out.as_deref())?;
    writeln!(out, "{}", save_model(&model))?;
    out.flush()?;
    Ok(Outcome::Clean)
}

/// What a model says about one row.
enum Answer {
    Label(String),
    Value(f64),
    /// A regression model read no trained cell.
    Unknown,
}

fn answer(model: &mut AnyModel, bits: &[u8], line: usize) -> CliResult<Answer> {
    let at_row = |e: Error| Failure::usage(format!("row {line}: {e}"));
    let regression = |r: ramnet_core::Result<f64>| match r {
        Ok(v) => Ok(Answer::Value(v)),
        Err(Error::NoInformation) => Ok(Answer::Unknown),
        Err(e) => Err(at_row(e)),
    };
    match model {
        AnyModel::Wisard(m) => m
            .classify(bits)
            .map(|c| Answer::Label(c.label))
            .map_err(at_row),
        AnyModel::ClusWisard(m) => m
            .classify(bits)
            .map(|c| Answer::Label(c.label))
            .map_err(at_row),
        AnyModel::Regression(m) => regression(m.predict(bits)),
        AnyModel::ClusRegression(m) => regression(m.predict(bits)),
        other => Err(Failure::usage(format!(
            "a {} document cannot make predictions",
            other.model_type()
        ))),
    }
}

fn is_classifier(model: &AnyModel) -> bool {
    matches!(model, AnyModel::Wisard(_) | AnyModel::ClusWisard(_))
}

fn load(path: &std::path::Path) -> CliResult<AnyModel> {
    load_model(&data::read_to_string(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn warn_unanswered(count: usize) -> Outcome {
    if count == 0 {
        Outcome::Clean
    } else {
        eprintln!("ramnet: warning: {count} rows had no information and were not predicted");
        Outcome::Warnings
    }
}

fn metric_name(metric: Metric) -> String {
    metric
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

pub fn eval(args: &EvalArgs) -> CliResult<Outcome> {
    let mut model = load(&args.model)?;
    let rows = data::read_rows(data::reader(args.input.as_deref())?)?;
    let classifier = is_classifier(&model);
    if classifier != (args.metric == Metric::Accuracy) {
        return Err(Failure::usage(format!(
            "metric {} does not apply to a {} model",
            metric_name(args.metric),
            model.model_type()
        )));
    }
    let (mut total, mut count, mut unanswered) = (0.0, 0usize, 0usize);
    for (i, row) in rows.iter().enumerate() {
        let line = i + 1;
        match (answer(&mut model, &row.bits, line)?, classifier) {
            (Answer::Label(label), true) => {
                let want = row
                    .label
                    .as_deref()
                    .ok_or_else(|| missing(line, "label", &model))?;
                total += f64::from(u8::from(label == want));
                count += 1;
            }
            (answer, false) => {
                let want = row.target.ok_or_else(|| missing(line, "target", &model))?;
                match answer {
                    Answer::Value(v) => {
                        let err = v - want;
                        total += if args.metric == Metric::Mae {
                            err.abs()
                        } else {
                            err * err
                        };
                        count += 1;
                    }
                    _ => unanswered += 1,
                }
            }
            _ => unreachable!("classifiers answer with labels"),
        }
    }
    if count == 0 {
        return Err(Failure::usage("no rows to evaluate"));
    }
    println!("{} {}", metric_name(args.metric), total / count as f64);
    Ok(warn_unanswered(unanswered))
}

pub fn predict(args: &PredictArgs) -> CliResult<Outcome> {
    let mut model = load(&args.model)?;
    let rows = data::read_rows(data::reader(args.input.as_deref())?)?;
    let mut out = data::writer(args.out.as_deref())?;
    let mut unanswered = 0;
    for (i, row) in rows.iter().enumerate() {
        match answer(&mut model, &row.bits, i + 1)? {
            Answer::Label(label) => writeln!(out, "{label}")?,
            Answer::Value(v) => writeln!(out, "{v}")?,
            Answer::Unknown => {
                unanswered += 1;
                writeln!(out, "NA")?;
            }
        }
    }
    out.flush()?;
    Ok(warn_unanswered(unanswered))
}
