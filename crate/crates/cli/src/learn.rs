//! `select`, `train` and `eval`: feature selection, model fitting and
//! evaluation on feature-matrix CSVs.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use rrkit::features::FeatureMatrix;
use rrkit::learn::{
    classification_metrics, cross_validate, fit, rmse, round_score, stratified_split, Dataset, LinearModel, ModelKind,
    SplitSpec, TrainingMeta,
};
use rrkit::stats::{pearson, qwk, select_features, spearman, zscore_fit_apply};
use serde::Serialize;

use crate::config::{require_file, usage, Settings};
use crate::{write_json, Status};

fn read_matrix(path: &Path) -> anyhow::Result<FeatureMatrix> {
    require_file(path, "matrix")?;
    let f = File::open(path)?;
    FeatureMatrix::read_csv(BufReader::new(f)).with_context(|| path.display().to_string())
}

fn write_matrix(m: &FeatureMatrix, path: &Path) -> anyhow::Result<()> {
    m.write_csv(BufWriter::new(File::create(path).with_context(|| path.display().to_string())?))?;
    Ok(())
}

/// Distinct labels in lexical order; every row must carry one.
fn label_set(m: &FeatureMatrix) -> anyhow::Result<Vec<String>> {
    let mut set = BTreeSet::new();
    for r in &m.rows {
        match &r.label {
            Some(l) => set.insert(l.clone()),
            None => return Err(usage(format!("row {} has no label", r.sample_id))),
        };
    }
    Ok(set.into_iter().collect())
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Feature matrix CSV with exactly two labels.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Welch t-test significance level.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output CSV holding the selected columns (raw values).
    #[arg(long, short)]
    pub out: PathBuf,
}

pub fn select(args: SelectArgs, settings: Settings) -> anyhow::Result<Status> {
    let alpha: f64 = settings.get(args.alpha, "alpha", 0.01)?;
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(usage(format!("alpha {alpha} is not inside (0, 1)")));
    }
    let m = read_matrix(&args.matrix)?;
    let labels = label_set(&m)?;
    if labels.len() != 2 {
        return Err(usage(format!("selection needs exactly two label groups, found {}", labels.len())));
    }
    let first: Vec<bool> = m.rows.iter().map(|r| r.label.as_deref() == Some(labels[0].as_str())).collect();
    let keep = select_features(&zscore_fit_apply(&m), &first, alpha);
    if keep.is_empty() {
        log::warn!("no feature passes alpha = {alpha}");
    }
    log::info!("selected {} of {} features", keep.len(), m.n_features());
    write_matrix(&m.select(&keep), &args.out)?;
    Ok(Status::Complete)
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Labelled feature matrix CSV.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Output model file.
    #[arg(long)]
    pub model: PathBuf,
    /// Fit a score regressor instead of a label classifier.
    #[arg(long)]
    pub score: bool,
    /// Fraction of rows used for training; the rest is held out.
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Cross-validation folds on the training rows.
    #[arg(long)]
    pub folds: Option<usize>,
    /// Seed for splits and folds (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Inverse regularization strength.
    #[arg(long)]
    pub c: Option<f64>,
    /// Write the held-out rows here for `eval`.
    #[arg(long)]
    pub test_out: Option<PathBuf>,
    /// Write the cross-validation report here (JSON).
    #[arg(long)]
    pub metrics: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct TrainReport {
    kind: ModelKind,
    train_rows: usize,
    test_rows: usize,
    features: usize,
    seed: u64,
    cv: rrkit::learn::CvReport,
}

fn kind(score: bool) -> ModelKind {
    if score {
        ModelKind::Regressor
    } else {
        ModelKind::Classifier
    }
}

pub fn train(args: TrainArgs, settings: Settings) -> anyhow::Result<Status> {
    let d = SplitSpec::default();
    let spec = SplitSpec {
        train_fraction: settings.get(args.train_fraction, "train_fraction", d.train_fraction)?,
        folds: settings.get(args.folds, "folds", d.folds)?,
        seed: settings.get(args.seed, "seed", d.seed)?,
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let meta = TrainingMeta {
        c: settings.get(args.c, "c", TrainingMeta::default().c)?,
        ..TrainingMeta::default()
    };
    let kind = kind(settings.get(Some(args.score).filter(|s| *s), "score", false)?);

    let m = read_matrix(&args.matrix)?;
    label_set(&m)?;
    let data = Dataset::from_matrix(&m)?;
    let (train_rows, test_rows) = stratified_split(&data.labels, &spec)?;
    let train = data.subset(&train_rows);
    let cv = cross_validate(&train, kind, meta, &spec)?;
    let model = fit(&train, kind, meta)?;
    std::fs::write(&args.model, model.save()).with_context(|| args.model.display().to_string())?;

    if let Some(path) = &args.test_out {
        let mut rows: Vec<usize> = test_rows.clone();
        rows.sort_unstable();
        let held = FeatureMatrix {
            feature_names: m.feature_names.clone(),
            rows: rows.iter().map(|&i| m.rows[i].clone()).collect(),
        };
        write_matrix(&held, path)?;
    }
    let report = TrainReport {
        kind,
        train_rows: train_rows.len(),
        test_rows: test_rows.len(),
        features: data.n_features(),
        seed: spec.seed,
        cv,
    };
    match &args.metrics {
        Some(p) => write_json(&report, Some(p))?,
        None => log::info!("mean CV metric {:.4}", report.cv.mean_metric),
    }
    Ok(Status::Complete)
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Labelled rows to evaluate on.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Lowest and highest score on the rating scale (regressors).
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
    pub scale: Option<Vec<i64>>,
    /// Metrics JSON output; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum EvalReport {
    Classifier {
        kind: ModelKind,
        n: usize,
        c_rate: f64,
        uar: f64,
    },
    Regressor {
        kind: ModelKind,
        n: usize,
        rmse: f64,
        qwk: Option<f64>,
        pearson: Option<f64>,
        spearman: Option<f64>,
    },
}

pub fn eval(args: EvalArgs, settings: Settings) -> anyhow::Result<Status> {
    require_file(&args.model, "model")?;
    let model = LinearModel::load(&std::fs::read_to_string(&args.model)?)?;
    let m = read_matrix(&args.matrix)?;
    label_set(&m)?;
    let x = Dataset::features_for(&model, &m)?;
    let truth: Vec<String> = m.rows.iter().map(|r| r.label.clone().unwrap_or_default()).collect();
    let report = match model.kind {
        ModelKind::Classifier => {
            let pred: Vec<String> = x.iter().map(|r| model.predict_label(r)).collect();
            let cm = classification_metrics(&pred, &truth)?;
            EvalReport::Classifier {
                kind: model.kind,
                n: truth.len(),
                c_rate: cm.c_rate,
                uar: cm.uar,
            }
        }
        ModelKind::Regressor => {
            let y: Vec<f64> = truth
                .iter()
                .map(|l| l.parse::<f64>().map_err(|_| usage(format!("label `{l}` is not a score"))))
                .collect::<anyhow::Result<_>>()?;
            let pred: Vec<f64> = x.iter().map(|r| model.predict_value(r)).collect();
            let scale = match settings.get_opt(args.scale.map(|v| format!("{},{}", v[0], v[1])), "scale")? {
                Some(s) => parse_scale(&s)?,
                None => (y.iter().copied().fold(f64::INFINITY, f64::min).round() as i64, y.iter().copied().fold(f64::NEG_INFINITY, f64::max).round() as i64),
            };
            EvalReport::Regressor {
                kind: model.kind,
                n: y.len(),
                rmse: rmse(&pred, &y)?,
                qwk: scaled_qwk(&pred, &y, scale),
                pearson: pearson(&pred, &y).ok(),
                spearman: spearman(&pred, &y).ok(),
            }
        }
    };
    write_json(&report, args.out.as_deref())?;
    Ok(Status::Complete)
}

fn parse_scale(s: &str) -> anyhow::Result<(i64, i64)> {
    let bad = || usage(format!("scale `{s}` must be MIN,MAX with MIN < MAX"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a < b {
        Ok((a, b))
    } else {
        Err(bad())
    }
}

/// QWK of rounded predictions against rounded truth on `min..=max`.
pub fn scaled_qwk(pred: &[f64], truth: &[f64], (min, max): (i64, i64)) -> Option<f64> {
    if max <= min {
        return None;
    }
    let cat = |v: f64| (round_score(v, min, max) - min + 1) as u32;
    let a: Vec<u32> = pred.iter().map(|&v| cat(v)).collect();
    let b: Vec<u32> = truth.iter().map(|&v| cat(v)).collect();
    qwk(&a, &b, (max - min + 1) as u32).ok()
}
