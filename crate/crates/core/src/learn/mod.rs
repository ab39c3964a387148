//! Splitting, cross-validation, linear reference models and metrics.

mod model;
mod split;

pub use model::{train_classifier, train_regressor, LinearModel, ModelKind, TrainingMeta};
pub use split::{stratified_folds, stratified_split, SplitSpec};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::features::FeatureMatrix;
use crate::stats::ZScore;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearnError {
    #[error("too few samples: {0}")]
    TooFewSamples(String),
    #[error("classifier needs exactly 2 classes, found {0}")]
    NonBinaryLabels(usize),
    #[error("invalid split: {0}")]
    InvalidSpec(String),
    #[error("row `{0}` has no label")]
    MissingLabel(String),
    #[error("label `{0}` is not a number")]
    NonNumericTarget(String),
    #[error("normal equations are singular")]
    Singular,
    #[error("empty input")]
    EmptyInput,
    #[error("predictions and truth differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("model expects feature `{0}`, which the data lacks")]
    FeatureMismatch(String),
}

pub type Result<T> = std::result::Result<T, LearnError>;

/// Dense, fully labelled training data.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub sample_ids: Vec<String>,
    pub x: Vec<Vec<f64>>,
    pub labels: Vec<String>,
}

impl Dataset {
    /// Requires every row to be labelled; missing cells take the column
    /// mean.
    pub fn from_matrix(matrix: &FeatureMatrix) -> Result<Self> {
        let mut m = matrix.clone();
        m.impute_all();
        let labels = m
            .rows
            .iter()
            .map(|r| r.label.clone().ok_or_else(|| LearnError::MissingLabel(r.sample_id.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            feature_names: m.feature_names.clone(),
            sample_ids: m.rows.iter().map(|r| r.sample_id.clone()).collect(),
            x: m.dense(),
            labels,
        })
    }

    /// Rows of `matrix` arranged in this dataset's feature order, for
    /// applying a trained model to new data.
    pub fn features_for(model: &LinearModel, matrix: &FeatureMatrix) -> Result<Vec<Vec<f64>>> {
        let idx = model
            .feature_names
            .iter()
            .map(|n| matrix.column_index(n).ok_or_else(|| LearnError::FeatureMismatch(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut m = matrix.select(&idx);
        m.impute_all();
        Ok(m.dense())
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn targets(&self) -> Result<Vec<f64>> {
        self.labels
            .iter()
            .map(|l| l.trim().parse::<f64>().map_err(|_| LearnError::NonNumericTarget(l.clone())))
            .collect()
    }

    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            sample_ids: rows.iter().map(|&i| self.sample_ids[i].clone()).collect(),
            x: rows.iter().map(|&i| self.x[i].clone()).collect(),
            labels: rows.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    fn as_matrix(&self) -> FeatureMatrix {
        FeatureMatrix {
            feature_names: self.feature_names.clone(),
            rows: self
                .x
                .iter()
                .zip(&self.sample_ids)
                .map(|(r, id)| crate::features::FeatureRow {
                    sample_id: id.clone(),
                    label: None,
                    values: r.iter().copied().map(Some).collect(),
                })
                .collect(),
        }
    }
}

/// Fits a z-score front-end on `data`, then the model of the given kind on
/// the standardized rows. The scaler travels with the model.
pub fn fit(data: &Dataset, kind: ModelKind, meta: TrainingMeta) -> Result<LinearModel> {
    let scaler = ZScore::fit(&data.as_matrix());
    let standardized = Dataset {
        x: scaler.apply(&data.as_matrix()).dense(),
        ..data.clone()
    };
    let mut model = match kind {
        ModelKind::Classifier => train_classifier(&standardized, meta)?,
        ModelKind::Regressor => train_regressor(&standardized, meta)?,
    };
    model.scaler = Some(scaler);
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationMetrics {
    pub c_rate: f64,
    pub uar: f64,
}

/// Accuracy and unweighted average recall. Classes that never occur in
/// `truth` have no recall and are left out of the UAR mean.
pub fn classification_metrics(pred: &[String], truth: &[String]) -> Result<ClassificationMetrics> {
    if pred.len() != truth.len() {
        return Err(LearnError::LengthMismatch(pred.len(), truth.len()));
    }
    if truth.is_empty() {
        return Err(LearnError::EmptyInput);
    }
    let mut per_class: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut correct = 0;
    for (p, t) in pred.iter().zip(truth) {
        let e = per_class.entry(t).or_default();
        e.1 += 1;
        if p == t {
            e.0 += 1;
            correct += 1;
        }
    }
    let uar = per_class.values().map(|&(hit, n)| hit as f64 / n as f64).sum::<f64>() / per_class.len() as f64;
    Ok(ClassificationMetrics {
        c_rate: correct as f64 / truth.len() as f64,
        uar,
    })
}

pub fn rmse(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(LearnError::LengthMismatch(pred.len(), truth.len()));
    }
    if truth.is_empty() {
        return Err(LearnError::EmptyInput);
    }
    let sse: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t).powi(2)).sum();
    Ok((sse / truth.len() as f64).sqrt())
}

/// Nearest integer score (halves away from zero), clamped to the scale.
pub fn round_score(value: f64, min: i64, max: i64) -> i64 {
    (value.round() as i64).clamp(min, max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rmse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub kind: ModelKind,
    pub folds: Vec<FoldResult>,
    /// Mean accuracy (classifier) or mean RMSE (regressor).
    pub mean_metric: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_uar: Option<f64>,
}

/// Stratified k-fold cross-validation of [`fit`]. Regression targets are
/// stratified by their label text.
pub fn cross_validate(data: &Dataset, kind: ModelKind, meta: TrainingMeta, spec: &SplitSpec) -> Result<CvReport> {
    spec.validate()?;
    let folds = stratified_folds(&data.labels, spec.folds, spec.seed)?;
    let mut results = Vec::with_capacity(folds.len());
    for (k, test_rows) in folds.iter().enumerate() {
        let train_rows: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        let (train, test) = (data.subset(&train_rows), data.subset(test_rows));
        let model = fit(&train, kind, meta)?;
        let mut result = FoldResult {
            fold: k,
            train_rows: train.len(),
            test_rows: test.len(),
            classification: None,
            rmse: None,
        };
        match kind {
            ModelKind::Classifier => {
                let pred: Vec<String> = test.x.iter().map(|r| model.predict_label(r)).collect();
                result.classification = Some(classification_metrics(&pred, &test.labels)?);
            }
            ModelKind::Regressor => {
                let pred: Vec<f64> = test.x.iter().map(|r| model.predict_value(r)).collect();
                result.rmse = Some(rmse(&pred, &test.targets()?)?);
            }
        }
        results.push(result);
    }
    let n = results.len() as f64;
    let (mean_metric, mean_uar) = match kind {
        ModelKind::Classifier => {
            let m: Vec<ClassificationMetrics> = results.iter().filter_map(|r| r.classification).collect();
            (
                m.iter().map(|c| c.c_rate).sum::<f64>() / n,
                Some(m.iter().map(|c| c.uar).sum::<f64>() / n),
            )
        }
        ModelKind::Regressor => (results.iter().filter_map(|r| r.rmse).sum::<f64>() / n, None),
    };
    Ok(CvReport {
        kind,
        folds: results,
        mean_metric,
        mean_uar,
    })
}
