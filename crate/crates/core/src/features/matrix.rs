use std::collections::HashSet;
use std::io::{Read, Write};

use serde::Serialize;

use super::{
    classify_saccades, fixation_features, regression_features, saccade_features, visits_by_aoi, Direction, FeatureError,
    FIXATION_FEATURES, REGRESSION_FEATURES, SACCADE_FEATURES,
};
use crate::clean::CleanedTrace;
use crate::corpus::{AoiLayout, AoiLevel};
use crate::scalar::{mean, population_variance};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub sample_id: String,
    pub label: Option<String>,
    pub values: Vec<Option<f64>>,
}

/// Samples by named feature columns; `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureMatrix {
    pub fn new(feature_names: Vec<String>, rows: Vec<FeatureRow>) -> Result<Self, FeatureError> {
        let mut seen = HashSet::new();
        if let Some(dup) = feature_names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(FeatureError::Matrix(format!("duplicate feature name `{dup}`")));
        }
        if let Some(r) = rows.iter().find(|r| r.values.len() != feature_names.len()) {
            return Err(FeatureError::Matrix(format!(
                "row `{}` has {} values for {} features",
                r.sample_id,
                r.values.len(),
                feature_names.len()
            )));
        }
        Ok(FeatureMatrix { feature_names, rows })
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.values[j]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    /// Keeps the given columns, in the given order.
    pub fn select(&self, columns: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            feature_names: columns.iter().map(|&j| self.feature_names[j].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| FeatureRow {
                    sample_id: r.sample_id.clone(),
                    label: r.label.clone(),
                    values: columns.iter().map(|&j| r.values[j]).collect(),
                })
                .collect(),
        }
    }

    /// Keeps the named columns; unknown names are an error.
    pub fn select_named(&self, names: &[String]) -> Result<FeatureMatrix, FeatureError> {
        let idx = names
            .iter()
            .map(|n| {
                self.column_index(n)
                    .ok_or_else(|| FeatureError::Matrix(format!("no feature named `{n}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.select(&idx))
    }

    /// Fills missing cells of column `j` with the mean of its present cells,
    /// or 0 when none are present.
    pub fn impute_column_mean(&mut self, j: usize) {
        let present: Vec<f64> = self.rows.iter().filter_map(|r| r.values[j]).collect();
        let fill = mean(&present).unwrap_or(0.0);
        for r in &mut self.rows {
            r.values[j].get_or_insert(fill);
        }
    }

    pub fn impute_all(&mut self) {
        for j in 0..self.n_features() {
            self.impute_column_mean(j);
        }
    }

    /// Row-major values with missing cells as NaN.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.values.iter().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect()
    }

    pub fn labels(&self) -> Vec<Option<String>> {
        self.rows.iter().map(|r| r.label.clone()).collect()
    }

    /// CSV with header `sample_id,label,<features...>`; missing cells and
    /// absent labels are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), FeatureError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["sample_id".to_string(), "label".to_string()];
        header.extend(self.feature_names.iter().cloned());
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.sample_id.clone(), r.label.clone().unwrap_or_default()];
            rec.extend(r.values.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<FeatureMatrix, FeatureError> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 2 || &header[0] != "sample_id" || &header[1] != "label" {
            return Err(FeatureError::Matrix("header must start with sample_id,label".into()));
        }
        let names: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let values = rec
                .iter()
                .skip(2)
                .map(|c| {
                    let c = c.trim();
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|_| FeatureError::Matrix(format!("row {}: `{c}` is not a number", i + 2)))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let label = Some(rec[1].trim().to_string()).filter(|l| !l.is_empty());
            rows.push(FeatureRow {
                sample_id: rec[0].to_string(),
                label,
                values,
            });
        }
        FeatureMatrix::new(names, rows)
    }
}

/// Column names for a layout, in extraction order: levels from word to
/// whole text, AoIs in layout order, features in their fixed order.
pub fn feature_names(layout: &AoiLayout) -> Vec<String> {
    let mut names = Vec::new();
    for level in AoiLevel::ALL {
        for aoi in 0..layout.spans(level).len() {
            let mut push = |set: &[&str]| names.extend(set.iter().map(|f| format!("{level}:{aoi}:{f}")));
            push(&FIXATION_FEATURES);
            if level != AoiLevel::Word {
                push(&SACCADE_FEATURES);
                push(&REGRESSION_FEATURES);
            }
        }
    }
    names
}

fn sample_id(cleaned: &CleanedTrace) -> String {
    let t = &cleaned.trace;
    format!("{}_s{}_d{}", t.participant_id, t.session, t.day)
}

/// Feature values of one cleaned trace, aligned with [`feature_names`].
/// rSR is left missing where an AoI has no regressions.
pub fn extract_row(cleaned: &CleanedTrace, layout: &AoiLayout) -> Result<FeatureRow, FeatureError> {
    let words = layout.word_count();
    if let Some(fx) = cleaned.fixations.iter().find(|f| f.word_index >= words) {
        return Err(FeatureError::LayoutMismatch {
            trace: sample_id(cleaned),
            word: fx.word_index,
            words,
        });
    }
    let saccades = classify_saccades(&cleaned.trace, &cleaned.fixations);
    let mut values = Vec::new();
    for level in AoiLevel::ALL {
        let n = layout.spans(level).len();
        let visits = visits_by_aoi(&cleaned.fixations, n, |w| layout.span_of(level, w));
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        for s in &saccades {
            let aoi = layout.span_of(level, s.landing_word);
            match s.direction {
                Direction::Forward => forward[aoi].push(s),
                Direction::Regression => backward[aoi].push(s),
            }
        }
        for aoi in 0..n {
            values.extend(fixation_features::<f64>(&visits[aoi]).values().map(Some));
            if level != AoiLevel::Word {
                let sf = saccade_features::<f64>(&forward[aoi]);
                values.extend(sf.values().map(Some));
                values.extend(regression_features::<f64>(&backward[aoi], sf.sc).values());
            }
        }
    }
    Ok(FeatureRow {
        sample_id: sample_id(cleaned),
        label: cleaned.trace.label.map(|l| l.to_string()),
        values,
    })
}

/// One row per trace; missing rSR cells are imputed with the column mean.
pub fn build_matrix(traces: &[CleanedTrace], layout: &AoiLayout) -> Result<FeatureMatrix, FeatureError> {
    let rows = traces
        .iter()
        .map(|t| extract_row(t, layout))
        .collect::<Result<Vec<_>, _>>()?;
    let mut m = FeatureMatrix::new(feature_names(layout), rows)?;
    for j in 0..m.n_features() {
        if m.feature_names[j].ends_with(":rSR") {
            m.impute_column_mean(j);
        }
    }
    Ok(m)
}

/// Mean and population SD of one feature column across samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSummary {
    pub level: String,
    pub aoi: String,
    pub feature: String,
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

/// Per-column summaries over present cells, grouped by `level:aoi:feature`
/// name parts (used for per-section reading profiles).
pub fn aggregate_columns(matrix: &FeatureMatrix) -> Vec<ColumnSummary> {
    let mut out = Vec::with_capacity(matrix.n_features());
    for (j, name) in matrix.feature_names.iter().enumerate() {
        let present: Vec<f64> = matrix.column(j).into_iter().flatten().collect();
        let mut parts = name.splitn(3, ':');
        let (level, aoi, feature) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(a), Some(f)) => (l, a, f),
            _ => ("", "", name.as_str()),
        };
        out.push(ColumnSummary {
            level: level.to_string(),
            aoi: aoi.to_string(),
            feature: feature.to_string(),
            mean: mean(&present).unwrap_or(f64::NAN),
            sd: population_variance(&present).map_or(f64::NAN, f64::sqrt),
            n: present.len(),
        });
    }
    out
}

