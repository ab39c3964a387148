use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Dataset, LearnError, Result};
use crate::stats::ZScore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Classifier,
    Regressor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    /// Inverse regularization strength.
    pub c: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for TrainingMeta {
    fn default() -> Self {
        TrainingMeta {
            c: 1.0,
            tolerance: 0.001,
            max_iters: 1000,
        }
    }
}

/// Linear model over named features with an optional standardization
/// front-end applied before the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub kind: ModelKind,
    pub feature_names: Vec<String>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub meta: TrainingMeta,
    /// Class labels for decision values below / above zero.
    pub classes: Option<[String; 2]>,
    pub scaler: Option<ZScore>,
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

impl LinearModel {
    fn prepare(&self, x: &[f64]) -> Vec<f64> {
        match &self.scaler {
            Some(z) => x
                .iter()
                .enumerate()
                .map(|(j, &v)| if z.sds[j] > 0.0 { (v - z.means[j]) / z.sds[j] } else { 0.0 })
                .collect(),
            None => x.to_vec(),
        }
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, &self.prepare(x)) + self.bias
    }

    /// Regression output, or P(second class) for a classifier.
    pub fn predict_value(&self, x: &[f64]) -> f64 {
        match self.kind {
            ModelKind::Classifier => sigmoid(self.decision(x)),
            ModelKind::Regressor => self.decision(x),
        }
    }

    /// Predicted class label, or the regression value formatted as text.
    pub fn predict_label(&self, x: &[f64]) -> String {
        match (&self.classes, self.kind) {
            (Some([neg, pos]), ModelKind::Classifier) => {
                if self.decision(x) >= 0.0 {
                    pos.clone()
                } else {
                    neg.clone()
                }
            }
            _ => self.decision(x).to_string(),
        }
    }

    pub fn save(&self) -> String {
        let mut out = String::new();
        let kind = match self.kind {
            ModelKind::Classifier => "classifier",
            ModelKind::Regressor => "regressor",
        };
        let _ = writeln!(out, "kind={kind}");
        let _ = writeln!(out, "bias={}", self.bias);
        let _ = writeln!(out, "c={}", self.meta.c);
        let _ = writeln!(out, "tolerance={}", self.meta.tolerance);
        let _ = writeln!(out, "max_iters={}", self.meta.max_iters);
        if let Some([a, b]) = &self.classes {
            let _ = writeln!(out, "classes={a},{b}");
        }
        let _ = writeln!(out, "standardized={}", self.scaler.is_some());
        let _ = writeln!(out, "# feature\tweight\tmean\tsd");
        for (j, name) in self.feature_names.iter().enumerate() {
            let (m, s) = self.scaler.as_ref().map_or((0.0, 1.0), |z| (z.means[j], z.sds[j]));
            let _ = writeln!(out, "{name}\t{}\t{m}\t{s}", self.weights[j]);
        }
        out
    }

    pub fn load(text: &str) -> Result<Self> {
        let bad = |line: usize, why: &str| LearnError::ModelFormat(format!("line {line}: {why}"));
        let mut kind = None;
        let mut bias = 0.0;
        let mut meta = TrainingMeta::default();
        let mut classes = None;
        let mut standardized = false;
        let (mut names, mut weights, mut means, mut sds) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.contains('\t') {
                let cols: Vec<&str> = line.split('\t').collect();
                if cols.len() != 4 {
                    return Err(bad(line_no, "feature rows need name, weight, mean, sd"));
                }
                let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line_no, "not a number"));
                names.push(cols[0].to_string());
                weights.push(num(cols[1])?);
                means.push(num(cols[2])?);
                sds.push(num(cols[3])?);
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| bad(line_no, "expected key=value"))?;
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line_no, "not a number"));
            match key {
                "kind" => {
                    kind = Some(match value {
                        "classifier" => ModelKind::Classifier,
                        "regressor" => ModelKind::Regressor,
                        _ => return Err(bad(line_no, "unknown model kind")),
                    })
                }
                "bias" => bias = num(value)?,
                "c" => meta.c = num(value)?,
                "tolerance" => meta.tolerance = num(value)?,
                "max_iters" => meta.max_iters = value.parse().map_err(|_| bad(line_no, "not an integer"))?,
                "classes" => {
                    let (a, b) = value.split_once(',').ok_or_else(|| bad(line_no, "expected two classes"))?;
                    classes = Some([a.to_string(), b.to_string()]);
                }
                "standardized" => standardized = value == "true",
                _ => return Err(bad(line_no, "unknown key")),
            }
        }
        Ok(LinearModel {
            kind: kind.ok_or_else(|| LearnError::ModelFormat("missing kind".into()))?,
            feature_names: names,
            weights,
            bias,
            meta,
            classes,
            scaler: standardized.then_some(ZScore { means, sds }),
        })
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^{-m}) without overflow.
fn log_loss(margin: f64) -> f64 {
    if margin > 0.0 {
        (-margin).exp().ln_1p()
    } else {
        -margin + margin.exp().ln_1p()
    }
}

/// Objective Σ log(1 + e^{−sᵢ(w·xᵢ+b)}) + ‖w‖² / (2c).
fn logistic_objective(x: &[Vec<f64>], signs: &[f64], w: &[f64], b: f64, c: f64) -> f64 {
    let data: f64 = x.iter().zip(signs).map(|(xi, s)| log_loss(s * (dot(w, xi) + b))).sum();
    data + dot(w, w) / (2.0 * c)
}

fn logistic_gradient(x: &[Vec<f64>], signs: &[f64], w: &[f64], b: f64, c: f64) -> (Vec<f64>, f64) {
    let mut gw: Vec<f64> = w.iter().map(|v| v / c).collect();
    let mut gb = 0.0;
    for (xi, s) in x.iter().zip(signs) {
        // d/dz log(1 + e^{-s z}) = -s σ(-s z)
        let coef = -s * sigmoid(-s * (dot(w, xi) + b));
        for (g, v) in gw.iter_mut().zip(xi) {
            *g += coef * v;
        }
        gb += coef;
    }
    (gw, gb)
}

/// L2-regularized logistic regression by gradient descent with Armijo
/// backtracking; stops when the objective changes by less than the
/// tolerance or after `max_iters` steps. The second class in label order
/// is the positive one.
pub fn train_classifier(data: &Dataset, meta: TrainingMeta) -> Result<LinearModel> {
    let mut classes: Vec<&str> = data.labels.iter().map(String::as_str).collect();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() != 2 {
        return Err(LearnError::NonBinaryLabels(classes.len()));
    }
    let signs: Vec<f64> = data
        .labels
        .iter()
        .map(|l| if l == classes[1] { 1.0 } else { -1.0 })
        .collect();
    let p = data.n_features();
    let (mut w, mut b) = (vec![0.0; p], 0.0);
    let mut loss = logistic_objective(&data.x, &signs, &w, b, meta.c);
    let mut step = 1.0;
    for _ in 0..meta.max_iters {
        let (gw, gb) = logistic_gradient(&data.x, &signs, &w, b, meta.c);
        let g2 = dot(&gw, &gw) + gb * gb;
        if g2 == 0.0 {
            break;
        }
        // grow the step optimistically, then backtrack until sufficient decrease
        step *= 2.0;
        let (next_w, next_b, next_loss) = loop {
            let cw: Vec<f64> = w.iter().zip(&gw).map(|(a, g)| a - step * g).collect();
            let cb = b - step * gb;
            let cl = logistic_objective(&data.x, &signs, &cw, cb, meta.c);
            if cl <= loss - 1e-4 * step * g2 || step < 1e-12 {
                break (cw, cb, cl);
            }
            step *= 0.5;
        };
        let change = (loss - next_loss).abs();
        (w, b, loss) = (next_w, next_b, next_loss);
        if change < meta.tolerance {
            break;
        }
    }
    Ok(LinearModel {
        kind: ModelKind::Classifier,
        feature_names: data.feature_names.clone(),
        weights: w,
        bias: b,
        meta,
        classes: Some([classes[0].to_string(), classes[1].to_string()]),
        scaler: None,
    })
}

/// Solves the symmetric positive definite system `a x = rhs` (Cholesky).
fn solve_spd(mut a: Vec<Vec<f64>>, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    for j in 0..n {
        let d = a[j][j] - (0..j).map(|k| a[j][k] * a[j][k]).sum::<f64>();
        if d <= 0.0 {
            return Err(LearnError::Singular);
        }
        let d = d.sqrt();
        a[j][j] = d;
        for i in j + 1..n {
            let s = a[i][j] - (0..j).map(|k| a[i][k] * a[j][k]).sum::<f64>();
            a[i][j] = s / d;
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = (rhs[i] - (0..i).map(|k| a[i][k] * y[k]).sum::<f64>()) / a[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = (y[i] - (i + 1..n).map(|k| a[k][i] * x[k]).sum::<f64>()) / a[i][i];
    }
    Ok(x)
}

/// Ridge regression with an unpenalized bias: on centered data solves
/// (XᵀX + I/c) w = Xᵀy, or the equivalent dual system when there are more
/// features than rows.
pub fn train_regressor(data: &Dataset, meta: TrainingMeta) -> Result<LinearModel> {
    let targets = data.targets()?;
    let (n, p) = (data.x.len(), data.n_features());
    if n == 0 {
        return Err(LearnError::TooFewSamples("no training rows".into()));
    }
    let lambda = 1.0 / meta.c;
    let x_mean: Vec<f64> = (0..p).map(|j| data.x.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let y_mean = targets.iter().sum::<f64>() / n as f64;
    let xc: Vec<Vec<f64>> = data
        .x
        .iter()
        .map(|r| r.iter().zip(&x_mean).map(|(v, m)| v - m).collect())
        .collect();
    let yc: Vec<f64> = targets.iter().map(|y| y - y_mean).collect();

    let w = if p <= n {
        let mut a = vec![vec![0.0; p]; p];
        let mut rhs = vec![0.0; p];
        for (r, y) in xc.iter().zip(&yc) {
            for i in 0..p {
                rhs[i] += r[i] * y;
                for j in 0..=i {
                    a[i][j] += r[i] * r[j];
                }
            }
        }
        for i in 0..p {
            a[i][i] += lambda;
            for j in 0..i {
                a[j][i] = a[i][j];
            }
        }
        solve_spd(a, &rhs)?
    } else {
        // w = Xᵀ (XXᵀ + λI)⁻¹ y
        let mut k = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                k[i][j] = dot(&xc[i], &xc[j]);
                k[j][i] = k[i][j];
            }
            k[i][i] += lambda;
        }
        let alpha = solve_spd(k, &yc)?;
        (0..p).map(|j| xc.iter().zip(&alpha).map(|(r, a)| r[j] * a).sum()).collect()
    };
    let bias = y_mean - dot(&w, &x_mean);
    Ok(LinearModel {
        kind: ModelKind::Regressor,
        feature_names: data.feature_names.clone(),
        weights: w,
        bias,
        meta,
        classes: None,
        scaler: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(x: Vec<Vec<f64>>, labels: Vec<String>) -> Dataset {
        let p = x.first().map_or(0, Vec::len);
        Dataset {
            feature_names: (0..p).map(|j| format!("f{j}")).collect(),
            sample_ids: (0..x.len()).map(|i| i.to_string()).collect(),
            x,
            labels,
        }
    }

    #[test]
    fn sign_separated_points_are_classified() {
        let xs = [-3.0, -2.0, -1.5, -1.0, 1.0, 1.5, 2.0, 3.0];
        let d = dataset(
            xs.iter().map(|&v| vec![v]).collect(),
            xs.iter().map(|&v| if v > 0.0 { "pos" } else { "neg" }.to_string()).collect(),
        );
        let m = train_classifier(&d, TrainingMeta::default()).unwrap();
        for &v in &[-5.0, -1.2, 1.2, 5.0] {
            assert_eq!(m.predict_label(&[v]), if v > 0.0 { "pos" } else { "neg" });
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let d = dataset(vec![vec![1.0], vec![2.0]], vec!["a".into(), "a".into()]);
        assert!(matches!(train_classifier(&d, TrainingMeta::default()), Err(LearnError::NonBinaryLabels(1))));
    }

    #[test]
    fn ridge_recovers_a_line() {
        let x: Vec<Vec<f64>> = (-50..=50).map(|v| vec![v as f64]).collect();
        let labels = x.iter().map(|r| (2.0 * r[0] + 1.0).to_string()).collect();
        let m = train_regressor(&dataset(x, labels), TrainingMeta::default()).unwrap();
        assert!((m.weights[0] - 2.0).abs() < 1e-4);
        assert!((m.bias - 1.0).abs() < 1e-4);
    }

    #[test]
    fn constant_target_gives_mean() {
        let x: Vec<Vec<f64>> = (0..10).map(|v| vec![v as f64, (v * v) as f64]).collect();
        let m = train_regressor(&dataset(x, vec!["4".into(); 10]), TrainingMeta::default()).unwrap();
        assert!(m.weights.iter().all(|w| w.abs() < 1e-12));
        assert!((m.bias - 4.0).abs() < 1e-12);
    }

    #[test]
    fn wide_ridge_satisfies_stationarity() {
        let x: Vec<Vec<f64>> = (0..4).map(|i| (0..6).map(|j| ((i * 7 + j * 3) % 5) as f64).collect()).collect();
        let y = ["1", "3", "2", "5"].map(String::from).to_vec();
        let wide = train_regressor(&dataset(x.clone(), y.clone()), TrainingMeta::default()).unwrap();
        let mut resid = Vec::new();
        for (row, t) in x.iter().zip(&y) {
            resid.push(t.parse::<f64>().unwrap() - wide.decision(row));
        }
        // Xcᵀ r = λ w with λ = 1
        let xm: Vec<f64> = (0..6).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / 4.0).collect();
        for j in 0..6 {
            let g: f64 = x.iter().zip(&resid).map(|(row, e)| (row[j] - xm[j]) * e).sum();
            assert!((g - wide.weights[j]).abs() < 1e-9, "{g} vs {}", wide.weights[j]);
        }
    }

    #[test]
    fn save_load_round_trip() {
        let m = LinearModel {
            kind: ModelKind::Classifier,
            feature_names: vec!["word:0:tFD".into(), "slide:1:SC".into()],
            weights: vec![0.1 + 0.2, -3.5e-7],
            bias: 1.0 / 3.0,
            meta: TrainingMeta::default(),
            classes: Some(["High".into(), "Low".into()]),
            scaler: Some(ZScore {
                means: vec![1.5, 2.0],
                sds: vec![0.25, 0.0],
            }),
        };
        assert_eq!(LinearModel::load(&m.save()).unwrap(), m);
    }
}
