//! Normalization, Welch's t-test, correlation, agreement, string similarity
//! and word-rating aggregation.

mod rating;
pub mod special;

pub use rating::{rating_correlation, rating_feature_means, word_fixation_features, MeanSd, RatingProfile};

use crate::features::FeatureMatrix;
use crate::scalar::{mean, population_variance, sample_variance, Real, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("both samples have zero variance")]
    DegenerateVariance,
    #[error("input is constant")]
    ConstantInput,
    #[error("need at least {need} values, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("inputs differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rating {rating} outside 1..={categories}")]
    RatingOutOfRange { rating: u32, categories: u32 },
    #[error("unknown fixation feature `{0}`")]
    UnknownFeature(String),
    #[error("need at least 2 rating categories")]
    TooFewCategories,
}

pub type Result<T> = std::result::Result<T, StatsError>;

/// Per-column mean and population SD learned from a training matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ZScore {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl ZScore {
    /// Missing cells are ignored when estimating the column moments.
    pub fn fit(matrix: &FeatureMatrix) -> Self {
        let (mut means, mut sds) = (Vec::new(), Vec::new());
        for j in 0..matrix.n_features() {
            let present: Vec<f64> = matrix.column(j).into_iter().flatten().collect();
            means.push(mean(&present).unwrap_or(0.0));
            sds.push(population_variance(&present).map_or(0.0, f64::sqrt));
        }
        ZScore { means, sds }
    }

    /// Standardizes every column; zero-variance columns become 0. Missing
    /// cells stay missing.
    pub fn apply(&self, matrix: &FeatureMatrix) -> FeatureMatrix {
        let mut out = matrix.clone();
        for row in &mut out.rows {
            for (j, v) in row.values.iter_mut().enumerate() {
                *v = v.map(|x| standardize(x, self.means[j], self.sds[j]));
            }
        }
        out
    }
}

fn standardize<T: Real>(x: T, mu: T, sd: T) -> T {
    if sd > T::zero() {
        (x - mu) / sd
    } else {
        T::zero()
    }
}

pub fn zscore_fit_apply(matrix: &FeatureMatrix) -> FeatureMatrix {
    ZScore::fit(matrix).apply(matrix)
}

/// Z-scores of one column with population SD; constant input gives zeros.
pub fn zscore<T: Real>(xs: &[T]) -> Vec<T> {
    let (Some(mu), Some(var)) = (mean(xs), population_variance(xs)) else {
        return Vec::new();
    };
    let sd = var.sqrt();
    xs.iter().map(|&x| standardize(x, mu, sd)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchResult<T> {
    pub t: T,
    pub df: T,
    /// Two-sided.
    pub p: T,
}

pub fn welch_t<T: Real>(a: &[T], b: &[T]) -> Result<WelchResult<T>> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::TooFewSamples { need: 2, got: s.len() });
        }
    }
    let (na, nb) = (T::of_usize(a.len()), T::of_usize(b.len()));
    let (va, vb) = (sample_variance(a).unwrap() / na, sample_variance(b).unwrap() / nb);
    let se2 = va + vb;
    if se2 <= T::zero() {
        return Err(StatsError::DegenerateVariance);
    }
    let t = (mean(a).unwrap() - mean(b).unwrap()) / se2.sqrt();
    let one = T::one();
    let df = se2 * se2 / (va * va / (na - one) + vb * vb / (nb - one));
    Ok(WelchResult {
        t,
        df,
        p: special::t_two_sided_p(t, df),
    })
}

/// Ascending indices of columns whose Welch p-value between the two groups
/// is below `alpha`. `in_first_group[i]` assigns row `i`; missing cells are
/// skipped and columns with degenerate variance are never selected.
pub fn select_features(matrix: &FeatureMatrix, in_first_group: &[bool], alpha: f64) -> Vec<usize> {
    (0..matrix.n_features())
        .filter(|&j| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (v, &first) in matrix.column(j).into_iter().zip(in_first_group) {
                if let Some(v) = v {
                    if first { a.push(v) } else { b.push(v) }
                }
            }
            matches!(welch_t(&a, &b), Ok(w) if w.p < alpha)
        })
        .collect()
}

fn check_pair<T>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSamples { need: 2, got: x.len() });
    }
    Ok(())
}

pub fn pearson<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    check_pair(x, y)?;
    let (mx, my) = (mean(x).unwrap(), mean(y).unwrap());
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx <= T::zero() || syy <= T::zero() {
        return Err(StatsError::ConstantInput);
    }
    Ok((sxy / (sxx * syy).sqrt()).max(-T::one()).min(T::one()))
}

/// Pearson's r with its two-sided p-value from t = r·√((n−2)/(1−r²)).
pub fn pearson_test<T: Real>(x: &[T], y: &[T]) -> Result<(T, T)> {
    let r = pearson(x, y)?;
    if x.len() < 3 {
        return Ok((r, T::one()));
    }
    let df = T::of_usize(x.len() - 2);
    let denom = T::one() - r * r;
    let p = if denom <= T::zero() {
        T::zero()
    } else {
        special::t_two_sided_p(r * (df / denom).sqrt(), df)
    };
    Ok((r, p))
}

/// 1-based ranks; tied values share their average rank.
pub fn average_ranks<T: Scalar>(xs: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].partial_cmp(&xs[j]).expect("comparable values"));
    let mut ranks = vec![T::zero(); xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end share their mean
        let avg = T::of_usize(start + 1 + end) / T::of_usize(2);
        for &k in &order[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

pub fn spearman<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    check_pair(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Quadratic weighted kappa between two integer ratings on `1..=categories`.
pub fn qwk<T: Scalar>(a: &[u32], b: &[u32], categories: u32) -> Result<T> {
    if categories < 2 {
        return Err(StatsError::TooFewCategories);
    }
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(StatsError::TooFewSamples { need: 1, got: 0 });
    }
    if let Some(&rating) = a.iter().chain(b).find(|&&r| r == 0 || r > categories) {
        return Err(StatsError::RatingOutOfRange { rating, categories });
    }
    let k = categories as usize;
    let mut observed = vec![vec![0usize; k]; k];
    let (mut row, mut col) = (vec![0usize; k], vec![0usize; k]);
    for (&x, &y) in a.iter().zip(b) {
        let (i, j) = (x as usize - 1, y as usize - 1);
        observed[i][j] += 1;
        row[i] += 1;
        col[j] += 1;
    }
    let n = T::of_usize(a.len());
    let (mut num, mut den) = (T::zero(), T::zero());
    for i in 0..k {
        for j in 0..k {
            let w = T::of_usize((i.abs_diff(j)).pow(2));
            num = num + w * T::of_usize(observed[i][j]);
            den = den + w * T::of_usize(row[i] * col[j]) / n;
        }
    }
    // the (K-1)² weight normalization cancels in the ratio
    if den == T::zero() {
        return Ok(if num == T::zero() { T::one() } else { T::zero() });
    }
    Ok(T::one() - num / den)
}

/// Character-level edit distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.chars().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// 1 − distance / longer length, in [0, 1]; two empty strings are identical.
pub fn levenshtein_sim(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    (1.0 - levenshtein(a, b) as f64 / longest as f64).clamp(0.0, 1.0)
}
