use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LearnError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub folds: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.7,
            folds: 5,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.train_fraction && self.train_fraction < 1.0) {
            return Err(LearnError::InvalidSpec(format!(
                "train_fraction {} is not inside (0, 1)",
                self.train_fraction
            )));
        }
        if self.folds < 2 {
            return Err(LearnError::InvalidSpec(format!("folds must be >= 2, got {}", self.folds)));
        }
        Ok(())
    }
}

/// Row indices per stratum, each shuffled with the seeded generator. Strata
/// are visited in label order so the result depends only on the seed.
fn shuffled_strata(strata: &[String], seed: u64) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, s) in strata.iter().enumerate() {
        groups.entry(s).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    groups
        .into_values()
        .map(|mut rows| {
            rows.shuffle(&mut rng);
            rows
        })
        .collect()
}

/// Stratified train/test split. Per-stratum train counts are the floors of
/// their exact quotas plus one extra row for the largest remainders, so the
/// total equals round(fraction * N) and every stratum is within one row of
/// its exact share. Returns sorted (train, test) row indices.
pub fn stratified_split(strata: &[String], spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    spec.validate()?;
    let n = strata.len();
    let groups = shuffled_strata(strata, spec.seed);
    if n < 2 || groups.iter().any(|g| g.len() < 2) {
        return Err(LearnError::TooFewSamples(
            "a split needs at least 2 rows in every class".into(),
        ));
    }
    let total = (spec.train_fraction * n as f64).round() as usize;
    let quotas: Vec<f64> = groups.iter().map(|g| g.len() as f64 * spec.train_fraction).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut by_remainder: Vec<usize> = (0..groups.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let (ra, rb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let assigned: usize = counts.iter().sum();
    for &g in by_remainder.iter().cycle().take(total.saturating_sub(assigned)) {
        counts[g] += 1;
    }

    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (g, rows) in groups.iter().enumerate() {
        train.extend_from_slice(&rows[..counts[g]]);
        test.extend_from_slice(&rows[counts[g]..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Stratified k-fold partition: each stratum's shuffled rows are dealt to
/// the folds in turn, the dealing position carrying over between strata so
/// fold sizes differ by at most one. Each fold's rows are sorted.
pub fn stratified_folds(strata: &[String], folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(LearnError::InvalidSpec(format!("folds must be >= 2, got {folds}")));
    }
    if strata.len() < folds {
        return Err(LearnError::TooFewSamples(format!(
            "{} rows cannot fill {folds} folds",
            strata.len()
        )));
    }
    let mut out = vec![Vec::new(); folds];
    let mut next = 0;
    for rows in shuffled_strata(strata, seed) {
        for r in rows {
            out[next % folds].push(r);
            next += 1;
        }
    }
    out.iter_mut().for_each(|f| f.sort_unstable());
    Ok(out)
}
