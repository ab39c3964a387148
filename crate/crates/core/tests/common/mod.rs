//! Independent reference implementations used as test oracles. They share no
//! code with the library and favour obviousness over speed.
#![allow(dead_code)]

use statrs::distribution::{ContinuousCDF, StudentsT};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Two-sided t p-value from the statrs Student's t CDF.
pub fn t_p_value(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).unwrap();
    2.0 * dist.cdf(-t.abs())
}

/// (t, df, p) of Welch's test written out term by term.
pub fn welch(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let var = |x: &[f64]| {
        let m = mean(x);
        x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
    };
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (qa, qb) = (var(a) / na, var(b) / nb);
    let t = (mean(a) - mean(b)) / (qa + qb).sqrt();
    let df = (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    (t, df, t_p_value(t, df))
}

/// Pearson's r by the raw-sums formula.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Rank of each value by counting: #smaller + (#equal + 1) / 2.
pub fn count_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|v| {
            let less = x.iter().filter(|w| *w < v).count() as f64;
            let equal = x.iter().filter(|w| *w == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&count_ranks(x), &count_ranks(y))
}

/// Quadratic weighted kappa via all rating pairs:
/// 1 − Σ(aₙ−bₙ)² / ((1/N) Σₙ Σₘ (aₙ−bₘ)²).
pub fn qwk_pairwise(a: &[u32], b: &[u32]) -> f64 {
    let n = a.len() as f64;
    let sq = |x: u32, y: u32| (x as f64 - y as f64).powi(2);
    let observed: f64 = a.iter().zip(b).map(|(&x, &y)| sq(x, y)).sum();
    let expected: f64 = a.iter().map(|&x| b.iter().map(|&y| sq(x, y)).sum::<f64>()).sum::<f64>() / n;
    if expected == 0.0 {
        1.0
    } else {
        1.0 - observed / expected
    }
}

/// Edit distance by plain recursion; only for short strings.
pub fn edit_distance_recursive(a: &[char], b: &[char]) -> usize {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((ca, ra)), Some((cb, rb))) => {
            let sub = edit_distance_recursive(ra, rb) + usize::from(ca != cb);
            let del = edit_distance_recursive(ra, b) + 1;
            let ins = edit_distance_recursive(a, rb) + 1;
            sub.min(del).min(ins)
        }
    }
}

/// Best global alignment score of two sequences by enumerating every
/// alignment path explicitly. `mismatch: None` forbids unequal items in one
/// column; `gap_a` scores an item of `a` against a gap, `gap_b` the reverse.
pub fn enumerate_alignments<S: PartialEq>(
    a: &[S],
    b: &[S],
    matched: f64,
    mismatch: Option<f64>,
    gap_a: f64,
    gap_b: f64,
) -> f64 {
    type Scores = (f64, Option<f64>, f64, f64);
    fn paths<S: PartialEq>(a: &[S], b: &[S], acc: f64, s: Scores, best: &mut f64) {
        if a.is_empty() && b.is_empty() {
            *best = best.max(acc);
            return;
        }
        if !a.is_empty() && !b.is_empty() {
            let step = if a[0] == b[0] { Some(s.0) } else { s.1 };
            if let Some(step) = step {
                paths(&a[1..], &b[1..], acc + step, s, best);
            }
        }
        if !a.is_empty() {
            paths(&a[1..], b, acc + s.2, s, best);
        }
        if !b.is_empty() {
            paths(a, &b[1..], acc + s.3, s, best);
        }
    }
    let mut best = f64::NEG_INFINITY;
    paths(a, b, 0.0, (matched, mismatch, gap_a, gap_b), &mut best);
    best
}
