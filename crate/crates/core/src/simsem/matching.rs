//! Greedy one-to-one word matching between two token lists, and the
//! lexical and syntactic scores built on it.

use serde::Serialize;

use super::sources::{word_similarity, SimilaritySource};
use super::SimError;
use crate::corpus::TokenQuartet;
use crate::scalar::Real;

pub const DEFAULT_THRESHOLD: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchedPair {
    /// Index into the first token list.
    pub i: usize,
    /// Index into the second token list.
    pub j: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SentencePair {
    /// Accepted pairs in acceptance order (descending score).
    pub matched: Vec<MatchedPair>,
    pub all_pairs_considered: usize,
}

/// Scores every cross pair with `sim`, then accepts pairs greedily by
/// descending score (ties: smaller `i`, then smaller `j`) while both tokens
/// are unused and the score reaches `threshold`.
pub fn match_with<F>(t1: &[String], t2: &[String], threshold: f64, mut sim: F) -> SentencePair
where
    F: FnMut(&str, &str) -> f64,
{
    let mut scored = Vec::with_capacity(t1.len() * t2.len());
    for (i, a) in t1.iter().enumerate() {
        for (j, b) in t2.iter().enumerate() {
            scored.push(MatchedPair { i, j, score: sim(a, b) });
        }
    }
    let all_pairs_considered = scored.len();
    scored.sort_by(|x, y| y.score.total_cmp(&x.score).then(x.i.cmp(&y.i)).then(x.j.cmp(&y.j)));
    let mut used1 = vec![false; t1.len()];
    let mut used2 = vec![false; t2.len()];
    let mut matched = Vec::new();
    for p in scored {
        if p.score < threshold {
            break;
        }
        if !used1[p.i] && !used2[p.j] {
            used1[p.i] = true;
            used2[p.j] = true;
            matched.push(p);
        }
    }
    SentencePair {
        matched,
        all_pairs_considered,
    }
}

pub fn match_pairs(t1: &[String], t2: &[String], sources: &[SimilaritySource], threshold: f64) -> SentencePair {
    match_with(t1, t2, threshold, |a, b| word_similarity(a, b, sources))
}

/// Lexical similarity: summed match scores over (1 + matches).
pub fn tls<T: Real>(pair: &SentencePair) -> T {
    let sum: T = pair.matched.iter().map(|p| T::lit(p.score)).sum();
    sum / (T::one() + T::of_usize(pair.matched.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyntaxScore<T> {
    pub mdd1: T,
    pub mdd2: T,
    pub mdrs: T,
    pub tss: T,
}

/// Syntactic similarity of the aligned tokens. `q1[p.i]` and `q2[p.j]` give
/// the properties of each matched token.
pub fn tss<T: Real>(
    q1: &[Option<&TokenQuartet>],
    q2: &[Option<&TokenQuartet>],
    pair: &SentencePair,
) -> Result<SyntaxScore<T>, SimError> {
    let aligned: Vec<(&TokenQuartet, &TokenQuartet)> = pair
        .matched
        .iter()
        .filter_map(|p| Some((q1.get(p.i).copied().flatten()?, q2.get(p.j).copied().flatten()?)))
        .collect();
    if aligned.is_empty() {
        return Err(SimError::NoAlignment);
    }
    let n = T::of_usize(aligned.len());
    let mdd1 = aligned.iter().map(|(a, _)| T::of_usize(a.dep_dist)).sum::<T>() / n;
    let mdd2 = aligned.iter().map(|(_, b)| T::of_usize(b.dep_dist)).sum::<T>() / n;
    let shared = aligned.iter().filter(|(a, b)| a.dep_rel == b.dep_rel).count();
    let mdrs = T::of_usize(shared) / n;
    Ok(SyntaxScore {
        mdd1,
        mdd2,
        mdrs,
        tss: T::one() / (T::one() + (mdd1 - mdd2).abs()) + mdrs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn greedy_prefers_high_scores_and_is_one_to_one() {
        let sim = |a: &str, b: &str| match (a, b) {
            ("x", "p") => 0.9,
            ("x", "q") => 0.95,
            ("y", "q") => 0.8,
            ("y", "p") => 0.75,
            _ => 0.0,
        };
        let p = match_with(&toks("x y"), &toks("p q"), 0.7, sim);
        let got: Vec<_> = p.matched.iter().map(|m| (m.i, m.j)).collect();
        assert_eq!(got, vec![(0, 1), (1, 0)]);
        assert_eq!(p.all_pairs_considered, 4);
    }

    #[test]
    fn ties_go_to_smaller_indices() {
        let p = match_with(&toks("a a"), &toks("a a"), 0.7, |_, _| 1.0);
        let got: Vec<_> = p.matched.iter().map(|m| (m.i, m.j)).collect();
        assert_eq!(got, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn threshold_is_inclusive() {
        assert_eq!(match_with(&toks("a"), &toks("b"), 0.7, |_, _| 0.7).matched.len(), 1);
        assert!(match_with(&toks("a"), &toks("b"), 0.7, |_, _| 0.69).matched.is_empty());
        assert_eq!(tls::<f64>(&SentencePair::default()), 0.0);
    }

    #[test]
    fn identical_sentences_score_n_over_n_plus_one() {
        let t = toks("a b c");
        let p = match_pairs(&t, &t, &[], DEFAULT_THRESHOLD);
        assert!((tls::<f64>(&p) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn tss_without_matches_is_no_alignment() {
        let r: Result<SyntaxScore<f64>, _> = tss(&[], &[], &SentencePair::default());
        assert!(matches!(r, Err(SimError::NoAlignment)));
    }
}
