//! Fixation features grouped by the lexicon rating of the fixated word.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{pearson_test, Result, StatsError};
use crate::clean::CleanedTrace;
use crate::corpus::{AoiLayout, PsycholinguisticFactor, RatingLexicon};
use crate::features::{fixation_features, visits_by_aoi, FixationFeatures, FIXATION_FEATURES};
use crate::scalar::{mean, population_variance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

/// Per rating bucket, the cross-participant mean and SD of each fixation
/// feature. Buckets without lexicon words are absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatingProfile {
    pub factor: PsycholinguisticFactor,
    pub per_rating: BTreeMap<u8, BTreeMap<String, MeanSd>>,
}

/// Word-level fixation features of one cleaned trace.
pub fn word_fixation_features(trace: &CleanedTrace, layout: &AoiLayout) -> Vec<FixationFeatures<f64>> {
    visits_by_aoi(&trace.fixations, layout.word_count(), |w| w)
        .iter()
        .map(|v| fixation_features(v))
        .collect()
}

fn lexicon_key(text: &str) -> String {
    text.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

/// Rating of every layout word, `None` for out-of-lexicon words.
fn word_ratings(layout: &AoiLayout, lexicon: &RatingLexicon) -> Vec<Option<u8>> {
    layout.words.iter().map(|w| lexicon.rating(&lexicon_key(&w.text))).collect()
}

/// For each participant (trace): `reduce` over each bucket's words of every
/// fixation feature. Returns rating -> per-participant feature vectors.
fn per_participant(
    traces: &[CleanedTrace],
    lexicon: &RatingLexicon,
    layout: &AoiLayout,
    reduce: fn(&[f64]) -> f64,
) -> BTreeMap<u8, Vec<[f64; 7]>> {
    let ratings = word_ratings(layout, lexicon);
    let mut out: BTreeMap<u8, Vec<[f64; 7]>> = BTreeMap::new();
    for trace in traces {
        let words = word_fixation_features(trace, layout);
        let mut buckets: BTreeMap<u8, Vec<[f64; 7]>> = BTreeMap::new();
        for (f, r) in words.iter().zip(&ratings) {
            if let Some(r) = r {
                buckets.entry(*r).or_default().push(f.values());
            }
        }
        for (r, rows) in buckets {
            let mut reduced = [0.0; 7];
            for (k, slot) in reduced.iter_mut().enumerate() {
                let col: Vec<f64> = rows.iter().map(|v| v[k]).collect();
                *slot = reduce(&col);
            }
            out.entry(r).or_default().push(reduced);
        }
    }
    out
}

/// Mean of each fixation feature over a bucket's words per participant, then
/// mean and population SD of those means across participants.
pub fn rating_feature_means(traces: &[CleanedTrace], lexicon: &RatingLexicon, layout: &AoiLayout) -> RatingProfile {
    let buckets = per_participant(traces, lexicon, layout, |xs| mean(xs).unwrap_or(0.0));
    let per_rating = buckets
        .into_iter()
        .map(|(r, participants)| {
            let features = FIXATION_FEATURES
                .iter()
                .enumerate()
                .map(|(k, name)| {
                    let xs: Vec<f64> = participants.iter().map(|p| p[k]).collect();
                    let stats = MeanSd {
                        mean: mean(&xs).unwrap_or(0.0),
                        sd: population_variance(&xs).map_or(0.0, f64::sqrt),
                    };
                    (name.to_string(), stats)
                })
                .collect();
            (r, features)
        })
        .collect();
    RatingProfile {
        factor: lexicon.factor,
        per_rating,
    }
}

/// Correlates rating values with the cross-participant mean of each
/// participant's per-bucket feature total. With `sort_means` the means are
/// sorted ascending before correlating, as the original procedure did.
pub fn rating_correlation(
    traces: &[CleanedTrace],
    lexicon: &RatingLexicon,
    layout: &AoiLayout,
    feature: &str,
    sort_means: bool,
) -> Result<(f64, f64)> {
    let k = FIXATION_FEATURES
        .iter()
        .position(|f| *f == feature)
        .ok_or_else(|| StatsError::UnknownFeature(feature.to_string()))?;
    let buckets = per_participant(traces, lexicon, layout, |xs| xs.iter().sum());
    let (ratings, means): (Vec<f64>, Vec<f64>) = buckets
        .iter()
        .map(|(&r, ps)| {
            let xs: Vec<f64> = ps.iter().map(|p| p[k]).collect();
            (f64::from(r), mean(&xs).unwrap_or(0.0))
        })
        .unzip();
    correlate_with_scale(&ratings, means, sort_means)
}

/// The final step shared by [`rating_correlation`]: optional ascending sort
/// of the means, then Pearson against the rating values.
pub fn correlate_with_scale(ratings: &[f64], mut means: Vec<f64>, sort_means: bool) -> Result<(f64, f64)> {
    if sort_means {
        means.sort_by(f64::total_cmp);
    }
    pearson_test(ratings, &means)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clean::AlignedFixation;
    use crate::corpus::{GazeEvent, GazeTrace, Line, Span, Word};
    use std::collections::HashMap;

    fn layout() -> AoiLayout {
        let words = ["cat", "dog", "zzz"]
            .iter()
            .enumerate()
            .map(|(i, t)| Word {
                index: i,
                text: t.to_string(),
                slide: 0,
                line: 0,
                x_min: i as f64 * 10.0,
                x_max: i as f64 * 10.0 + 5.0,
            })
            .collect();
        let all = vec![Span::new(0, 2)];
        AoiLayout::new(vec![Line { slide: 0, y: 0.0 }], words, all.clone(), all.clone(), all.clone(), all).unwrap()
    }

    fn lexicon() -> RatingLexicon {
        RatingLexicon {
            factor: PsycholinguisticFactor::Imagery,
            scale_points: 7,
            entries: HashMap::from([("cat".into(), 3), ("dog".into(), 3)]),
        }
    }

    fn trace(durations: &[(usize, i64)]) -> CleanedTrace {
        let fixations: Vec<_> = durations
            .iter()
            .map(|&(w, d)| AlignedFixation {
                event: GazeEvent::fixation(0, d, 0.0, 0.0),
                word_index: w,
                line: 0,
                slide: 0,
                visit_ordinal: 1,
            })
            .collect();
        let events = fixations.iter().map(|f| f.event.clone()).collect();
        CleanedTrace {
            trace: GazeTrace::new("p", events),
            fixations,
        }
    }

    #[test]
    fn single_participant_bucket_mean() {
        let p = rating_feature_means(&[trace(&[(0, 200), (1, 400)])], &lexicon(), &layout());
        let tfd = p.per_rating[&3]["tFD"];
        assert_eq!((tfd.mean, tfd.sd), (300.0, 0.0));
        assert!(!p.per_rating.contains_key(&1));
    }

    #[test]
    fn two_participants_use_population_sd() {
        let a = trace(&[(0, 300), (1, 300)]);
        let b = trace(&[(0, 500), (1, 500)]);
        let tfd = rating_feature_means(&[a, b], &lexicon(), &layout()).per_rating[&3]["tFD"];
        assert_eq!((tfd.mean, tfd.sd), (400.0, 100.0));
    }

    #[test]
    fn sorting_flips_a_decreasing_profile() {
        let ratings: Vec<f64> = (1..=7).map(f64::from).collect();
        let means: Vec<f64> = (0..7).map(|i| 70.0 - 10.0 * i as f64).collect();
        let (r, _) = correlate_with_scale(&ratings, means.clone(), false).unwrap();
        assert!((r + 1.0).abs() < 1e-12);
        let (r, _) = correlate_with_scale(&ratings, means, true).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let up: Vec<f64> = (0..7).map(|i| i as f64 * 2.0).collect();
        assert_eq!(
            correlate_with_scale(&ratings, up.clone(), true),
            correlate_with_scale(&ratings, up, false)
        );
    }
}
