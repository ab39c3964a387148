use std::path::PathBuf;

use approx::assert_abs_diff_eq;
use rrkit::corpus::{parse_conllu, ParsedSentence};
use rrkit::simsem::{
    score_parsed, score_units, word_similarity, PairTable, PreprocessResources, ScoreOptions, SimError, SimilaritySource,
    Token, Unit,
};
use rrkit::stats::levenshtein_sim;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn resources() -> PreprocessResources {
    PreprocessResources::from_texts(
        Some(&read("stopwords.txt")),
        Some(&read("lemma_map.tsv")),
        Some(&read("phrases.txt")),
        Some(&read("substitutions.tsv")),
    )
    .unwrap()
}

fn sources() -> Vec<SimilaritySource> {
    vec![SimilaritySource::PairTable(PairTable::read(&read("pairs_contextual.tsv")).unwrap())]
}

fn parsed(name: &str) -> Vec<ParsedSentence> {
    parse_conllu(&fixture(name)).unwrap()
}

#[test]
fn golden_pair_scores() {
    let r = score_parsed(
        &parsed("reference.conllu"),
        &parsed("summary.conllu"),
        &resources(),
        &sources(),
        &ScoreOptions::default(),
    )
    .unwrap();
    // six matches: 0.78 + 5 x 1.0 over 7
    assert_abs_diff_eq!(r.tls, 5.78 / 7.0, epsilon = 1e-12);
    let syntax = r.pairs[0].syntax.unwrap();
    assert_eq!((syntax.mdd1, syntax.mdd2), (1.0, 1.0));
    assert_abs_diff_eq!(syntax.mdrs, 5.0 / 6.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.tss, 1.0 + 5.0 / 6.0, epsilon = 1e-12);
    assert_eq!(r.total_reference_concepts, 13);
    assert_eq!(r.found_concepts, 7.0);
    assert_abs_diff_eq!(r.concept_score, 7.0 / 13.0, epsilon = 1e-12);
    assert_eq!(r.alignment_score, 10.0);
    assert_abs_diff_eq!(r.normalized_alignment, 10.0 / 13.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.tcs, 17.0 / 13.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.overall, r.tls + r.tss + r.tcs, epsilon = 1e-12);
    assert!(r.elements.is_empty());
}

#[test]
fn levenshtein_column_of_pair_table() {
    let text = read("word_pairs.tsv");
    let mut n = 0;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        let expected: f64 = cols[6].parse().unwrap();
        let got = levenshtein_sim(cols[0], cols[1]);
        assert_eq!(format!("{got:.2}"), format!("{expected:.2}"), "{} / {}", cols[0], cols[1]);
        n += 1;
    }
    assert_eq!(n, 14);
}

#[test]
fn pair_table_reproduces_listed_scores() {
    let src = sources();
    assert_eq!(word_similarity("initially", "presently", &src), 0.78);
    assert_eq!(word_similarity("1829", "1829", &src), 1.0);
    assert_eq!(word_similarity("1829", "1830", &src), 0.0);
}

fn unit(words: &str, element: Option<&str>) -> Unit {
    Unit {
        tokens: words
            .split_whitespace()
            .map(|w| Token {
                lemma: w.to_string(),
                surface: w.to_string(),
                quartet: None,
                content: true,
            })
            .collect(),
        element: element.map(String::from),
    }
}

#[test]
fn summary_units_pick_their_closest_reference() {
    let reference = [unit("king castle river", Some("setting")), unit("dragon attack village", Some("plot"))];
    let summary = [unit("dragon village", None), unit("castle king", None)];
    let r = score_units(&reference, &summary, &[], &ScoreOptions::default()).unwrap();
    let partners: Vec<_> = r.pairs.iter().map(|p| p.reference_unit).collect();
    assert_eq!(partners, vec![1, 0]);
    // no syntax on raw units
    assert_eq!(r.tss, 0.0);
    assert_abs_diff_eq!(r.tls, 4.0 / 3.0, epsilon = 1e-12);
    // per-element values add up to the text totals
    let sum = |f: fn(&rrkit::simsem::ElementScores) -> f64| r.elements.values().map(f).sum::<f64>();
    assert_abs_diff_eq!(sum(|e| e.overall), r.overall, epsilon = 1e-12);
    assert_abs_diff_eq!(sum(|e| e.concept_score), r.concept_score, epsilon = 1e-12);
    assert_eq!(r.elements.len(), 2);
}

#[test]
fn repeated_concepts_are_capped() {
    let reference = [unit("horse", None)];
    let summary = [unit("horse horse horse", None)];
    let r = score_units(&reference, &summary, &[], &ScoreOptions::default()).unwrap();
    assert_eq!(r.concept_score, 1.0);
    // one match (+2) and two summary-only columns (-1 each)
    assert_eq!(r.alignment_score, 0.0);
}

#[test]
fn empty_reference_is_an_error() {
    let err = score_units(&[unit("", None)], &[unit("a", None)], &[], &ScoreOptions::default()).unwrap_err();
    assert!(matches!(err, SimError::EmptyReference));
}
