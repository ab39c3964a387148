//! Similarity of a summary to its source text.
//!
//! Both texts are split into units (sentences), normalized, and every
//! summary unit is paired with the reference unit it is lexically closest
//! to. Three scores result:
//!
//! * lexical similarity (TLS): matched word scores over (1 + matches)
//! * syntactic similarity (TSS): agreement of dependency distance and
//!   relation labels over the matched words
//! * concept similarity (TCS): share of reference concepts recovered plus
//!   a normalized alignment of concept order
//!
//! Text-level TLS and TSS are sums over summary units; `overall` is
//! TLS + TSS + TCS.

pub mod align;
pub mod matching;
pub mod preprocess;
pub mod sources;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

pub use align::{needleman_wunsch, AlignScheme, Alignment, Column};
pub use matching::{match_pairs, match_with, tls, tss, MatchedPair, SentencePair, SyntaxScore, DEFAULT_THRESHOLD};
pub use preprocess::{preprocess, preprocess_parsed, preprocess_text, PreprocessResources, Token, Unit};
pub use sources::{word_similarity, PairTable, SimilaritySource, Taxonomy};

use crate::corpus::{CorpusError, TokenQuartet};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("no aligned tokens")]
    NoAlignment,
    #[error("the reference text has no concepts")]
    EmptyReference,
    #[error("resource: {0}")]
    Resource(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordMatch {
    pub reference: String,
    pub summary: String,
    pub score: f64,
}

/// Scores of one summary unit against its partner reference unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitPair {
    pub summary_unit: usize,
    pub reference_unit: usize,
    pub tls: f64,
    /// 0 when no word matched.
    pub tss: f64,
    pub syntax: Option<SyntaxScore<f64>>,
    pub matched: Vec<WordMatch>,
}

/// Concept alignment of one reference unit with the summary units paired
/// to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConceptBlock {
    pub reference_unit: usize,
    pub element: Option<String>,
    pub reference_concepts: Vec<String>,
    pub summary_concepts: Vec<String>,
    /// Summary concepts that matched a word of the partner unit.
    pub found: usize,
    pub alignment: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ElementScores {
    pub tls: f64,
    pub tss: f64,
    pub concept_score: f64,
    pub normalized_alignment: f64,
    pub tcs: f64,
    pub overall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub tls: f64,
    pub tss: f64,
    pub concept_score: f64,
    pub alignment_score: f64,
    pub normalized_alignment: f64,
    pub tcs: f64,
    pub overall: f64,
    /// Found concepts after capping at `total_reference_concepts`.
    pub found_concepts: f64,
    pub total_reference_concepts: usize,
    pub pairs: Vec<UnitPair>,
    pub blocks: Vec<ConceptBlock>,
    /// Breakdown by the reference units' element tags; empty when no unit
    /// carries a tag. Untagged units fall under `"untagged"`.
    pub elements: BTreeMap<String, ElementScores>,
}

/// Scoring options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreOptions {
    pub threshold: f64,
    pub scheme: AlignScheme<f64>,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            threshold: DEFAULT_THRESHOLD,
            scheme: AlignScheme::concept(),
        }
    }
}

/// Unique lemmas of a unit in first-occurrence order, with the quartet of
/// each first occurrence.
fn types(unit: &Unit) -> (Vec<String>, Vec<Option<&TokenQuartet>>) {
    let mut seen = HashMap::new();
    let mut lemmas = Vec::new();
    let mut quartets = Vec::new();
    for t in &unit.tokens {
        if seen.insert(t.lemma.as_str(), ()).is_none() {
            lemmas.push(t.lemma.clone());
            quartets.push(t.quartet.as_ref());
        }
    }
    (lemmas, quartets)
}

fn concepts(unit: &Unit) -> impl Iterator<Item = &Token> {
    unit.tokens.iter().filter(|t| t.content)
}

/// Symbol for summary concepts that matched nothing; never equal to a
/// reference lemma.
fn unmatched_symbol(lemma: &str) -> String {
    format!("\u{0}{lemma}")
}

/// Scores `summary` against `reference`.
pub fn score_units(
    reference: &[Unit],
    summary: &[Unit],
    sources: &[SimilaritySource],
    options: &ScoreOptions,
) -> Result<SimilarityReport, SimError> {
    let total_ref: usize = reference.iter().map(|u| concepts(u).count()).sum();
    if total_ref == 0 {
        return Err(SimError::EmptyReference);
    }
    let ref_types: Vec<_> = reference.iter().map(types).collect();

    let mut cache: HashMap<(String, String), f64> = HashMap::new();
    let mut sim = |a: &str, b: &str| {
        *cache
            .entry((a.to_string(), b.to_string()))
            .or_insert_with(|| word_similarity(a, b, sources))
    };

    let mut pairs = Vec::with_capacity(summary.len());
    // per summary unit: partner and map summary lemma -> reference lemma
    let mut links: Vec<(usize, HashMap<String, String>)> = Vec::with_capacity(summary.len());
    for (s, unit) in summary.iter().enumerate() {
        let (s_lemmas, s_quartets) = types(unit);
        let mut best: Option<(usize, f64, SentencePair)> = None;
        for (r, (r_lemmas, _)) in ref_types.iter().enumerate() {
            let pair = match_with(r_lemmas, &s_lemmas, options.threshold, &mut sim);
            let v: f64 = tls(&pair);
            if best.as_ref().is_none_or(|b| v > b.1) {
                best = Some((r, v, pair));
            }
        }
        let Some((r, v, pair)) = best else {
            return Err(SimError::EmptyReference);
        };
        let (r_lemmas, r_quartets) = &ref_types[r];
        let syntax = match tss::<f64>(r_quartets, &s_quartets, &pair) {
            Ok(x) => Some(x),
            Err(SimError::NoAlignment) => None,
            Err(e) => return Err(e),
        };
        let mapping = pair
            .matched
            .iter()
            .map(|m| (s_lemmas[m.j].clone(), r_lemmas[m.i].clone()))
            .collect();
        links.push((r, mapping));
        pairs.push(UnitPair {
            summary_unit: s,
            reference_unit: r,
            tls: v,
            tss: syntax.map_or(0.0, |x| x.tss),
            syntax,
            matched: pair
                .matched
                .iter()
                .map(|m| WordMatch {
                    reference: r_lemmas[m.i].clone(),
                    summary: s_lemmas[m.j].clone(),
                    score: m.score,
                })
                .collect(),
        });
    }

    let mut blocks = Vec::with_capacity(reference.len());
    for (r, unit) in reference.iter().enumerate() {
        let reference_concepts: Vec<String> = concepts(unit).map(|t| t.lemma.clone()).collect();
        let mut summary_concepts = Vec::new();
        let mut found = 0;
        for (s, (partner, mapping)) in links.iter().enumerate() {
            if *partner != r {
                continue;
            }
            for t in concepts(&summary[s]) {
                match mapping.get(&t.lemma) {
                    Some(target) => {
                        found += 1;
                        summary_concepts.push(target.clone());
                    }
                    None => summary_concepts.push(unmatched_symbol(&t.lemma)),
                }
            }
        }
        let alignment = needleman_wunsch(&reference_concepts, &summary_concepts, &options.scheme).score;
        blocks.push(ConceptBlock {
            reference_unit: r,
            element: unit.element.clone(),
            reference_concepts,
            summary_concepts: summary_concepts
                .into_iter()
                .map(|c| c.trim_start_matches('\u{0}').to_string())
                .collect(),
            found,
            alignment,
        });
    }

    let total = total_ref as f64;
    let found_raw: usize = blocks.iter().map(|b| b.found).sum();
    // summaries repeating a concept can exceed the reference count
    let cap = if found_raw > total_ref { total / found_raw as f64 } else { 1.0 };
    let found_concepts = found_raw as f64 * cap;

    let tls_sum: f64 = pairs.iter().map(|p| p.tls).sum();
    let tss_sum: f64 = pairs.iter().map(|p| p.tss).sum();
    let concept_score = found_concepts / total;
    let alignment_score: f64 = blocks.iter().map(|b| b.alignment).sum();
    let normalized_alignment = alignment_score / total;
    let tcs = concept_score + normalized_alignment;

    let mut elements = BTreeMap::new();
    if reference.iter().any(|u| u.element.is_some()) {
        let name = |r: usize| reference[r].element.clone().unwrap_or_else(|| "untagged".to_string());
        for b in &blocks {
            let e: &mut ElementScores = elements.entry(name(b.reference_unit)).or_default();
            e.concept_score += b.found as f64 * cap / total;
            e.normalized_alignment += b.alignment / total;
        }
        for p in &pairs {
            let e = elements.entry(name(p.reference_unit)).or_default();
            e.tls += p.tls;
            e.tss += p.tss;
        }
        for e in elements.values_mut() {
            e.tcs = e.concept_score + e.normalized_alignment;
            e.overall = e.tls + e.tss + e.tcs;
        }
    }

    Ok(SimilarityReport {
        tls: tls_sum,
        tss: tss_sum,
        concept_score,
        alignment_score,
        normalized_alignment,
        tcs,
        overall: tls_sum + tss_sum + tcs,
        found_concepts,
        total_reference_concepts: total_ref,
        pairs,
        blocks,
        elements,
    })
}

/// Treats each text as one unit per parsed sentence.
pub fn score_parsed(
    reference: &[crate::corpus::ParsedSentence],
    summary: &[crate::corpus::ParsedSentence],
    resources: &PreprocessResources,
    sources: &[SimilaritySource],
    options: &ScoreOptions,
) -> Result<SimilarityReport, SimError> {
    let r: Vec<Unit> = reference.iter().map(|s| preprocess_parsed(s, resources)).collect();
    let s: Vec<Unit> = summary.iter().map(|s| preprocess_parsed(s, resources)).collect();
    score_units(&r, &s, sources, options)
}

/// Raw-text scoring; tokens carry no syntax, so TSS is 0.
pub fn score_text(
    reference: &str,
    summary: &str,
    resources: &PreprocessResources,
    sources: &[SimilaritySource],
    options: &ScoreOptions,
) -> Result<SimilarityReport, SimError> {
    score_units(
        &preprocess_text(reference, resources),
        &preprocess_text(summary, resources),
        sources,
        options,
    )
}
