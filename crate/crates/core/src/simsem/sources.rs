//! Word-similarity knowledge sources.

use std::collections::{HashMap, HashSet, VecDeque};

use super::SimError;
use crate::corpus::EmbeddingTable;
use crate::stats::levenshtein_sim;

/// Undirected synset graph plus the synsets each lemma belongs to.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Taxonomy {
    neighbours: HashMap<String, Vec<String>>,
    lemma_synsets: HashMap<String, Vec<String>>,
}

impl Taxonomy {
    /// `edges`: `child<TAB>parent` rows; `lemmas`: `lemma<TAB>synset` rows.
    pub fn read(edges: &str, lemmas: &str) -> Result<Self, SimError> {
        let mut t = Taxonomy::default();
        for (line, a, b) in tsv_pairs(edges, "taxonomy edges")? {
            if a == b {
                return Err(SimError::Resource(format!("taxonomy edges line {line}: self loop")));
            }
            t.neighbours.entry(a.clone()).or_default().push(b.clone());
            t.neighbours.entry(b).or_default().push(a);
        }
        for (_, lemma, synset) in tsv_pairs(lemmas, "taxonomy lemmas")? {
            let entry = t.lemma_synsets.entry(lemma.to_lowercase()).or_default();
            if !entry.contains(&synset) {
                entry.push(synset);
            }
        }
        Ok(t)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lemma_synsets.contains_key(lemma)
    }

    /// Fewest edges between any synset of `a` and any synset of `b`.
    pub fn shortest_path(&self, a: &str, b: &str) -> Option<usize> {
        let starts = self.lemma_synsets.get(a)?;
        let goals: HashSet<&str> = self.lemma_synsets.get(b)?.iter().map(String::as_str).collect();
        let mut seen: HashSet<&str> = starts.iter().map(String::as_str).collect();
        let mut queue: VecDeque<(&str, usize)> = starts.iter().map(|s| (s.as_str(), 0)).collect();
        while let Some((node, d)) = queue.pop_front() {
            if goals.contains(node) {
                return Some(d);
            }
            for next in self.neighbours.get(node).into_iter().flatten() {
                if seen.insert(next) {
                    queue.push_back((next, d + 1));
                }
            }
        }
        None
    }

    /// Path similarity 1 / (1 + edges); 0 when unconnected.
    pub fn path_similarity(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 1.0;
        }
        self.shortest_path(a, b).map_or(0.0, |d| 1.0 / (1.0 + d as f64))
    }
}

/// Symmetric table of explicitly scored word pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PairTable {
    scores: HashMap<(String, String), f64>,
}

impl PairTable {
    pub fn insert(&mut self, a: &str, b: &str, score: f64) {
        self.scores.insert(Self::key(a, b), score.clamp(0.0, 1.0));
    }

    /// `word1<TAB>word2<TAB>score` rows.
    pub fn read(text: &str) -> Result<Self, SimError> {
        let mut t = PairTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let parsed = match cols.as_slice() {
                [a, b, s] => s.parse::<f64>().ok().map(|s| (a, b, s)),
                _ => None,
            };
            let Some((a, b, s)) = parsed else {
                return Err(SimError::Resource(format!("pair table line {}: expected word, word, score", i + 1)));
            };
            t.insert(&a.to_lowercase(), &b.to_lowercase(), s);
        }
        Ok(t)
    }

    fn key(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.scores.get(&Self::key(a, b)).copied()
    }
}

fn tsv_pairs(text: &str, what: &str) -> Result<Vec<(usize, String, String)>, SimError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('\t') {
            Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => {
                out.push((i + 1, a.trim().to_string(), b.trim().to_string()))
            }
            _ => return Err(SimError::Resource(format!("{what} line {}: expected two tab-separated fields", i + 1))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimilaritySource {
    /// Cosine similarity of word vectors, clamped to [0, 1].
    Embedding(EmbeddingTable),
    /// Path similarity over a synset taxonomy.
    TaxonomyPath(Taxonomy),
    /// Explicit scores for listed pairs.
    PairTable(PairTable),
}

fn vector<'a>(table: &'a EmbeddingTable, word: &str) -> Option<&'a [f64]> {
    table.get(word).or_else(|| table.get(&word.replace(' ', "_")))
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(0.0, 1.0)
    }
}

impl SimilaritySource {
    /// Similarity when this source knows both words.
    pub fn score(&self, a: &str, b: &str) -> Option<f64> {
        match self {
            SimilaritySource::Embedding(t) => Some(cosine(vector(t, a)?, vector(t, b)?)),
            SimilaritySource::TaxonomyPath(t) => {
                (t.contains(a) && t.contains(b)).then(|| t.path_similarity(a, b))
            }
            SimilaritySource::PairTable(t) => t.get(a, b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SimilaritySource::Embedding(_) => "embedding",
            SimilaritySource::TaxonomyPath(_) => "taxonomy-path",
            SimilaritySource::PairTable(_) => "pairs",
        }
    }
}

fn is_number(w: &str) -> bool {
    let digits = w.replace([',', '.'], "");
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) && w.starts_with(|c: char| c.is_ascii_digit())
}

/// Similarity of two normalized tokens: 1 for identical tokens; numbers
/// score 1 only when equal; otherwise the first source knowing both words
/// answers, with Levenshtein similarity as the final fallback.
pub fn word_similarity(a: &str, b: &str, sources: &[SimilaritySource]) -> f64 {
    if a == b {
        return 1.0;
    }
    if is_number(a) && is_number(b) {
        return 0.0;
    }
    sources
        .iter()
        .find_map(|s| s.score(a, b))
        .unwrap_or_else(|| levenshtein_sim(a, b))
}
