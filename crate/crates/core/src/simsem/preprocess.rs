//! Text normalization ahead of similarity scoring: sentence splitting,
//! tokenization, noise removal, entity substitution, phrase merging and
//! lemmatization.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::SimError;
use crate::corpus::{ParsedSentence, TokenQuartet};

/// Universal POS tags counted as concepts.
pub const CONTENT_POS: [&str; 6] = ["NOUN", "PROPN", "VERB", "ADJ", "ADV", "NUM"];

const DEFAULT_STOPWORDS: &str = "a an the and or but if of at by for with about against between into through \
during before after above below to from up down in on off over under again further then once here there when \
where why how all any both each few more most other some such no nor not only own same so than too very s t \
can will just don should now is am are was were be been being have has had having do does did doing i me my \
myself we our ours ourselves you your yours yourself yourselves he him his himself she her hers herself it its \
itself they them their theirs themselves what which who whom this that these those";

const ABBREVIATIONS: [&str; 14] = [
    "mr", "mrs", "ms", "dr", "st", "jr", "sr", "prof", "vs", "etc", "e.g", "i.e", "no", "mt",
];

/// Word lists that drive normalization. Lookups are on lowercase text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PreprocessResources {
    pub stopwords: HashSet<String>,
    pub lemma_map: HashMap<String, String>,
    /// Multi-token phrases, each at least two tokens.
    pub phrase_lexicon: Vec<Vec<String>>,
    /// Surface token sequence → canonical entity string.
    pub substitution_map: Vec<(Vec<String>, String)>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_lowercase).collect()
}

impl PreprocessResources {
    /// A general English stopword list and no other resources.
    pub fn english() -> Self {
        PreprocessResources {
            stopwords: words(DEFAULT_STOPWORDS).into_iter().collect(),
            ..Default::default()
        }
    }

    /// Builds resources from file contents. Without a stopword list the
    /// built-in English list is used.
    pub fn from_texts(
        stopwords: Option<&str>,
        lemma_map: Option<&str>,
        phrases: Option<&str>,
        substitutions: Option<&str>,
    ) -> Result<Self, SimError> {
        Ok(PreprocessResources {
            stopwords: match stopwords {
                Some(t) => Self::read_stopwords(t),
                None => Self::english().stopwords,
            },
            lemma_map: lemma_map.map(Self::read_lemma_map).transpose()?.unwrap_or_default(),
            phrase_lexicon: phrases.map(Self::read_phrases).transpose()?.unwrap_or_default(),
            substitution_map: substitutions.map(Self::read_substitutions).transpose()?.unwrap_or_default(),
        })
    }

    /// One stopword per line.
    pub fn read_stopwords(text: &str) -> HashSet<String> {
        content_lines(text).map(|(_, l)| l.to_lowercase()).collect()
    }

    /// `token<TAB>lemma` rows.
    pub fn read_lemma_map(text: &str) -> Result<HashMap<String, String>, SimError> {
        content_lines(text)
            .map(|(n, l)| match l.split_once('\t') {
                Some((a, b)) => Ok((a.trim().to_lowercase(), b.trim().to_lowercase())),
                None => Err(SimError::Resource(format!("lemma map line {n}: expected token<TAB>lemma"))),
            })
            .collect()
    }

    /// One phrase per line, tokens separated by spaces.
    pub fn read_phrases(text: &str) -> Result<Vec<Vec<String>>, SimError> {
        content_lines(text)
            .map(|(n, l)| {
                let p = words(l);
                if p.len() < 2 {
                    Err(SimError::Resource(format!("phrase line {n}: a phrase needs at least two tokens")))
                } else {
                    Ok(p)
                }
            })
            .collect()
    }

    /// `surface form<TAB>canonical` rows; the surface may span tokens.
    pub fn read_substitutions(text: &str) -> Result<Vec<(Vec<String>, String)>, SimError> {
        content_lines(text)
            .map(|(n, l)| match l.split_once('\t') {
                Some((a, b)) if !words(a).is_empty() && !b.trim().is_empty() => {
                    Ok((words(a), b.trim().to_lowercase()))
                }
                _ => Err(SimError::Resource(format!(
                    "substitution line {n}: expected surface<TAB>canonical"
                ))),
            })
            .collect()
    }
}

/// One normalized token.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Token {
    /// Normalized form used for similarity and concepts.
    pub lemma: String,
    /// Lowercased surface words this token was built from.
    pub surface: String,
    /// Syntactic properties, when the token came from a parse.
    #[serde(skip)]
    pub quartet: Option<TokenQuartet>,
    /// Whether the token counts as a concept.
    pub content: bool,
}

/// A scoring unit (sentence) after normalization.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Unit {
    pub tokens: Vec<Token>,
    pub element: Option<String>,
}

impl Unit {
    pub fn lemmas(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.lemma.clone()).collect()
    }
}

/// A token under construction; `members` index the input tokens.
#[derive(Debug, Clone)]
struct Piece {
    key: String,
    words: Vec<String>,
    members: Vec<usize>,
    canonical: Option<String>,
    merged_phrase: bool,
}

fn is_punctuation(form: &str, pos: Option<&str>) -> bool {
    matches!(pos, Some("PUNCT") | Some("SYM")) || !form.chars().any(char::is_alphanumeric)
}

/// Replaces the longest matching pattern at each position, scanning left
/// to right. `patterns` map token sequences to the replacement key.
fn merge_longest(pieces: Vec<Piece>, patterns: &[(Vec<String>, String)], phrase: bool) -> Vec<Piece> {
    let mut out = Vec::with_capacity(pieces.len());
    let mut i = 0;
    while i < pieces.len() {
        let best = patterns
            .iter()
            .filter(|(p, _)| {
                i + p.len() <= pieces.len() && p.iter().zip(&pieces[i..]).all(|(w, piece)| *w == piece.key)
            })
            .max_by_key(|(p, _)| p.len());
        match best {
            Some((p, replacement)) => {
                let span = &pieces[i..i + p.len()];
                out.push(Piece {
                    key: replacement.clone(),
                    words: span.iter().flat_map(|s| s.words.iter().cloned()).collect(),
                    members: span.iter().flat_map(|s| s.members.iter().copied()).collect(),
                    canonical: if phrase { span[0].canonical.clone() } else { Some(replacement.clone()) },
                    merged_phrase: phrase,
                });
                i += p.len();
            }
            None => {
                out.push(pieces[i].clone());
                i += 1;
            }
        }
    }
    out
}

/// Input token: lowercased form, optional lemma and quartet.
struct Raw<'a> {
    form: String,
    lemma: Option<String>,
    quartet: Option<&'a TokenQuartet>,
}

fn normalize(raw: &[Raw<'_>], resources: &PreprocessResources) -> Vec<Token> {
    let pieces: Vec<Piece> = raw
        .iter()
        .enumerate()
        .filter(|(_, r)| !is_punctuation(&r.form, r.quartet.map(|q| q.pos.as_str())))
        .map(|(i, r)| Piece {
            key: r.form.clone(),
            words: vec![r.form.clone()],
            members: vec![i],
            canonical: None,
            merged_phrase: false,
        })
        .collect();
    // substitution runs before stopword removal so pronoun entities survive
    let pieces: Vec<Piece> = merge_longest(pieces, &resources.substitution_map, false)
        .into_iter()
        .filter(|p| p.canonical.is_some() || !resources.stopwords.contains(&p.key))
        .collect();
    let phrases: Vec<(Vec<String>, String)> = resources
        .phrase_lexicon
        .iter()
        .map(|p| (p.clone(), p.join(" ")))
        .collect();
    let pieces = merge_longest(pieces, &phrases, true);

    pieces
        .into_iter()
        .map(|p| {
            let quartet = representative(&p.members, raw);
            let base = if p.merged_phrase {
                p.key.clone()
            } else if let Some(c) = &p.canonical {
                c.clone()
            } else {
                raw[p.members[0]].lemma.clone().unwrap_or_else(|| p.key.clone())
            };
            let lemma = resources
                .lemma_map
                .get(&base)
                .or_else(|| resources.lemma_map.get(&p.key))
                .cloned()
                .unwrap_or(base);
            let content = p.merged_phrase
                || p.canonical.is_some()
                || quartet
                    .as_ref()
                    .is_none_or(|q| CONTENT_POS.contains(&q.pos.as_str()) || q.pos == "_" || q.pos.is_empty());
            Token {
                lemma,
                surface: p.words.join(" "),
                quartet,
                content,
            }
        })
        .collect()
}

/// Quartet of a (possibly merged) token: the first member whose head lies
/// outside the merged span.
fn representative(members: &[usize], raw: &[Raw<'_>]) -> Option<TokenQuartet> {
    let inside: HashSet<usize> = members.iter().map(|m| m + 1).collect();
    let pick = members
        .iter()
        .find(|&&m| raw[m].quartet.is_some_and(|q| !inside.contains(&q.head)))
        .or(members.first())?;
    raw[*pick].quartet.cloned()
}

/// Normalizes one parsed sentence.
pub fn preprocess_parsed(sentence: &ParsedSentence, resources: &PreprocessResources) -> Unit {
    let raw: Vec<Raw<'_>> = sentence
        .tokens
        .iter()
        .map(|q| Raw {
            form: q.form.to_lowercase(),
            lemma: Some(q.lemma.to_lowercase()),
            quartet: Some(q),
        })
        .collect();
    Unit {
        tokens: normalize(&raw, resources),
        element: sentence.element.clone(),
    }
}

/// Splits raw text into sentences at `.`, `!` or `?` followed by
/// whitespace, except after common abbreviations and single-letter
/// initials.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..chars.len() {
        if !matches!(chars[i], '.' | '!' | '?') {
            continue;
        }
        let at_break = chars.get(i + 1).is_none_or(|c| c.is_whitespace() || matches!(c, '"' | '\'' | '”' | ')'));
        if !at_break {
            continue;
        }
        if chars[i] == '.' {
            let word: String = chars[start..i]
                .iter()
                .rev()
                .take_while(|c| !c.is_whitespace())
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect::<String>()
                .to_lowercase();
            let word = word.trim_start_matches(|c: char| !c.is_alphanumeric());
            let initial = word.chars().count() == 1 && word.chars().all(char::is_alphabetic);
            if initial || ABBREVIATIONS.contains(&word) {
                continue;
            }
        }
        // swallow closing quotes/brackets into this sentence
        let mut end = i + 1;
        while end < chars.len() && matches!(chars[end], '"' | '\'' | '”' | ')') {
            end += 1;
        }
        let s: String = chars[start..end].iter().collect();
        if !s.trim().is_empty() {
            out.push(s.trim().to_string());
        }
        start = end;
    }
    let rest: String = chars[start..].iter().collect();
    if !rest.trim().is_empty() {
        out.push(rest.trim().to_string());
    }
    out
}

/// Words (letters/digits with inner apostrophes or hyphens) and single
/// punctuation characters.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let chars: Vec<char> = sentence.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric()
                    || (matches!(chars[i], '\'' | '’' | '-' | '.' | ',')
                        && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
                        && (chars[i] == '\'' || chars[i] == '’' || chars[i] == '-' || chars[i - 1].is_ascii_digit())))
            {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else {
            out.push(c.to_string());
            i += 1;
        }
    }
    out
}

/// Normalizes raw text into one unit per sentence.
pub fn preprocess_text(text: &str, resources: &PreprocessResources) -> Vec<Unit> {
    split_sentences(text)
        .iter()
        .map(|s| {
            let raw: Vec<Raw<'_>> = tokenize(s)
                .into_iter()
                .map(|t| Raw {
                    form: t.to_lowercase(),
                    lemma: None,
                    quartet: None,
                })
                .collect();
            Unit {
                tokens: normalize(&raw, resources),
                element: None,
            }
        })
        .filter(|u| !u.tokens.is_empty())
        .collect()
}

/// Token lemmas per sentence of raw text.
pub fn preprocess(text: &str, resources: &PreprocessResources) -> Vec<Vec<String>> {
    preprocess_text(text, resources).iter().map(Unit::lemmas).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn camel_resources() -> PreprocessResources {
        PreprocessResources {
            stopwords: ["the", "a", "an", "to", "on", "with", "and", "some"].map(String::from).into(),
            lemma_map: HashMap::from([("came".into(), "come".into()), ("said".into(), "say".into())]),
            phrase_lexicon: vec![words("saddle horse back"), words("camel o camel")],
            substitution_map: vec![
                (words("him"), "camel".into()),
                (words("his"), "horse".into()),
                (words("he"), "horse".into()),
                (words("trot"), "work".into()),
                (words("rest of us"), "animal".into()),
            ],
        }
    }

    #[test]
    fn worked_example_lines() {
        let r = camel_resources();
        let line1 = preprocess(
            "Presently the horse came to him on Monday morning, with a saddle on his back. \
             The horse said, Camel, O Camel, come out and trot like the rest of us.",
            &r,
        );
        assert_eq!(
            line1,
            vec![
                words("presently horse come camel monday morning"),
                words("horse say"),
            ]
            .into_iter()
            .zip([vec!["saddle horse back"], vec!["camel o camel", "come", "out", "work", "like", "animal"]])
            .map(|(mut a, b)| {
                a.extend(b.into_iter().map(String::from));
                a
            })
            .collect::<Vec<_>>()
        );
        let line2 = preprocess("Initially, a horse came to the camel and he said to do some work.", &r);
        assert_eq!(line2, vec![words("initially horse come camel horse say do work")]);
        assert!(preprocess("", &r).is_empty());
    }

    #[test]
    fn substituted_pronouns_survive_stopwords() {
        let mut r = camel_resources();
        r.stopwords.extend(["he", "him", "of"].map(String::from));
        assert_eq!(preprocess("He met him with the rest of us.", &r), vec![words("horse met camel animal")]);
    }

    #[test]
    fn abbreviations_do_not_split() {
        let s = split_sentences("Mr. Smith met Dr. J. Watson. They talked! Done?");
        assert_eq!(s, vec!["Mr. Smith met Dr. J. Watson.", "They talked!", "Done?"]);
    }

    #[test]
    fn tokens_keep_inner_marks() {
        assert_eq!(
            tokenize("Don't stop, well-known 1,829.5 times."),
            ["Don't", "stop", ",", "well-known", "1,829.5", "times", "."]
        );
    }

    #[test]
    fn merged_tokens_take_the_span_head() {
        let q = |form: &str, head: usize, rel: &str| TokenQuartet {
            form: form.into(),
            lemma: form.into(),
            pos: "NOUN".into(),
            dep_rel: rel.into(),
            dep_dist: 0,
            head,
        };
        // "paper money aristocracy": aristocracy heads the compound
        let s = ParsedSentence {
            tokens: vec![q("paper", 2, "compound"), q("money", 3, "compound"), q("aristocracy", 0, "ROOT")],
            element: None,
        };
        let r = PreprocessResources {
            phrase_lexicon: vec![words("paper money aristocracy")],
            ..Default::default()
        };
        let u = preprocess_parsed(&s, &r);
        assert_eq!(u.tokens.len(), 1);
        assert_eq!(u.tokens[0].lemma, "paper money aristocracy");
        assert_eq!(u.tokens[0].quartet.as_ref().unwrap().dep_rel, "ROOT");
    }
}
