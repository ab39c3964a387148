//! Readability indices, type-token lexical variation and psycholinguistic
//! rating-bin profiles of a text.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::corpus::{PsycholinguisticFactor, RatingLexicon};
use crate::scalar::Real;
use crate::simsem::preprocess::{split_sentences, tokenize};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LingError {
    #[error("no tokens")]
    EmptyInput,
    #[error("text has no sentences or no words")]
    NoSentences,
    #[error("missing resource: {0}")]
    MissingResource(&'static str),
    #[error("{factor} lexicon has {points} scale points; 9 are required")]
    ScaleMismatch { factor: PsycholinguisticFactor, points: u8 },
}

/// Words whose vowel-group count misleads the heuristic.
const SYLLABLE_EXCEPTIONS: [(&str, usize); 12] = [
    ("area", 3),
    ("being", 2),
    ("business", 2),
    ("create", 2),
    ("every", 2),
    ("idea", 3),
    ("poem", 2),
    ("quiet", 2),
    ("science", 2),
    ("real", 2),
    ("lion", 2),
    ("going", 2),
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Heuristic syllable count: vowel groups (a, e, i, o, u, y), minus a
/// silent final `e` unless the word ends in consonant + `le`; at least 1.
pub fn count_syllables(word: &str) -> usize {
    let w: String = word.to_lowercase().chars().filter(|c| c.is_alphabetic()).collect();
    if let Some(&(_, n)) = SYLLABLE_EXCEPTIONS.iter().find(|(e, _)| *e == w) {
        return n;
    }
    let chars: Vec<char> = w.chars().collect();
    let mut groups = 0usize;
    let mut prev_vowel = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = chars.len();
    if n >= 2 && chars[n - 1] == 'e' && !is_vowel(chars[n - 2]) {
        let consonant_le = n >= 3 && chars[n - 2] == 'l' && !is_vowel(chars[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TextProfile {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    /// Words of three or more syllables.
    pub complex_words: usize,
    /// Letters only.
    pub characters: usize,
    /// Words missing from the easy-word list, when one was given.
    pub difficult_words: Option<usize>,
}

/// Lowercased word tokens (tokens containing a letter or digit).
pub fn word_tokens(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .map(|t| t.to_lowercase())
        .collect()
}

pub fn text_profile(text: &str, easy_words: Option<&HashSet<String>>) -> TextProfile {
    let sentences: Vec<Vec<String>> = split_sentences(text)
        .iter()
        .map(|s| word_tokens(s))
        .filter(|w| !w.is_empty())
        .collect();
    let words: Vec<&String> = sentences.iter().flatten().collect();
    let syllables: Vec<usize> = words.iter().map(|w| count_syllables(w)).collect();
    TextProfile {
        words: words.len(),
        sentences: sentences.len(),
        syllables: syllables.iter().sum(),
        complex_words: syllables.iter().filter(|&&s| s >= 3).count(),
        characters: words.iter().map(|w| w.chars().filter(|c| c.is_alphabetic()).count()).sum(),
        difficult_words: easy_words.map(|easy| words.iter().filter(|w| !easy.contains(w.as_str())).count()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Readability<T> {
    pub flesch_reading_ease: T,
    pub fog: T,
    pub smog: T,
    pub ari: T,
    pub coleman_liau: T,
    pub dale_chall: Option<T>,
}

/// Published readability formulas. With `require_dale_chall` a profile
/// lacking a difficult-word count is an error; otherwise Dale-Chall is
/// simply absent.
pub fn readability<T: Real>(profile: &TextProfile, require_dale_chall: bool) -> Result<Readability<T>, LingError> {
    if profile.sentences == 0 || profile.words == 0 {
        return Err(LingError::NoSentences);
    }
    let w = T::of_usize(profile.words);
    let s = T::of_usize(profile.sentences);
    let hundred = T::lit(100.0);
    let wps = w / s;
    let complex_pct = hundred * T::of_usize(profile.complex_words) / w;
    let dale_chall = match profile.difficult_words {
        Some(d) => {
            let pdw = hundred * T::of_usize(d) / w;
            let raw = T::lit(0.1579) * pdw + T::lit(0.0496) * wps;
            Some(if pdw > T::lit(5.0) { raw + T::lit(3.6365) } else { raw })
        }
        None if require_dale_chall => return Err(LingError::MissingResource("dale_chall easy-word list")),
        None => None,
    };
    Ok(Readability {
        flesch_reading_ease: T::lit(206.835) - T::lit(1.015) * wps - T::lit(84.6) * T::of_usize(profile.syllables) / w,
        fog: T::lit(0.4) * (wps + complex_pct),
        smog: T::lit(1.0430) * (T::of_usize(profile.complex_words) * T::lit(30.0) / s).sqrt() + T::lit(3.1291),
        ari: T::lit(4.71) * T::of_usize(profile.characters) / w + T::lit(0.5) * wps - T::lit(21.43),
        coleman_liau: T::lit(0.0588) * (hundred * T::of_usize(profile.characters) / w)
            - T::lit(0.296) * (hundred * s / w)
            - T::lit(15.8),
        dale_chall,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TtrFamily<T> {
    pub ttr: T,
    pub rttr: T,
    pub cttr: T,
    /// Absent for a single token.
    pub log_ttr: Option<T>,
    /// Absent below 50 tokens.
    pub msttr50: Option<T>,
    pub ndw: usize,
    /// Absent when every token is distinct.
    pub uber: Option<T>,
}

fn type_count<S: AsRef<str>>(tokens: &[S]) -> usize {
    tokens.iter().map(AsRef::as_ref).collect::<HashSet<&str>>().len()
}

pub fn ttr_family<T: Real, S: AsRef<str>>(tokens: &[S]) -> Result<TtrFamily<T>, LingError> {
    if tokens.is_empty() {
        return Err(LingError::EmptyInput);
    }
    let types = type_count(tokens);
    let (n, t) = (T::of_usize(tokens.len()), T::of_usize(types));
    let segments: Vec<T> = tokens
        .chunks_exact(50)
        .map(|seg| T::of_usize(type_count(seg)) / T::lit(50.0))
        .collect();
    Ok(TtrFamily {
        ttr: t / n,
        rttr: t / n.sqrt(),
        cttr: t / (T::lit(2.0) * n).sqrt(),
        log_ttr: (tokens.len() > 1).then(|| t.ln() / n.ln()),
        msttr50: crate::scalar::mean(&segments),
        ndw: types,
        uber: (types < tokens.len()).then(|| n.ln().powi(2) / (n.ln() - t.ln())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinShares {
    pub low_pct: f64,
    pub mid_pct: f64,
    pub high_pct: f64,
}

/// Per factor: shares of in-lexicon tokens rated 1–3, 4–6 and 7–9. A factor
/// none of whose tokens are rated maps to `None`.
pub type RatingBinProfile = BTreeMap<PsycholinguisticFactor, Option<BinShares>>;

pub fn rating_bin_profile<S: AsRef<str>>(tokens: &[S], lexicons: &[RatingLexicon]) -> Result<RatingBinProfile, LingError> {
    let mut out = BTreeMap::new();
    for lex in lexicons {
        if lex.scale_points != 9 {
            return Err(LingError::ScaleMismatch {
                factor: lex.factor,
                points: lex.scale_points,
            });
        }
        let mut bins = [0usize; 3];
        for r in tokens.iter().filter_map(|t| lex.rating(&t.as_ref().to_lowercase())) {
            bins[usize::from((r.clamp(1, 9) - 1) / 3)] += 1;
        }
        let total: usize = bins.iter().sum();
        let pct = |k: usize| 100.0 * bins[k] as f64 / total as f64;
        out.insert(
            lex.factor,
            (total > 0).then(|| BinShares {
                low_pct: pct(0),
                mid_pct: pct(1),
                high_pct: pct(2),
            }),
        );
    }
    Ok(out)
}

/// Named feature values of one document, in a stable column order.
pub fn document_features(
    text: &str,
    easy_words: Option<&HashSet<String>>,
    lexicons: &[RatingLexicon],
) -> Result<Vec<(String, Option<f64>)>, LingError> {
    let profile = text_profile(text, easy_words);
    let r = readability::<f64>(&profile, false)?;
    let tokens = word_tokens(text);
    let ttr = ttr_family::<f64, _>(&tokens)?;
    let mut row: Vec<(String, Option<f64>)> = vec![
        ("words".into(), Some(profile.words as f64)),
        ("sentences".into(), Some(profile.sentences as f64)),
        ("syllables".into(), Some(profile.syllables as f64)),
        ("complex_words".into(), Some(profile.complex_words as f64)),
        ("characters".into(), Some(profile.characters as f64)),
        ("FRE".into(), Some(r.flesch_reading_ease)),
        ("Fog".into(), Some(r.fog)),
        ("SMOG".into(), Some(r.smog)),
        ("ARI".into(), Some(r.ari)),
        ("ColemanLiau".into(), Some(r.coleman_liau)),
        ("DaleChall".into(), r.dale_chall),
        ("TTR".into(), Some(ttr.ttr)),
        ("RTTR".into(), Some(ttr.rttr)),
        ("CTTR".into(), Some(ttr.cttr)),
        ("LogTTR".into(), ttr.log_ttr),
        ("MSTTR50".into(), ttr.msttr50),
        ("NDW".into(), Some(ttr.ndw as f64)),
        ("Uber".into(), ttr.uber),
    ];
    for (factor, shares) in rating_bin_profile(&tokens, lexicons)? {
        for (bin, v) in [
            ("low", shares.map(|s| s.low_pct)),
            ("mid", shares.map(|s| s.mid_pct)),
            ("high", shares.map(|s| s.high_pct)),
        ] {
            row.push((format!("{factor}_{bin}_pct"), v));
        }
    }
    Ok(row)
}
