//! Psycholinguistic word-rating lexicons.
//!
//! Input is a TSV of `lemma<TAB>rating` on an arbitrary source scale whose
//! bounds are declared by the caller. Ratings are rescaled to
//! `1..=scale_points` and rounded half away from zero.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{malformed, read_path, CorpusError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PsycholinguisticFactor {
    WordFrequency,
    AgeOfAcquisition,
    Familiarity,
    Imagery,
    Concreteness,
    Emotion,
}

impl PsycholinguisticFactor {
    pub const ALL: [PsycholinguisticFactor; 6] = [
        PsycholinguisticFactor::WordFrequency,
        PsycholinguisticFactor::AgeOfAcquisition,
        PsycholinguisticFactor::Familiarity,
        PsycholinguisticFactor::Imagery,
        PsycholinguisticFactor::Concreteness,
        PsycholinguisticFactor::Emotion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PsycholinguisticFactor::WordFrequency => "word_frequency",
            PsycholinguisticFactor::AgeOfAcquisition => "age_of_acquisition",
            PsycholinguisticFactor::Familiarity => "familiarity",
            PsycholinguisticFactor::Imagery => "imagery",
            PsycholinguisticFactor::Concreteness => "concreteness",
            PsycholinguisticFactor::Emotion => "emotion",
        }
    }
}

impl fmt::Display for PsycholinguisticFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PsycholinguisticFactor {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Self::ALL
            .into_iter()
            .find(|f| f.name() == key || (key == "aoa" && *f == Self::AgeOfAcquisition))
            .ok_or_else(|| format!("unknown psycholinguistic factor `{s}`"))
    }
}

/// How to read a raw lexicon file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexiconSpec {
    pub factor: PsycholinguisticFactor,
    pub scale_points: u8,
    pub source_min: f64,
    pub source_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingLexicon {
    pub factor: PsycholinguisticFactor,
    pub scale_points: u8,
    pub entries: HashMap<String, u8>,
}

impl RatingLexicon {
    pub fn rating(&self, lemma: &str) -> Option<u8> {
        self.entries.get(lemma).copied()
    }
}

/// Maps `value` from `[min, max]` onto `1..=scale_points`.
pub fn rescale_rating(value: f64, min: f64, max: f64, scale_points: u8) -> Option<u8> {
    if !(min < max) || !(min..=max).contains(&value) || scale_points < 2 {
        return None;
    }
    let r = 1.0 + f64::from(scale_points - 1) * (value - min) / (max - min);
    Some(r.round() as u8)
}

pub fn parse_rating_lexicon(path: &Path, spec: LexiconSpec) -> Result<RatingLexicon> {
    read_rating_lexicon(&read_path(path)?, spec)
}

pub fn read_rating_lexicon(text: &str, spec: LexiconSpec) -> Result<RatingLexicon> {
    if !(spec.source_min < spec.source_max) || spec.scale_points < 2 {
        return Err(malformed(0, "declared source range or scale is empty"));
    }
    let mut entries = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t').map(str::trim);
        let (Some(lemma), Some(value)) = (cols.next(), cols.next()) else {
            return Err(malformed(line_no, "expected lemma<TAB>rating"));
        };
        let Ok(value) = value.parse::<f64>() else {
            if entries.is_empty() {
                // header row
                continue;
            }
            return Err(malformed(line_no, "rating is not a number"));
        };
        let rating = rescale_rating(value, spec.source_min, spec.source_max, spec.scale_points)
            .ok_or_else(|| CorpusError::OutOfRange(lemma.to_string()))?;
        let lemma = lemma.to_lowercase();
        if entries.insert(lemma.clone(), rating).is_some() {
            log::warn!("lexicon lemma `{lemma}` repeated at line {line_no}; keeping the last rating");
        }
    }
    Ok(RatingLexicon {
        factor: spec.factor,
        scale_points: spec.scale_points,
        entries,
    })
}
