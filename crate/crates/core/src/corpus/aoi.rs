//! Text layout and areas of interest.
//!
//! JSON shape:
//!
//! ```json
//! {
//!   "lines": [{"slide": 0, "y": 120.0}],
//!   "words": [{"index": 0, "text": "Once", "slide": 0, "line": 0, "x_min": 10.0, "x_max": 52.0}],
//!   "spans": {"sub_sentence": [[0, 4]], "sentence": [[0, 4]], "paragraph": [[0, 4]], "slide": [[0, 4]]}
//! }
//! ```
//!
//! `line` indexes the global `lines` array. Word-level and whole-text spans
//! are implied.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_path, CorpusError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AoiLevel {
    Word,
    SubSentence,
    Sentence,
    Paragraph,
    Slide,
    WholeText,
}

impl AoiLevel {
    pub const ALL: [AoiLevel; 6] = [
        AoiLevel::Word,
        AoiLevel::SubSentence,
        AoiLevel::Sentence,
        AoiLevel::Paragraph,
        AoiLevel::Slide,
        AoiLevel::WholeText,
    ];

    /// Levels above the word, where saccade and regression features apply.
    pub const REGIONS: [AoiLevel; 5] = [
        AoiLevel::SubSentence,
        AoiLevel::Sentence,
        AoiLevel::Paragraph,
        AoiLevel::Slide,
        AoiLevel::WholeText,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AoiLevel::Word => "word",
            AoiLevel::SubSentence => "sub_sentence",
            AoiLevel::Sentence => "sentence",
            AoiLevel::Paragraph => "paragraph",
            AoiLevel::Slide => "slide",
            AoiLevel::WholeText => "whole_text",
        }
    }
}

impl fmt::Display for AoiLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slide: u32,
    /// Vertical centre in pixels.
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Word {
    pub index: usize,
    pub text: String,
    pub slide: u32,
    pub line: usize,
    pub x_min: f64,
    pub x_max: f64,
}

/// Inclusive range of word indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Span {
    pub first: usize,
    pub last: usize,
}

impl Span {
    pub fn new(first: usize, last: usize) -> Self {
        Span { first, last }
    }

    pub fn contains(&self, word: usize) -> bool {
        self.first <= word && word <= self.last
    }

    /// Spans hold at least one word.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.last + 1 - self.first
    }
}

impl From<[usize; 2]> for Span {
    fn from(v: [usize; 2]) -> Self {
        Span::new(v[0], v[1])
    }
}

impl From<Span> for [usize; 2] {
    fn from(s: Span) -> Self {
        [s.first, s.last]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct DeclaredSpans {
    sub_sentence: Vec<Span>,
    sentence: Vec<Span>,
    paragraph: Vec<Span>,
    slide: Vec<Span>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct LayoutFile {
    lines: Vec<Line>,
    words: Vec<Word>,
    spans: DeclaredSpans,
}

/// Validated text layout.
#[derive(Debug, Clone, PartialEq)]
pub struct AoiLayout {
    pub lines: Vec<Line>,
    pub words: Vec<Word>,
    spans: BTreeMap<AoiLevel, Vec<Span>>,
    /// For each level, the span index of every word.
    owner: BTreeMap<AoiLevel, Vec<usize>>,
    line_words: Vec<Vec<usize>>,
}

impl AoiLayout {
    /// Builds and validates a layout from its parts.
    pub fn new(
        lines: Vec<Line>,
        words: Vec<Word>,
        sub_sentence: Vec<Span>,
        sentence: Vec<Span>,
        paragraph: Vec<Span>,
        slide: Vec<Span>,
    ) -> Result<Self> {
        let n = words.len();
        if n == 0 {
            return Err(CorpusError::InvalidLayout("layout has no words".into()));
        }
        for (i, w) in words.iter().enumerate() {
            if w.index != i {
                return Err(CorpusError::InvalidLayout(format!(
                    "word indices must run 0..{n} without gaps; found {} at position {i}",
                    w.index
                )));
            }
            let line = lines.get(w.line).ok_or_else(|| {
                CorpusError::InvalidLayout(format!("word {i} references missing line {}", w.line))
            })?;
            if line.slide != w.slide {
                return Err(CorpusError::InvalidLayout(format!(
                    "word {i} is on slide {} but its line is on slide {}",
                    w.slide, line.slide
                )));
            }
            if !(w.x_min <= w.x_max) {
                return Err(CorpusError::InvalidLayout(format!("word {i} has x_min > x_max")));
            }
        }

        let mut spans = BTreeMap::new();
        spans.insert(AoiLevel::Word, (0..n).map(|i| Span::new(i, i)).collect());
        spans.insert(AoiLevel::SubSentence, sub_sentence);
        spans.insert(AoiLevel::Sentence, sentence);
        spans.insert(AoiLevel::Paragraph, paragraph);
        spans.insert(AoiLevel::Slide, slide);
        spans.insert(AoiLevel::WholeText, vec![Span::new(0, n - 1)]);

        let mut owner = BTreeMap::new();
        for (&level, level_spans) in &spans {
            let mut own = vec![usize::MAX; n];
            for (s, span) in level_spans.iter().enumerate() {
                if span.first > span.last || span.last >= n {
                    return Err(CorpusError::InvalidLayout(format!(
                        "{level} span [{}, {}] is out of range",
                        span.first, span.last
                    )));
                }
                for w in span.first..=span.last {
                    if own[w] != usize::MAX {
                        return Err(CorpusError::OverlapError { level, word_index: w });
                    }
                    own[w] = s;
                }
            }
            if own.contains(&usize::MAX) {
                return Err(CorpusError::CoverageGap(level));
            }
            owner.insert(level, own);
        }

        let mut line_words = vec![Vec::new(); lines.len()];
        for w in &words {
            line_words[w.line].push(w.index);
        }

        Ok(AoiLayout {
            lines,
            words,
            spans,
            owner,
            line_words,
        })
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn spans(&self, level: AoiLevel) -> &[Span] {
        &self.spans[&level]
    }

    /// Index of the span at `level` that contains `word`.
    pub fn span_of(&self, level: AoiLevel, word: usize) -> usize {
        self.owner[&level][word]
    }

    /// Line indices on a slide, in declaration order.
    pub fn lines_on_slide(&self, slide: u32) -> impl Iterator<Item = usize> + '_ {
        self.lines
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.slide == slide)
            .map(|(i, _)| i)
    }

    pub fn words_on_line(&self, line: usize) -> impl Iterator<Item = &Word> + '_ {
        self.line_words[line].iter().map(move |&i| &self.words[i])
    }

    pub fn to_json(&self) -> String {
        let file = LayoutFile {
            lines: self.lines.clone(),
            words: self.words.clone(),
            spans: DeclaredSpans {
                sub_sentence: self.spans[&AoiLevel::SubSentence].clone(),
                sentence: self.spans[&AoiLevel::Sentence].clone(),
                paragraph: self.spans[&AoiLevel::Paragraph].clone(),
                slide: self.spans[&AoiLevel::Slide].clone(),
            },
        };
        serde_json::to_string_pretty(&file).expect("layout serializes")
    }
}

pub fn parse_aoi_layout(path: &Path) -> Result<AoiLayout> {
    read_aoi_layout(&read_path(path)?)
}

pub fn read_aoi_layout(json: &str) -> Result<AoiLayout> {
    let file: LayoutFile =
        serde_json::from_str(json).map_err(|e| CorpusError::InvalidLayout(e.to_string()))?;
    let s = file.spans;
    AoiLayout::new(file.lines, file.words, s.sub_sentence, s.sentence, s.paragraph, s.slide)
}
