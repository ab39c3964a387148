//! Readers and writers for every file format the toolkit consumes.
//!
//! Each reader comes in two flavours: `parse_*` takes a path, `read_*` takes
//! any `Read` (or a `&str`) so the formats can be tested without touching the
//! filesystem.

mod aoi;
mod conllu;
mod embeddings;
mod gaze;
mod lexicon;
mod textgrid;
mod timeline;

use std::path::PathBuf;

pub use aoi::{parse_aoi_layout, read_aoi_layout, AoiLayout, AoiLevel, Line, Span, Word};
pub use conllu::{parse_conllu, read_conllu, ParsedSentence, TokenQuartet};
pub use embeddings::{parse_embeddings, read_embeddings, EmbeddingTable};
pub use gaze::{
    parse_gaze_log, read_gaze_log, write_gaze_log, EventKind, Eye, GazeEvent, GazeLabel, GazeTrace,
    SaccadeInfo,
};
pub use lexicon::{
    parse_rating_lexicon, read_rating_lexicon, rescale_rating, LexiconSpec, PsycholinguisticFactor,
    RatingLexicon,
};
pub use textgrid::{read_textgrid, textgrid_to_timeline, IntervalTier, TextGrid};
pub use timeline::{
    parse_timeline, read_timeline, write_timeline, Interval, IntervalKind, TranscriptTimeline,
};

/// Errors raised while reading corpus files.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("events are not strictly increasing in start time at line {line}")]
    UnsortedEvents { line: usize },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("level `{0}` leaves at least one word uncovered")]
    CoverageGap(AoiLevel),
    #[error("level `{level}` covers word {word_index} more than once")]
    OverlapError { level: AoiLevel, word_index: usize },
    #[error("sentence {sentence}, token {token}: head index out of range")]
    BadHead { sentence: usize, token: usize },
    #[error("line {0}: vector dimension differs from the table dimension")]
    DimensionMismatch(usize),
    #[error("row {0} overlaps the previous interval")]
    IntervalOverlap(usize),
    #[error("row {0}: boundary marker away from the ends of the recording")]
    InteriorBoundary(usize),
    #[error("rating for `{0}` outside the declared source range")]
    OutOfRange(String),
    #[error("textgrid: {0}")]
    TextGrid(String),
}

pub type Result<T> = std::result::Result<T, CorpusError>;

pub(crate) fn read_path(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn malformed(line: usize, reason: impl Into<String>) -> CorpusError {
    CorpusError::MalformedRow {
        line,
        reason: reason.into(),
    }
}
