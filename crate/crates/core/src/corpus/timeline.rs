//! Speech/pause interval timelines.
//!
//! Tab-separated, with columns `start_s`, `end_s`, `kind`, `syllables`; `kind` is one of
//! `speech`, `bp` (brief pause), `lp` (long pause), `fp` (filled pause) or
//! `$` (recording boundary). Syllables are given for speech rows only.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{malformed, read_path, CorpusError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalKind {
    Speech,
    SilentPause,
    FilledPause,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start_s: f64,
    pub end_s: f64,
    pub kind: IntervalKind,
    pub syllables: u32,
}

impl Interval {
    pub fn new(start_s: f64, end_s: f64, kind: IntervalKind, syllables: u32) -> Self {
        Interval {
            start_s,
            end_s,
            kind,
            syllables,
        }
    }

    pub fn duration(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TranscriptTimeline {
    pub intervals: Vec<Interval>,
}

impl TranscriptTimeline {
    /// Validates ordering and relabels leading and trailing non-speech
    /// intervals as boundaries. `rows` are 1-based row numbers for errors.
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Result<Self> {
        for (i, iv) in intervals.iter().enumerate() {
            if !(iv.end_s > iv.start_s) {
                return Err(malformed(i + 1, "end_s must be greater than start_s"));
            }
            if i > 0 && iv.start_s < intervals[i - 1].end_s {
                return Err(CorpusError::IntervalOverlap(i + 1));
            }
        }
        let first_speech = intervals.iter().position(|iv| iv.kind == IntervalKind::Speech);
        let last_speech = intervals.iter().rposition(|iv| iv.kind == IntervalKind::Speech);
        let (lo, hi) = match (first_speech, last_speech) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => (intervals.len(), intervals.len()),
        };
        for (i, iv) in intervals.iter_mut().enumerate() {
            let outside = i < lo || i > hi;
            if outside {
                iv.kind = IntervalKind::Boundary;
                iv.syllables = 0;
            } else if iv.kind == IntervalKind::Boundary {
                return Err(CorpusError::InteriorBoundary(i + 1));
            }
        }
        Ok(TranscriptTimeline { intervals })
    }

    /// Intervals with the boundary trims removed.
    pub fn inner(&self) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(|iv| iv.kind != IntervalKind::Boundary)
    }
}

pub fn parse_timeline(path: &Path) -> Result<TranscriptTimeline> {
    read_timeline(&read_path(path)?)
}

pub fn read_timeline(text: &str) -> Result<TranscriptTimeline> {
    let mut intervals = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if intervals.is_empty() && cols.first() == Some(&"start_s") {
            continue;
        }
        if cols.len() < 3 {
            return Err(malformed(line_no, "expected start_s, end_s, kind[, syllables]"));
        }
        let start_s: f64 = cols[0].parse().map_err(|_| malformed(line_no, "bad start_s"))?;
        let end_s: f64 = cols[1].parse().map_err(|_| malformed(line_no, "bad end_s"))?;
        let kind = match cols[2] {
            "speech" => IntervalKind::Speech,
            "bp" | "lp" | "sp" => IntervalKind::SilentPause,
            "fp" => IntervalKind::FilledPause,
            "$" => IntervalKind::Boundary,
            other => return Err(malformed(line_no, format!("unknown interval kind {other:?}"))),
        };
        let syllables = match cols.get(3).copied().unwrap_or("") {
            "" => 0,
            raw => raw.parse().map_err(|_| malformed(line_no, "bad syllable count"))?,
        };
        if kind != IntervalKind::Speech && syllables != 0 {
            return Err(malformed(line_no, "syllables are only allowed on speech rows"));
        }
        intervals.push(Interval::new(start_s, end_s, kind, syllables));
    }
    TranscriptTimeline::from_intervals(intervals)
}

pub fn write_timeline<W: Write>(timeline: &TranscriptTimeline, mut out: W) -> std::io::Result<()> {
    writeln!(out, "start_s\tend_s\tkind\tsyllables")?;
    for iv in &timeline.intervals {
        let (kind, syl) = match iv.kind {
            IntervalKind::Speech => ("speech", iv.syllables.to_string()),
            IntervalKind::SilentPause => ("lp", String::new()),
            IntervalKind::FilledPause => ("fp", String::new()),
            IntervalKind::Boundary => ("$", String::new()),
        };
        writeln!(out, "{}\t{}\t{kind}\t{syl}", iv.start_s, iv.end_s)?;
    }
    Ok(())
}
