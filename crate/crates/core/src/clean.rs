//! Gaze noise removal and alignment of fixations to the text layout.
//!
//! The pipeline ([`clean_trace`]) drops blinks, removes fixations outside
//! the duration window, snaps every fixation to its nearest text line and
//! word, repairs lone off-line fixations, and removes isolated fixations.
//! Snapping, smoothing and isolation removal repeat until no fixation is
//! removed, so cleaning an already cleaned trace changes nothing.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{AoiLayout, EventKind, GazeEvent, GazeTrace};

#[derive(Debug, thiserror::Error)]
pub enum CleanError {
    #[error("slide {0} has no text lines in the layout")]
    NoLayout(u32),
    #[error("invalid cleaning parameters: {0}")]
    InvalidParams(String),
    #[error("override line {line}: {reason}")]
    BadOverride { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanParams {
    pub min_fix_ms: i64,
    pub max_fix_ms: i64,
    /// Word distance at which a fixation counts as an excursion from its
    /// neighbours. 0 disables isolation removal.
    pub isolation_gap_words: usize,
    pub smoothing_enabled: bool,
}

impl Default for CleanParams {
    fn default() -> Self {
        CleanParams {
            min_fix_ms: 50,
            max_fix_ms: 1000,
            isolation_gap_words: 2,
            smoothing_enabled: true,
        }
    }
}

impl CleanParams {
    pub fn validate(&self) -> Result<(), CleanError> {
        if 0 < self.min_fix_ms && self.min_fix_ms < self.max_fix_ms {
            Ok(())
        } else {
            Err(CleanError::InvalidParams(format!(
                "need 0 < min_fix_ms ({}) < max_fix_ms ({})",
                self.min_fix_ms, self.max_fix_ms
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedFixation {
    pub event: GazeEvent,
    pub word_index: usize,
    pub line: usize,
    pub slide: u32,
    pub visit_ordinal: usize,
}

/// A cleaned trace together with the alignment of its fixations.
#[derive(Debug, Clone, PartialEq)]
pub struct CleanedTrace {
    /// Retained events; fixation `y` is moved onto the assigned line.
    pub trace: GazeTrace,
    pub fixations: Vec<AlignedFixation>,
}

pub fn drop_blinks(trace: &GazeTrace) -> GazeTrace {
    trace.with_events(
        trace
            .events
            .iter()
            .filter(|e| e.kind != EventKind::Blink)
            .cloned()
            .collect(),
    )
}

pub fn filter_durations(trace: &GazeTrace, params: &CleanParams) -> GazeTrace {
    trace.with_events(
        trace
            .events
            .iter()
            .filter(|e| {
                !e.is_fixation() || (params.min_fix_ms..=params.max_fix_ms).contains(&e.duration_ms())
            })
            .cloned()
            .collect(),
    )
}

/// Nearest line on `slide` (ties to the smaller index), skipping lines that
/// carry no words.
fn nearest_line(layout: &AoiLayout, slide: u32, y: f64) -> Result<usize, CleanError> {
    layout
        .lines_on_slide(slide)
        .filter(|&l| layout.words_on_line(l).next().is_some())
        .map(|l| (l, (layout.lines[l].y - y).abs()))
        .fold(None, |best: Option<(usize, f64)>, cand| match best {
            Some(b) if b.1 <= cand.1 => Some(b),
            _ => Some(cand),
        })
        .map(|(l, _)| l)
        .ok_or(CleanError::NoLayout(slide))
}

/// Word on `line` whose box contains `x`, else the horizontally nearest one.
fn nearest_word(layout: &AoiLayout, line: usize, x: f64) -> usize {
    layout
        .words_on_line(line)
        .map(|w| {
            let gap = (w.x_min - x).max(x - w.x_max).max(0.0);
            (w.index, gap)
        })
        .fold(None, |best: Option<(usize, f64)>, cand| match best {
            Some(b) if b.1 <= cand.1 => Some(b),
            _ => Some(cand),
        })
        .map(|(w, _)| w)
        .expect("line has words")
}

/// Recomputes `visit_ordinal`: 1 + the number of earlier maximal runs of
/// consecutive fixations on the same word.
pub fn assign_visits(aligned: &mut [AlignedFixation]) {
    let mut runs: BTreeMap<usize, usize> = BTreeMap::new();
    let mut prev: Option<usize> = None;
    for fx in aligned.iter_mut() {
        if prev != Some(fx.word_index) {
            *runs.entry(fx.word_index).or_insert(0) += 1;
        }
        fx.visit_ordinal = runs[&fx.word_index];
        prev = Some(fx.word_index);
    }
}

pub fn snap_to_lines(trace: &GazeTrace, layout: &AoiLayout) -> Result<Vec<AlignedFixation>, CleanError> {
    let mut aligned = trace
        .events
        .iter()
        .filter(|e| e.is_fixation())
        .map(|e| {
            let line = nearest_line(layout, e.slide, e.y)?;
            Ok(AlignedFixation {
                event: e.clone(),
                word_index: nearest_word(layout, line, e.x),
                line,
                slide: e.slide,
                visit_ordinal: 1,
            })
        })
        .collect::<Result<Vec<_>, CleanError>>()?;
    assign_visits(&mut aligned);
    Ok(aligned)
}

/// Moves a fixation whose line differs from both temporal neighbours, while
/// the neighbours agree with each other, onto the neighbours' line. A single
/// left-to-right pass; earlier corrections are visible to later decisions,
/// which leaves no lone outlier behind.
pub fn smooth_line_outliers(aligned: &[AlignedFixation], layout: &AoiLayout) -> Vec<AlignedFixation> {
    let mut out = aligned.to_vec();
    for i in 1..out.len().saturating_sub(1) {
        let (before, after) = (out[i - 1].line, out[i + 1].line);
        let same_slide = out[i - 1].slide == out[i].slide && out[i + 1].slide == out[i].slide;
        if same_slide && before == after && out[i].line != before {
            out[i].line = before;
            out[i].word_index = nearest_word(layout, before, out[i].event.x);
        }
    }
    assign_visits(&mut out);
    out
}

/// Indices of fixations that jump at least `gap` words away from both
/// neighbours while the neighbours themselves stay within `gap` of each
/// other. First and last fixations are never isolated.
pub fn isolated_fixations(aligned: &[AlignedFixation], gap: usize) -> Vec<usize> {
    if gap == 0 {
        return Vec::new();
    }
    (1..aligned.len().saturating_sub(1))
        .filter(|&i| {
            let (p, w, n) = (
                aligned[i - 1].word_index,
                aligned[i].word_index,
                aligned[i + 1].word_index,
            );
            w.abs_diff(p) >= gap && w.abs_diff(n) >= gap && p.abs_diff(n) < gap
        })
        .collect()
}

/// Parses an override TSV of `fixation_ordinal<TAB>word_index` (1-based
/// ordinals into the cleaned fixation sequence).
pub fn read_overrides(text: &str) -> Result<BTreeMap<usize, usize>, CleanError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| CleanError::BadOverride {
            line: i + 1,
            reason: reason.to_string(),
        };
        let (a, b) = line.split_once('\t').ok_or_else(|| bad("expected two tab-separated columns"))?;
        let (Ok(ordinal), Ok(word)) = (a.trim().parse::<usize>(), b.trim().parse::<usize>()) else {
            if map.is_empty() && i == 0 {
                continue;
            }
            return Err(bad("columns must be integers"));
        };
        if ordinal == 0 {
            return Err(bad("ordinals start at 1"));
        }
        map.insert(ordinal, word);
    }
    Ok(map)
}

pub fn load_overrides(path: &Path) -> Result<BTreeMap<usize, usize>, CleanError> {
    let text = std::fs::read_to_string(path).map_err(|source| CleanError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_overrides(&text)
}

/// Applies manual word assignments to a cleaned fixation sequence.
pub fn apply_overrides(
    aligned: &[AlignedFixation],
    overrides: &BTreeMap<usize, usize>,
    layout: &AoiLayout,
) -> Result<Vec<AlignedFixation>, CleanError> {
    let mut out = aligned.to_vec();
    for (&ordinal, &word) in overrides {
        let reason = if ordinal > out.len() {
            Some(format!("fixation {ordinal} does not exist ({} fixations)", out.len()))
        } else if word >= layout.word_count() {
            Some(format!("word {word} is outside the layout"))
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(CleanError::BadOverride { line: 0, reason });
        }
        let w = &layout.words[word];
        let fx = &mut out[ordinal - 1];
        fx.word_index = word;
        fx.line = w.line;
        fx.slide = w.slide;
    }
    assign_visits(&mut out);
    Ok(out)
}

/// Full cleaning pipeline for one trace.
pub fn clean_trace(trace: &GazeTrace, layout: &AoiLayout, params: &CleanParams) -> Result<CleanedTrace, CleanError> {
    params.validate()?;
    let mut current = filter_durations(&drop_blinks(trace), params);
    loop {
        let mut aligned = snap_to_lines(&current, layout)?;
        if params.smoothing_enabled {
            aligned = smooth_line_outliers(&aligned, layout);
        }
        let isolated = isolated_fixations(&aligned, params.isolation_gap_words);

        let mut fixation_no = 0;
        let mut events = Vec::with_capacity(current.events.len());
        for e in &current.events {
            if !e.is_fixation() {
                events.push(e.clone());
                continue;
            }
            let k = fixation_no;
            fixation_no += 1;
            if isolated.binary_search(&k).is_ok() {
                continue;
            }
            let mut e = e.clone();
            e.y = layout.lines[aligned[k].line].y;
            events.push(e);
        }
        current = current.with_events(events);

        if isolated.is_empty() {
            let fixations: Vec<AlignedFixation> = aligned
                .into_iter()
                .zip(current.events.iter().filter(|e| e.is_fixation()))
                .map(|(mut fx, e)| {
                    fx.event = e.clone();
                    fx
                })
                .collect();
            return Ok(CleanedTrace {
                trace: current,
                fixations,
            });
        }
    }
}
