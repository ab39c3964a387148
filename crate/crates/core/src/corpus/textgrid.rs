//! Minimal reader for Praat long-format TextGrid files and a converter to
//! [`TranscriptTimeline`].

use super::timeline::{Interval, IntervalKind, TranscriptTimeline};
use super::{CorpusError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTier {
    pub name: String,
    /// (xmin, xmax, text)
    pub intervals: Vec<(f64, f64, String)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TextGrid {
    pub tiers: Vec<IntervalTier>,
}

impl TextGrid {
    pub fn tier(&self, name: &str) -> Option<&IntervalTier> {
        self.tiers.iter().find(|t| t.name == name)
    }
}

fn err(msg: impl Into<String>) -> CorpusError {
    CorpusError::TextGrid(msg.into())
}

fn value_of<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?.trim_start();
    Some(rest.strip_prefix('=')?.trim())
}

fn unquote(v: &str) -> String {
    v.trim().trim_matches('"').replace("\"\"", "\"")
}

pub fn read_textgrid(text: &str) -> Result<TextGrid> {
    let mut grid = TextGrid::default();
    let mut is_interval_tier = false;
    let mut in_interval = false;
    let mut pending: (Option<f64>, Option<f64>) = (None, None);

    for raw in text.lines() {
        let line = raw.trim();
        if line.starts_with("item [") && line.ends_with(':') {
            is_interval_tier = false;
            in_interval = false;
            continue;
        }
        if let Some(v) = value_of(line, "class") {
            is_interval_tier = unquote(v) == "IntervalTier";
            continue;
        }
        if !is_interval_tier {
            continue;
        }
        if let Some(v) = value_of(line, "name") {
            grid.tiers.push(IntervalTier {
                name: unquote(v),
                intervals: Vec::new(),
            });
            continue;
        }
        if line.starts_with("intervals [") {
            in_interval = true;
            pending = (None, None);
            continue;
        }
        if !in_interval {
            continue;
        }
        let parse = |v: &str| v.parse::<f64>().map_err(|_| err(format!("bad time `{v}`")));
        if let Some(v) = value_of(line, "xmin") {
            pending.0 = Some(parse(v)?);
        } else if let Some(v) = value_of(line, "xmax") {
            pending.1 = Some(parse(v)?);
        } else if let Some(v) = value_of(line, "text") {
            let (Some(lo), Some(hi)) = pending else {
                return Err(err("interval text before its bounds"));
            };
            let tier = grid.tiers.last_mut().ok_or_else(|| err("interval outside a tier"))?;
            tier.intervals.push((lo, hi, unquote(v)));
            in_interval = false;
        }
    }
    Ok(grid)
}

/// Builds a timeline from a label tier (`speech` words or pause markers
/// `sp`/`bp`/`lp`/empty, `fp`, `$`) and an optional syllable tier whose
/// non-empty intervals are counted by midpoint inside each speech interval.
pub fn textgrid_to_timeline(grid: &TextGrid, label_tier: &str, syllable_tier: Option<&str>) -> Result<TranscriptTimeline> {
    let labels = grid
        .tier(label_tier)
        .ok_or_else(|| err(format!("no interval tier named `{label_tier}`")))?;
    let syllables: Vec<f64> = match syllable_tier {
        Some(name) => grid
            .tier(name)
            .ok_or_else(|| err(format!("no interval tier named `{name}`")))?
            .intervals
            .iter()
            .filter(|(_, _, t)| !t.trim().is_empty())
            .map(|(lo, hi, _)| 0.5 * (lo + hi))
            .collect(),
        None => Vec::new(),
    };
    let intervals = labels
        .intervals
        .iter()
        .map(|(lo, hi, text)| {
            let kind = match text.trim() {
                "$" => IntervalKind::Boundary,
                "fp" => IntervalKind::FilledPause,
                "" | "sp" | "bp" | "lp" | "sil" => IntervalKind::SilentPause,
                _ => IntervalKind::Speech,
            };
            let count = if kind == IntervalKind::Speech {
                syllables.iter().filter(|&&m| *lo <= m && m < *hi).count() as u32
            } else {
                0
            };
            Interval::new(*lo, *hi, kind, count)
        })
        .collect();
    TranscriptTimeline::from_intervals(intervals)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: &str = r#"File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 3
tiers? <exists>
size = 2
item []:
    item [1]:
        class = "IntervalTier"
        name = "kind"
        xmin = 0
        xmax = 3
        intervals: size = 3
        intervals [1]:
            xmin = 0
            xmax = 0.5
            text = ""
        intervals [2]:
            xmin = 0.5
            xmax = 2.5
            text = "speech"
        intervals [3]:
            xmin = 2.5
            xmax = 3
            text = ""
    item [2]:
        class = "IntervalTier"
        name = "syllables"
        xmin = 0
        xmax = 3
        intervals: size = 3
        intervals [1]:
            xmin = 0.5
            xmax = 1.0
            text = "ba"
        intervals [2]:
            xmin = 1.0
            xmax = 1.5
            text = ""
        intervals [3]:
            xmin = 1.5
            xmax = 2.0
            text = "na"
"#;

    #[test]
    fn converts_two_tier_grid() {
        let grid = read_textgrid(GRID).unwrap();
        assert_eq!(grid.tiers.len(), 2);
        let t = textgrid_to_timeline(&grid, "kind", Some("syllables")).unwrap();
        let kinds: Vec<_> = t.intervals.iter().map(|iv| iv.kind).collect();
        assert_eq!(
            kinds,
            vec![IntervalKind::Boundary, IntervalKind::Speech, IntervalKind::Boundary]
        );
        assert_eq!(t.intervals[1].syllables, 2);
    }

    #[test]
    fn unknown_tier_is_an_error() {
        let grid = read_textgrid(GRID).unwrap();
        assert!(textgrid_to_timeline(&grid, "words", None).is_err());
    }
}
