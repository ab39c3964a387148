//! Gaze event logs.
//!
//! The log is a CSV with the header
//! `kind,eye,start_ms,end_ms,x,y,pupil,avg_vel,peak_vel,end_x,end_y`.
//! Cells that do not apply to an event kind are left empty. An optional
//! `slide` column places an event on a slide (default 0); any other extra
//! column is ignored. Leading `# key=value` lines carry the trace metadata
//! (`participant`, `session`, `day`, `label`).

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{malformed, read_path, CorpusError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    Fixation,
    Saccade,
    Blink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eye {
    Left,
    Right,
}

/// Expert comprehension label attached to a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GazeLabel {
    High,
    Low,
}

impl fmt::Display for GazeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GazeLabel::High => "High",
            GazeLabel::Low => "Low",
        })
    }
}

impl FromStr for GazeLabel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "high" => Ok(GazeLabel::High),
            "low" => Ok(GazeLabel::Low),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

/// Saccade-only measurements.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SaccadeInfo {
    /// deg/s
    pub avg_velocity: f64,
    /// deg/s
    pub peak_velocity: f64,
    pub end_x: f64,
    pub end_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazeEvent {
    pub kind: EventKind,
    pub eye: Eye,
    pub start_ms: i64,
    pub end_ms: i64,
    /// Position in pixels; the start point for saccades. Zero for blinks.
    pub x: f64,
    pub y: f64,
    pub slide: u32,
    /// Fixations only.
    pub pupil: Option<f64>,
    /// Saccades only.
    pub saccade: Option<SaccadeInfo>,
}

impl GazeEvent {
    pub fn duration_ms(&self) -> i64 {
        self.end_ms - self.start_ms
    }

    pub fn fixation(start_ms: i64, end_ms: i64, x: f64, y: f64) -> Self {
        GazeEvent {
            kind: EventKind::Fixation,
            eye: Eye::Right,
            start_ms,
            end_ms,
            x,
            y,
            slide: 0,
            pupil: None,
            saccade: None,
        }
    }

    pub fn saccade(start_ms: i64, end_ms: i64, from: (f64, f64), to: (f64, f64), avg_velocity: f64, peak_velocity: f64) -> Self {
        GazeEvent {
            kind: EventKind::Saccade,
            eye: Eye::Right,
            start_ms,
            end_ms,
            x: from.0,
            y: from.1,
            slide: 0,
            pupil: None,
            saccade: Some(SaccadeInfo {
                avg_velocity,
                peak_velocity,
                end_x: to.0,
                end_y: to.1,
            }),
        }
    }

    pub fn blink(start_ms: i64, end_ms: i64) -> Self {
        GazeEvent {
            kind: EventKind::Blink,
            eye: Eye::Right,
            start_ms,
            end_ms,
            x: 0.0,
            y: 0.0,
            slide: 0,
            pupil: None,
            saccade: None,
        }
    }

    pub fn on_slide(mut self, slide: u32) -> Self {
        self.slide = slide;
        self
    }

    pub fn is_fixation(&self) -> bool {
        self.kind == EventKind::Fixation
    }
}

/// One participant's ordered event sequence for one reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazeTrace {
    pub participant_id: String,
    pub session: u8,
    pub day: u8,
    pub label: Option<GazeLabel>,
    pub events: Vec<GazeEvent>,
}

impl GazeTrace {
    pub fn new(participant_id: impl Into<String>, events: Vec<GazeEvent>) -> Self {
        GazeTrace {
            participant_id: participant_id.into(),
            session: 1,
            day: 1,
            label: None,
            events,
        }
    }

    /// Same metadata, different events.
    pub fn with_events(&self, events: Vec<GazeEvent>) -> Self {
        GazeTrace {
            participant_id: self.participant_id.clone(),
            session: self.session,
            day: self.day,
            label: self.label,
            events,
        }
    }
}

pub fn parse_gaze_log(path: &Path) -> Result<GazeTrace> {
    let text = read_path(path)?;
    let default_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_gaze_log(&text, &default_id)
}

/// Parses a gaze log from text. `default_id` is used when the metadata does
/// not name the participant.
pub fn read_gaze_log(text: &str, default_id: &str) -> Result<GazeTrace> {
    let mut trace = GazeTrace::new(default_id, Vec::new());
    let mut header_offset = 0;
    for line in text.lines() {
        let Some(meta) = line.trim().strip_prefix('#') else {
            break;
        };
        header_offset += 1;
        let Some((key, value)) = meta.split_once('=') else {
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let line_no = header_offset;
        match key {
            "participant" => trace.participant_id = value.to_string(),
            "session" => trace.session = value.parse().map_err(|_| malformed(line_no, "bad session"))?,
            "day" => trace.day = value.parse().map_err(|_| malformed(line_no, "bad day"))?,
            "label" if value.is_empty() => trace.label = None,
            "label" => trace.label = Some(value.parse().map_err(|e: String| malformed(line_no, e))?),
            _ => {}
        }
    }
    let body: String = text.lines().skip(header_offset).collect::<Vec<_>>().join("\n");

    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(body.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| malformed(header_offset + 1, e.to_string()))?
        .clone();
    let col: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    for required in ["kind", "eye", "start_ms", "end_ms", "x", "y", "pupil", "avg_vel", "peak_vel", "end_x", "end_y"] {
        if !col.contains_key(required) {
            return Err(CorpusError::MissingColumn(required.to_string()));
        }
    }

    let mut last_start: Option<i64> = None;
    for (i, record) in rdr.records().enumerate() {
        let line = header_offset + 2 + i;
        let record = record.map_err(|e| malformed(line, e.to_string()))?;
        let cells: HashMap<&str, &str> = col
            .iter()
            .map(|(&name, &c)| (name, record.get(c).unwrap_or("")))
            .collect();
        let event = parse_event(&cells, line)?;
        if let Some(prev) = last_start {
            if event.start_ms <= prev {
                return Err(CorpusError::UnsortedEvents { line });
            }
        }
        last_start = Some(event.start_ms);
        trace.events.push(event);
    }
    Ok(trace)
}

fn opt_f64(raw: &str, line: usize, name: &str) -> Result<Option<f64>> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(Some)
        .ok_or_else(|| malformed(line, format!("`{name}` is not a number: {raw:?}")))
}

fn req_f64(raw: &str, line: usize, name: &str) -> Result<f64> {
    opt_f64(raw, line, name)?.ok_or_else(|| malformed(line, format!("`{name}` is required")))
}

fn parse_event(cells: &HashMap<&str, &str>, line: usize) -> Result<GazeEvent> {
    let cell = |name: &str| cells.get(name).copied().unwrap_or("");
    let kind = match cell("kind").to_ascii_lowercase().as_str() {
        "fixation" | "fix" => EventKind::Fixation,
        "saccade" | "sacc" => EventKind::Saccade,
        "blink" => EventKind::Blink,
        other => return Err(malformed(line, format!("unknown event kind {other:?}"))),
    };
    let eye = match cell("eye").to_ascii_lowercase().as_str() {
        "left" | "l" => Eye::Left,
        "right" | "r" => Eye::Right,
        other => return Err(malformed(line, format!("unknown eye {other:?}"))),
    };
    let start_ms: i64 = cell("start_ms")
        .parse()
        .map_err(|_| malformed(line, "`start_ms` is not an integer"))?;
    let end_ms: i64 = cell("end_ms")
        .parse()
        .map_err(|_| malformed(line, "`end_ms` is not an integer"))?;
    if end_ms <= start_ms {
        return Err(malformed(line, "end_ms must be greater than start_ms"));
    }
    let slide = match cell("slide") {
        "" => 0,
        raw => raw.parse().map_err(|_| malformed(line, "`slide` is not an integer"))?,
    };

    let pupil = opt_f64(cell("pupil"), line, "pupil")?;
    let avg = opt_f64(cell("avg_vel"), line, "avg_vel")?;
    let peak = opt_f64(cell("peak_vel"), line, "peak_vel")?;
    let end_x = opt_f64(cell("end_x"), line, "end_x")?;
    let end_y = opt_f64(cell("end_y"), line, "end_y")?;
    let saccade_fields = [avg, peak, end_x, end_y];

    let (x, y) = match kind {
        EventKind::Blink => (
            opt_f64(cell("x"), line, "x")?.unwrap_or(0.0),
            opt_f64(cell("y"), line, "y")?.unwrap_or(0.0),
        ),
        _ => (req_f64(cell("x"), line, "x")?, req_f64(cell("y"), line, "y")?),
    };

    let saccade = if kind == EventKind::Saccade {
        match saccade_fields {
            [Some(avg_velocity), Some(peak_velocity), Some(end_x), Some(end_y)] => Some(SaccadeInfo {
                avg_velocity,
                peak_velocity,
                end_x,
                end_y,
            }),
            _ => return Err(malformed(line, "saccade requires avg_vel, peak_vel, end_x, end_y")),
        }
    } else {
        if saccade_fields.iter().any(Option::is_some) {
            return Err(malformed(line, "saccade-only field on a non-saccade event"));
        }
        None
    };
    if pupil.is_some() && kind != EventKind::Fixation {
        return Err(malformed(line, "pupil size on a non-fixation event"));
    }

    Ok(GazeEvent {
        kind,
        eye,
        start_ms,
        end_ms,
        x,
        y,
        slide,
        pupil,
        saccade,
    })
}

/// Writes a trace in the format [`read_gaze_log`] accepts.
pub fn write_gaze_log<W: Write>(trace: &GazeTrace, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# participant={}", trace.participant_id)?;
    writeln!(out, "# session={}", trace.session)?;
    writeln!(out, "# day={}", trace.day)?;
    if let Some(label) = trace.label {
        writeln!(out, "# label={label}")?;
    }
    writeln!(out, "kind,eye,start_ms,end_ms,x,y,pupil,avg_vel,peak_vel,end_x,end_y,slide")?;
    for e in &trace.events {
        let kind = match e.kind {
            EventKind::Fixation => "fixation",
            EventKind::Saccade => "saccade",
            EventKind::Blink => "blink",
        };
        let eye = match e.eye {
            Eye::Left => "left",
            Eye::Right => "right",
        };
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        let s = e.saccade;
        writeln!(
            out,
            "{kind},{eye},{},{},{},{},{},{},{},{},{},{}",
            e.start_ms,
            e.end_ms,
            e.x,
            e.y,
            opt(e.pupil),
            opt(s.map(|s| s.avg_velocity)),
            opt(s.map(|s| s.peak_velocity)),
            opt(s.map(|s| s.end_x)),
            opt(s.map(|s| s.end_y)),
            e.slide
        )?;
    }
    Ok(())
}
