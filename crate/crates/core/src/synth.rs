//! Synthetic layouts and reading traces for tests, benchmarks and demos.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::corpus::{AoiLayout, GazeEvent, GazeLabel, GazeTrace, Interval, IntervalKind, Line, Span, TranscriptTimeline, Word};
use crate::learn::Dataset;

/// Splits `0..n` into `k` contiguous spans whose sizes differ by at most one.
pub fn even_spans(n: usize, k: usize) -> Vec<Span> {
    assert!(0 < k && k <= n, "need 1 <= k <= n");
    let (base, extra) = (n / k, n % k);
    let mut first = 0;
    (0..k)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let s = Span::new(first, first + len - 1);
            first += len;
            s
        })
        .collect()
}

pub const WORD_WIDTH: f64 = 60.0;
pub const WORD_GAP: f64 = 10.0;
pub const LINE_SPACING: f64 = 40.0;

/// A layout of `words` words with evenly sized spans per level and at most
/// `per_line` words per line. Lines break at slide boundaries.
pub fn layout(words: usize, sub: usize, sent: usize, para: usize, slides: usize, per_line: usize) -> AoiLayout {
    let slide_spans = even_spans(words, slides);
    let mut lines: Vec<Line> = Vec::new();
    let mut out = Vec::with_capacity(words);
    for (s, span) in slide_spans.iter().enumerate() {
        for (k, w) in (span.first..=span.last).enumerate() {
            if k % per_line == 0 {
                let row = (k / per_line) as f64;
                lines.push(Line {
                    slide: s as u32,
                    y: 100.0 + LINE_SPACING * row,
                });
            }
            let col = (k % per_line) as f64;
            let x_min = 50.0 + col * (WORD_WIDTH + WORD_GAP);
            out.push(Word {
                index: w,
                text: format!("w{w}"),
                slide: s as u32,
                line: lines.len() - 1,
                x_min,
                x_max: x_min + WORD_WIDTH,
            });
        }
    }
    AoiLayout::new(
        lines,
        out,
        even_spans(words, sub),
        even_spans(words, sent),
        even_spans(words, para),
        slide_spans,
    )
    .expect("synthetic layout is valid")
}

/// Layout with the first reading session's geometry.
pub fn session_one_layout() -> AoiLayout {
    layout(718, 69, 30, 7, 5, 12)
}

/// Layout with the second reading session's geometry.
pub fn session_two_layout() -> AoiLayout {
    layout(662, 66, 35, 6, 5, 12)
}

/// Simulates one read-through: mostly forward steps with skips,
/// regressions, refixations, stray fixations, blinks and out-of-range
/// durations, all with vertical jitter.
pub fn reading_trace<R: Rng>(layout: &AoiLayout, participant: &str, rng: &mut R) -> GazeTrace {
    let n = layout.word_count() as i64;
    let mut events = Vec::new();
    let mut t = 0i64;
    let mut word = 0i64;
    let mut last: Option<(f64, f64)> = None;
    let mut fixations = 0;
    while word < n && fixations < 4 * n as usize + 10 {
        let w = &layout.words[word as usize];
        let x = rng.gen_range(w.x_min..=w.x_max);
        let y = layout.lines[w.line].y + rng.gen_range(-12.0..12.0);
        if let Some(from) = last {
            let d = rng.gen_range(15..60);
            events.push(
                GazeEvent::saccade(t, t + d, from, (x, y), rng.gen_range(30.0..300.0), rng.gen_range(300.0..600.0))
                    .on_slide(w.slide),
            );
            t += d;
        }
        let dur = match rng.gen_range(0..100) {
            0..=3 => rng.gen_range(10..50),
            4..=5 => rng.gen_range(1001..1500),
            _ => rng.gen_range(80..400),
        };
        events.push(GazeEvent::fixation(t, t + dur, x, y).on_slide(w.slide));
        t += dur;
        fixations += 1;
        last = Some((x, y));
        if rng.gen_bool(0.03) {
            let d = rng.gen_range(80..200);
            events.push(GazeEvent::blink(t, t + d).on_slide(w.slide));
            t += d;
            last = None;
        }
        word += match rng.gen_range(0..100) {
            0..=59 => 1,
            60..=74 => 2,
            75..=79 => 3,
            80..=87 => 0,
            88..=95 => -rng.gen_range(1..=5),
            _ => rng.gen_range(-20..=20),
        };
        word = word.max(0);
    }
    let mut trace = GazeTrace::new(participant, events);
    trace.label = Some(if rng.gen_bool(0.5) { GazeLabel::High } else { GazeLabel::Low });
    trace
}

/// `n` rows of `d` standard normal features labelled by the side of a
/// random hyperplane through the origin, every row pushed at least `margin`
/// away from it. Classes alternate so they stay balanced.
pub fn separable_dataset<R: Rng>(n: usize, d: usize, margin: f64, rng: &mut R) -> Dataset {
    let mut normal: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
    normal.iter_mut().for_each(|v| *v /= norm);
    let mut x = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let side = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mut row: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let along: f64 = row.iter().zip(&normal).map(|(a, b)| a * b).sum();
        // move the projection onto the requested side, at least `margin` out
        let target = side * (margin + along.abs());
        for (v, u) in row.iter_mut().zip(&normal) {
            *v += (target - along) * u;
        }
        x.push(row);
        labels.push(if side > 0.0 { "High" } else { "Low" }.to_string());
    }
    Dataset {
        feature_names: (0..d).map(|j| format!("f{j}")).collect(),
        sample_ids: (0..n).map(|i| format!("s{i:03}")).collect(),
        x,
        labels,
    }
}

/// Random speech timeline: `segments` speech stretches (1–20 syllables, at
/// least 0.1 s) separated by silences of 0.05–2 s or filled pauses, with
/// leading and trailing silence. Times are on a millisecond grid.
pub fn speech_timeline<R: Rng>(segments: usize, rng: &mut R) -> TranscriptTimeline {
    let mut t_ms: u32 = 0;
    let mut intervals = Vec::new();
    let mut push = |ms: u32, kind: IntervalKind, syl: u32, t_ms: &mut u32| {
        intervals.push(Interval::new(f64::from(*t_ms) / 1000.0, f64::from(*t_ms + ms) / 1000.0, kind, syl));
        *t_ms += ms;
    };
    push(rng.gen_range(100..1000), IntervalKind::SilentPause, 0, &mut t_ms);
    for k in 0..segments.max(1) {
        if k > 0 {
            let kind = if rng.gen_bool(0.3) {
                IntervalKind::FilledPause
            } else {
                IntervalKind::SilentPause
            };
            push(rng.gen_range(50..2000), kind, 0, &mut t_ms);
        }
        push(rng.gen_range(100..4000), IntervalKind::Speech, rng.gen_range(1..=20), &mut t_ms);
    }
    push(rng.gen_range(100..1000), IntervalKind::SilentPause, 0, &mut t_ms);
    TranscriptTimeline::from_intervals(intervals).expect("generated intervals are ordered")
}

/// `n` labelled readers alternating High and Low. Low readers move at
/// two-thirds of the speed, so their fixations and saccades last 1.5 times
/// longer.
pub fn cohort<R: Rng>(layout: &AoiLayout, n: usize, rng: &mut R) -> Vec<GazeTrace> {
    (0..n)
        .map(|i| {
            let mut t = reading_trace(layout, &format!("p{i:03}"), rng);
            let low = i % 2 == 1;
            t.label = Some(if low { GazeLabel::Low } else { GazeLabel::High });
            if low {
                for e in &mut t.events {
                    e.start_ms = e.start_ms * 3 / 2;
                    e.end_ms = e.end_ms * 3 / 2;
                }
            }
            t
        })
        .collect()
}
