//! Fixation, saccade and regression features per area of interest.
//!
//! Word AoIs get the seven fixation features; every higher AoI additionally
//! gets seven saccade and eight regression features. A "visit" to an AoI is
//! a maximal run of consecutive fixations inside it.

mod matrix;

pub use matrix::{aggregate_columns, build_matrix, extract_row, feature_names, ColumnSummary, FeatureMatrix, FeatureRow};

use serde::{Deserialize, Serialize};

use crate::clean::AlignedFixation;
use crate::corpus::{EventKind, GazeEvent, GazeTrace};
use crate::scalar::{Real, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("trace `{trace}` references word {word} outside the layout ({words} words)")]
    LayoutMismatch { trace: String, word: usize, words: usize },
    #[error("feature matrix: {0}")]
    Matrix(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const FIXATION_FEATURES: [&str; 7] = ["tFD", "FFD", "SFD", "LFD", "aFD", "tFC", "aFC"];
pub const SACCADE_FEATURES: [&str; 7] = ["SD", "SC", "SV", "SpV", "rS", "sS", "SA"];
pub const REGRESSION_FEATURES: [&str; 8] = ["RD", "RC", "RV", "RpV", "rR", "sR", "RA", "rSR"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Regression,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaccadeClassified {
    pub event: GazeEvent,
    pub launch_word: usize,
    pub landing_word: usize,
    pub direction: Direction,
}

impl SaccadeClassified {
    /// Words the saccade crosses, read and skipped together.
    pub fn span(&self) -> usize {
        self.launch_word.abs_diff(self.landing_word)
    }

    fn amplitude(&self) -> f64 {
        match &self.event.saccade {
            Some(s) => (s.end_x - self.event.x).hypot(s.end_y - self.event.y),
            None => 0.0,
        }
    }
}

/// Pairs every saccade with the fixations immediately before and after it.
/// `fixations` must be the aligned fixations of `trace`, in order. Saccades
/// not flanked by two fixations are dropped.
pub fn classify_saccades(trace: &GazeTrace, fixations: &[AlignedFixation]) -> Vec<SaccadeClassified> {
    // word of each event, for fixation events only
    let mut next_fixation = fixations.iter();
    let words: Vec<Option<usize>> = trace
        .events
        .iter()
        .map(|e| match e.kind {
            EventKind::Fixation => next_fixation.next().map(|f| f.word_index),
            _ => None,
        })
        .collect();

    let mut out = Vec::new();
    for (i, e) in trace.events.iter().enumerate() {
        if e.kind != EventKind::Saccade || i == 0 || i + 1 >= trace.events.len() {
            continue;
        }
        let (Some(launch), Some(landing)) = (words[i - 1], words[i + 1]) else {
            continue;
        };
        out.push(SaccadeClassified {
            event: e.clone(),
            launch_word: launch,
            landing_word: landing,
            direction: if landing < launch {
                Direction::Regression
            } else {
                Direction::Forward
            },
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FixationFeatures<T> {
    pub tfd: T,
    pub ffd: T,
    pub sfd: T,
    pub lfd: T,
    pub afd: T,
    pub tfc: T,
    pub afc: T,
}

impl<T: Copy> FixationFeatures<T> {
    pub fn values(&self) -> [T; 7] {
        [self.tfd, self.ffd, self.sfd, self.lfd, self.afd, self.tfc, self.afc]
    }
}

/// Fixation features from an AoI's visits, each a list of fixation
/// durations in ms.
pub fn fixation_features<T: Scalar>(visits: &[Vec<i64>]) -> FixationFeatures<T> {
    let ms = |d: i64| T::from_i64(d).expect("duration representable");
    let first_of = |v: usize| visits.get(v).and_then(|f| f.first()).map_or(T::zero(), |&d| ms(d));
    let tfd: T = visits.iter().flatten().map(|&d| ms(d)).sum();
    let count: usize = visits.iter().map(Vec::len).sum();
    let visit_count = visits.iter().filter(|v| !v.is_empty()).count();
    let tfc = T::of_usize(count);
    FixationFeatures {
        tfd,
        ffd: first_of(0),
        sfd: first_of(1),
        lfd: visits.iter().skip(2).flatten().map(|&d| ms(d)).sum(),
        afd: if count == 0 { T::zero() } else { tfd / tfc },
        tfc,
        afc: if visit_count == 0 {
            T::zero()
        } else {
            tfc / T::of_usize(visit_count)
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SaccadeFeatures<T> {
    pub sd: T,
    pub sc: T,
    pub sv: T,
    pub spv: T,
    pub rs: T,
    pub ss: T,
    pub sa: T,
}

impl<T: Copy> SaccadeFeatures<T> {
    pub fn values(&self) -> [T; 7] {
        [self.sd, self.sc, self.sv, self.spv, self.rs, self.ss, self.sa]
    }
}

/// Totals shared by the saccade and regression feature sets.
struct Movement<T> {
    duration: T,
    count: T,
    velocity: T,
    peak: T,
    read: T,
    skipped: T,
    amplitude: T,
}

fn movement<T: Real>(saccades: &[&SaccadeClassified]) -> Movement<T> {
    let f = |v: f64| T::from_f64(v).expect("finite");
    let n = saccades.len();
    let mean = |total: T| if n == 0 { T::zero() } else { total / T::of_usize(n) };
    let info = |s: &SaccadeClassified| s.event.saccade.unwrap_or_default();
    Movement {
        duration: saccades.iter().map(|s| T::from_i64(s.event.duration_ms()).unwrap()).sum(),
        count: T::of_usize(n),
        velocity: mean(saccades.iter().map(|s| f(info(s).avg_velocity)).sum()),
        peak: mean(saccades.iter().map(|s| f(info(s).peak_velocity)).sum()),
        read: T::of_usize(saccades.iter().filter(|s| s.span() > 0).count()),
        skipped: T::of_usize(saccades.iter().map(|s| s.span().saturating_sub(1)).sum()),
        amplitude: mean(saccades.iter().map(|s| f(s.amplitude())).sum()),
    }
}

/// Features of the forward saccades landing in an AoI.
pub fn saccade_features<T: Real>(forward: &[&SaccadeClassified]) -> SaccadeFeatures<T> {
    let m = movement(forward);
    SaccadeFeatures {
        sd: m.duration,
        sc: m.count,
        sv: m.velocity,
        spv: m.peak,
        rs: m.read,
        ss: m.skipped,
        sa: m.amplitude,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RegressionFeatures<T> {
    pub rd: T,
    pub rc: T,
    pub rv: T,
    pub rpv: T,
    pub rr: T,
    pub sr: T,
    pub ra: T,
    /// Saccade count over regression count; absent without regressions.
    pub rsr: Option<T>,
}

impl<T: Copy> RegressionFeatures<T> {
    pub fn values(&self) -> [Option<T>; 8] {
        [
            Some(self.rd),
            Some(self.rc),
            Some(self.rv),
            Some(self.rpv),
            Some(self.rr),
            Some(self.sr),
            Some(self.ra),
            self.rsr,
        ]
    }
}

/// Features of the regressions landing in an AoI; `saccade_count` is the
/// AoI's forward-saccade count (SC).
pub fn regression_features<T: Real>(regressions: &[&SaccadeClassified], saccade_count: T) -> RegressionFeatures<T> {
    let m = movement(regressions);
    RegressionFeatures {
        rd: m.duration,
        rc: m.count,
        rv: m.velocity,
        rpv: m.peak,
        rr: m.read,
        sr: m.skipped,
        ra: m.amplitude,
        rsr: if regressions.is_empty() {
            None
        } else {
            Some(saccade_count / m.count)
        },
    }
}

/// Splits fixations into visits to AoIs: maximal runs of consecutive
/// fixations whose AoI (given by `aoi_of`) is the same. Returns per-AoI
/// lists of visit durations.
pub fn visits_by_aoi(fixations: &[AlignedFixation], aoi_count: usize, aoi_of: impl Fn(usize) -> usize) -> Vec<Vec<Vec<i64>>> {
    let mut visits = vec![Vec::new(); aoi_count];
    let mut prev = None;
    for fx in fixations {
        let aoi = aoi_of(fx.word_index);
        if prev != Some(aoi) {
            visits[aoi].push(Vec::new());
        }
        visits[aoi].last_mut().unwrap().push(fx.event.duration_ms());
        prev = Some(aoi);
    }
    visits
}
