//! Temporal speech-fluency measures of a transcript timeline.

use serde::Serialize;

use crate::corpus::{IntervalKind, TranscriptTimeline};
use crate::scalar::Real;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FluencyError {
    #[error("timeline has no speech")]
    NoSpeech,
}

pub const MIN_SILENT_PAUSE_S: f64 = 0.25;

/// Slack for interval boundaries that land a hair below the threshold
/// after decimal parsing.
const PAUSE_EPS: f64 = 1e-9;

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluencyFeatures<T> {
    /// Total response time: ST + SPT + FPT.
    pub TRT: T,
    pub ST: T,
    pub SPT: T,
    pub FPT: T,
    pub MSP: Option<T>,
    pub MFP: Option<T>,
    pub STR: T,
    pub SPR: T,
    pub FPR: T,
    pub NumSyl: u32,
    pub NumSP: usize,
    pub NumFP: usize,
    /// Syllables per minute of response time.
    pub SR: T,
    /// Syllables per minute of speech plus filled-pause time.
    pub AR: T,
    /// Syllables per run.
    pub MSR: T,
    pub runs: usize,
}

impl<T: Real> FluencyFeatures<T> {
    pub const COLUMNS: [&'static str; 15] = [
        "TRT", "ST", "SPT", "FPT", "MSP", "MFP", "STR", "SPR", "FPR", "NumSyl", "NumSP", "NumFP", "SR", "AR", "MSR",
    ];

    /// Values in [`Self::COLUMNS`] order.
    pub fn values(&self) -> [Option<T>; 15] {
        let n = |v: usize| Some(T::of_usize(v));
        [
            Some(self.TRT),
            Some(self.ST),
            Some(self.SPT),
            Some(self.FPT),
            self.MSP,
            self.MFP,
            Some(self.STR),
            Some(self.SPR),
            Some(self.FPR),
            n(self.NumSyl as usize),
            n(self.NumSP),
            n(self.NumFP),
            Some(self.SR),
            Some(self.AR),
            Some(self.MSR),
        ]
    }
}

/// Computes the features over the timeline's inner (non-boundary)
/// intervals. Silences shorter than `min_silent_pause_s` count as speaking
/// time; runs are the stretches between counted silent pauses.
pub fn fluency_features<T: Real>(
    timeline: &TranscriptTimeline,
    min_silent_pause_s: f64,
) -> Result<FluencyFeatures<T>, FluencyError> {
    let (mut st, mut spt, mut fpt) = (T::zero(), T::zero(), T::zero());
    let (mut syl, mut n_sp, mut n_fp) = (0u32, 0usize, 0usize);
    let mut runs = 0usize;
    let mut in_run = false;
    let mut speech_seen = false;

    for iv in timeline.inner() {
        let d = T::lit(iv.duration());
        match iv.kind {
            IntervalKind::Speech => {
                speech_seen = true;
                st = st + d;
                syl += iv.syllables;
                if !in_run {
                    runs += 1;
                    in_run = true;
                }
            }
            IntervalKind::SilentPause if iv.duration() + PAUSE_EPS >= min_silent_pause_s => {
                spt = spt + d;
                n_sp += 1;
                in_run = false;
            }
            IntervalKind::SilentPause => st = st + d,
            IntervalKind::FilledPause => {
                fpt = fpt + d;
                n_fp += 1;
            }
            IntervalKind::Boundary => {}
        }
    }
    if !speech_seen {
        return Err(FluencyError::NoSpeech);
    }

    let trt = st + spt + fpt;
    let sixty = T::lit(60.0);
    let syl_t = T::of_usize(syl as usize);
    let mean_of = |total: T, n: usize| (n > 0).then(|| total / T::of_usize(n));
    Ok(FluencyFeatures {
        TRT: trt,
        ST: st,
        SPT: spt,
        FPT: fpt,
        MSP: mean_of(spt, n_sp),
        MFP: mean_of(fpt, n_fp),
        STR: st / trt,
        SPR: spt / trt,
        FPR: fpt / trt,
        NumSyl: syl,
        NumSP: n_sp,
        NumFP: n_fp,
        SR: syl_t / trt * sixty,
        AR: syl_t / (st + fpt) * sixty,
        MSR: syl_t / T::of_usize(runs),
        runs,
    })
}
