//! Reading-comprehension assessment pipelines.
//!
//! * [`corpus`]: file formats (gaze logs, layouts, CoNLL-U, vectors, timelines, lexicons)
//! * [`clean`]: gaze noise removal and line/word alignment
//! * [`features`]: fixation, saccade and regression features per area of interest
//! * [`stats`]: normalization, Welch's t-test, correlations, agreement, rating profiles
//! * [`learn`]: splits, cross-validation, linear reference models, metrics
//! * [`simsem`]: lexical, syntactic and concept similarity of a summary to its source text
//! * [`lingfeat`]: readability, lexical variation and rating-bin profiles
//! * [`fluency`]: temporal speech-fluency measures
//!
//! The numeric cores are generic over [`scalar::Scalar`] / [`scalar::Real`];
//! the aliases below fix them to `f64`.

pub mod scalar;
pub mod corpus;
pub mod clean;
pub mod features;
pub mod synth;
pub mod stats;
pub mod learn;
pub mod simsem;
pub mod lingfeat;
pub mod fluency;

/// `f64` instantiations of the generic records.
pub type FixationFeatures = features::FixationFeatures<f64>;
pub type SaccadeFeatures = features::SaccadeFeatures<f64>;
pub type RegressionFeatures = features::RegressionFeatures<f64>;
pub type WelchResult = stats::WelchResult<f64>;
pub type AlignScheme = simsem::AlignScheme<f64>;
pub type Alignment = simsem::Alignment<f64>;
pub type SyntaxScore = simsem::SyntaxScore<f64>;
pub type Readability = lingfeat::Readability<f64>;
pub type TtrFamily = lingfeat::TtrFamily<f64>;
pub type FluencyFeatures = fluency::FluencyFeatures<f64>;
