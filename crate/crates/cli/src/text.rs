//! `lingfeat` and `fluency`: per-document feature rows.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use rrkit::corpus::{
    parse_rating_lexicon, parse_timeline, read_textgrid, textgrid_to_timeline, LexiconSpec, PsycholinguisticFactor,
    RatingLexicon, TranscriptTimeline,
};
use rrkit::features::{FeatureMatrix, FeatureRow};
use rrkit::fluency::{fluency_features, FluencyFeatures, MIN_SILENT_PAUSE_S};
use rrkit::lingfeat::document_features;

use crate::config::{collect_inputs, require_file, stem, usage, Settings};
use crate::Status;

/// `sample<TAB>label` rows.
fn read_labels(path: Option<&Path>) -> anyhow::Result<BTreeMap<String, String>> {
    let Some(path) = path else {
        return Ok(BTreeMap::new());
    };
    require_file(path, "label file")?;
    let mut out = BTreeMap::new();
    for (i, line) in std::fs::read_to_string(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, label) = line
            .split_once('\t')
            .ok_or_else(|| usage(format!("{}:{}: expected sample<TAB>label", path.display(), i + 1)))?;
        out.insert(id.trim().to_string(), label.trim().to_string());
    }
    Ok(out)
}

/// A sample id with its named feature values.
type NamedRow = (String, Vec<(String, Option<f64>)>);

/// Assembles named rows into a matrix; every row must share the column
/// order of the first.
fn rows_to_matrix(rows: Vec<NamedRow>, labels: &BTreeMap<String, String>) -> anyhow::Result<FeatureMatrix> {
    let names: Vec<String> = rows.first().map(|(_, r)| r.iter().map(|(n, _)| n.clone()).collect()).unwrap_or_default();
    let rows = rows
        .into_iter()
        .map(|(id, values)| FeatureRow {
            label: labels.get(&id).cloned(),
            sample_id: id,
            values: values.into_iter().map(|(_, v)| v).collect(),
        })
        .collect();
    Ok(FeatureMatrix::new(names, rows)?)
}

fn write(m: &FeatureMatrix, out: &Path) -> anyhow::Result<()> {
    m.write_csv(BufWriter::new(File::create(out).with_context(|| out.display().to_string())?))?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct LingfeatArgs {
    /// Text files or directories of `.txt` files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output feature matrix CSV.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Easy-word list enabling the Dale-Chall index.
    #[arg(long)]
    pub easy_words: Option<PathBuf>,
    /// Rating lexicon as `FACTOR:PATH:MIN:MAX` (source scale bounds);
    /// ratings are mapped onto 9 points.
    #[arg(long = "lexicon")]
    pub lexicons: Vec<String>,
    /// `sample<TAB>label` file attaching labels to rows.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

fn parse_lexicon(spec: &str) -> anyhow::Result<RatingLexicon> {
    let bad = || usage(format!("lexicon `{spec}` must be FACTOR:PATH:MIN:MAX"));
    let parts: Vec<&str> = spec.rsplitn(3, ':').collect();
    let [max, min, head] = parts.as_slice() else {
        return Err(bad());
    };
    let (factor, path) = head.split_once(':').ok_or_else(bad)?;
    let factor: PsycholinguisticFactor = factor.parse().map_err(|e: String| usage(e))?;
    require_file(Path::new(path), "lexicon")?;
    let lex_spec = LexiconSpec {
        factor,
        scale_points: 9,
        source_min: min.parse().map_err(|_| bad())?,
        source_max: max.parse().map_err(|_| bad())?,
    };
    Ok(parse_rating_lexicon(Path::new(path), lex_spec)?)
}

pub fn lingfeat(args: LingfeatArgs, settings: Settings) -> anyhow::Result<Status> {
    let easy: Option<HashSet<String>> = match settings.path(args.easy_words, "easy_words") {
        Some(p) => {
            require_file(&p, "easy-word list")?;
            Some(std::fs::read_to_string(&p)?.lines().map(|l| l.trim().to_lowercase()).filter(|l| !l.is_empty()).collect())
        }
        None => None,
    };
    let lexicons = settings
        .list(args.lexicons, "lexicon")
        .iter()
        .map(|s| parse_lexicon(s))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let labels = read_labels(settings.path(args.labels, "labels").as_deref())?;
    let inputs = collect_inputs(&args.inputs, &["txt"])?;

    let mut rows = Vec::new();
    let mut failed = 0;
    for path in &inputs {
        let result = std::fs::read_to_string(path)
            .map_err(anyhow::Error::from)
            .and_then(|t| Ok(document_features(&t, easy.as_ref(), &lexicons)?));
        match result {
            Ok(r) => rows.push((stem(path), r)),
            Err(e) => {
                eprintln!("{}: {e:#}", path.display());
                failed += 1;
            }
        }
    }
    if rows.is_empty() {
        anyhow::bail!("no text could be processed");
    }
    write(&rows_to_matrix(rows, &labels)?, &args.out)?;
    Ok(if failed > 0 { Status::Partial } else { Status::Complete })
}

#[derive(Debug, Args)]
pub struct FluencyArgs {
    /// Timeline TSVs or TextGrid files, or directories of them.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output feature matrix CSV.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Shortest silence counted as a pause, in seconds.
    #[arg(long)]
    pub min_pause: Option<f64>,
    /// TextGrid tier holding speech/pause labels.
    #[arg(long, default_value = "kind")]
    pub label_tier: String,
    /// TextGrid tier holding one interval per syllable.
    #[arg(long)]
    pub syllable_tier: Option<String>,
    /// `sample<TAB>label` file attaching labels to rows.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

fn load_timeline(path: &Path, label_tier: &str, syllable_tier: Option<&str>) -> anyhow::Result<TranscriptTimeline> {
    let is_grid = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("textgrid"));
    Ok(if is_grid {
        let grid = read_textgrid(&std::fs::read_to_string(path)?)?;
        textgrid_to_timeline(&grid, label_tier, syllable_tier)?
    } else {
        parse_timeline(path)?
    })
}

pub fn fluency(args: FluencyArgs, settings: Settings) -> anyhow::Result<Status> {
    let min_pause = settings.get(args.min_pause, "min_pause", MIN_SILENT_PAUSE_S)?;
    if !(min_pause >= 0.0) {
        return Err(usage(format!("min_pause {min_pause} must be non-negative")));
    }
    let labels = read_labels(settings.path(args.labels, "labels").as_deref())?;
    let inputs = collect_inputs(&args.inputs, &["tsv", "textgrid"])?;

    let mut rows = Vec::new();
    let mut failed = 0;
    for path in &inputs {
        let result = load_timeline(path, &args.label_tier, args.syllable_tier.as_deref())
            .and_then(|t| Ok(fluency_features::<f64>(&t, min_pause)?));
        match result {
            Ok(f) => {
                let values = FluencyFeatures::<f64>::COLUMNS
                    .iter()
                    .zip(f.values())
                    .map(|(n, v)| (n.to_string(), v))
                    .collect();
                rows.push((stem(path), values));
            }
            Err(e) => {
                eprintln!("{}: {e:#}", path.display());
                failed += 1;
            }
        }
    }
    if rows.is_empty() {
        anyhow::bail!("no timeline could be processed");
    }
    write(&rows_to_matrix(rows, &labels)?, &args.out)?;
    Ok(if failed > 0 { Status::Partial } else { Status::Complete })
}
