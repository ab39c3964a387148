//! `simscore`: similarity of summaries to a reference text.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use rrkit::corpus::{parse_conllu, parse_embeddings, ParsedSentence};
use rrkit::learn::{fit, Dataset, ModelKind, TrainingMeta};
use rrkit::simsem::{
    preprocess_parsed, preprocess_text, score_units, PairTable, PreprocessResources, ScoreOptions, SimilarityReport,
    SimilaritySource, Taxonomy, Unit,
};
use rrkit::stats::{pearson, spearman};
use serde::Serialize;

use crate::config::{collect_inputs, require_file, stem, usage, Settings};
use crate::learn::scaled_qwk;
use crate::{write_json, Status};

#[derive(Debug, Args)]
pub struct SimscoreArgs {
    /// Reference text: CoNLL-U (`.conllu`) or plain text.
    #[arg(long)]
    pub reference: PathBuf,
    /// Summary files or directories. With a CoNLL-U reference every
    /// summary needs a parse (`.conllu`, or a sibling `<stem>.conllu`).
    #[arg(required = true)]
    pub summaries: Vec<PathBuf>,
    /// Similarity source in precedence order: `embedding:FILE`,
    /// `taxonomy:EDGES,LEMMAS` (alias `wordnet-path`) or `pairs:FILE`.
    /// Levenshtein similarity is always the last resort.
    #[arg(long = "source")]
    pub sources: Vec<String>,
    /// One stopword per line; defaults to a built-in English list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// `word<TAB>lemma` overrides.
    #[arg(long)]
    pub lemma_map: Option<PathBuf>,
    /// Multiword expressions kept as one concept, one per line.
    #[arg(long)]
    pub phrases: Option<PathBuf>,
    /// `words<TAB>replacement` rewrites, e.g. pronouns to names.
    #[arg(long)]
    pub substitutions: Option<PathBuf>,
    /// Minimum word similarity for a match.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Directory for per-summary report JSON; stdout when absent.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Batch CSV of summary,tls,tss,tcs,overall.
    #[arg(long)]
    pub batch: Option<PathBuf>,
    /// TSV of `summary<TAB>score` rater scores to correlate with.
    #[arg(long)]
    pub against_ratings: Option<PathBuf>,
    /// JSON output for the rating comparison; stdout when absent.
    #[arg(long)]
    pub ratings_out: Option<PathBuf>,
}

fn read_opt(path: Option<&Path>, what: &str) -> anyhow::Result<Option<String>> {
    path.map(|p| {
        require_file(p, what)?;
        std::fs::read_to_string(p).with_context(|| p.display().to_string())
    })
    .transpose()
}

fn parse_source(spec: &str) -> anyhow::Result<SimilaritySource> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("source `{spec}` must look like kind:path")))?;
    let read = |p: &str, what: &str| -> anyhow::Result<String> {
        require_file(Path::new(p), what)?;
        Ok(std::fs::read_to_string(p)?)
    };
    Ok(match kind {
        "embedding" => SimilaritySource::Embedding(parse_embeddings(Path::new(arg))?),
        "taxonomy" | "wordnet-path" => {
            let (edges, lemmas) = arg
                .split_once(',')
                .ok_or_else(|| usage(format!("source `{spec}` needs EDGES,LEMMAS")))?;
            SimilaritySource::TaxonomyPath(Taxonomy::read(&read(edges, "taxonomy edges")?, &read(lemmas, "taxonomy lemmas")?)?)
        }
        "pairs" => SimilaritySource::PairTable(PairTable::read(&read(arg, "pair table")?)?),
        other => return Err(usage(format!("unknown source kind `{other}`"))),
    })
}

fn is_conllu(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("conllu"))
}

fn parsed_units(sentences: &[ParsedSentence], resources: &PreprocessResources) -> Vec<Unit> {
    sentences.iter().map(|s| preprocess_parsed(s, resources)).collect()
}

#[derive(Debug, Serialize)]
struct RatingComparison {
    n: usize,
    pearson: Option<f64>,
    spearman: Option<f64>,
    qwk: Option<f64>,
    scale: (i64, i64),
}

pub fn run(args: SimscoreArgs, settings: Settings) -> anyhow::Result<Status> {
    let threshold = settings.get(args.threshold, "threshold", rrkit::simsem::DEFAULT_THRESHOLD)?;
    if !(0.0..=1.0).contains(&threshold) {
        return Err(usage(format!("threshold {threshold} is outside [0, 1]")));
    }
    require_file(&args.reference, "reference")?;
    let resources = PreprocessResources::from_texts(
        read_opt(settings.path(args.stopwords, "stopwords").as_deref(), "stopword list")?.as_deref(),
        read_opt(settings.path(args.lemma_map, "lemma_map").as_deref(), "lemma map")?.as_deref(),
        read_opt(settings.path(args.phrases, "phrases").as_deref(), "phrase list")?.as_deref(),
        read_opt(settings.path(args.substitutions, "substitutions").as_deref(), "substitution list")?.as_deref(),
    )
    .map_err(|e| usage(e.to_string()))?;
    let sources = settings
        .list(args.sources, "source")
        .iter()
        .map(|s| parse_source(s))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if let Some(p) = &args.against_ratings {
        require_file(p, "ratings")?;
    }
    let options = ScoreOptions {
        threshold,
        ..ScoreOptions::default()
    };

    let parsed_mode = is_conllu(&args.reference);
    let reference = if parsed_mode {
        parsed_units(&parse_conllu(&args.reference)?, &resources)
    } else {
        preprocess_text(&std::fs::read_to_string(&args.reference)?, &resources)
    };
    let extensions: &[&str] = if parsed_mode { &["conllu"] } else { &["txt"] };
    let inputs = collect_inputs(&args.summaries, extensions)?;

    let mut reports: BTreeMap<String, SimilarityReport> = BTreeMap::new();
    let mut unparsed = Vec::new();
    let mut failed = 0;
    for path in &inputs {
        let units = if parsed_mode {
            let parse = if is_conllu(path) { path.clone() } else { path.with_extension("conllu") };
            if !parse.exists() {
                unparsed.push(path.display().to_string());
                continue;
            }
            parse_conllu(&parse).map(|s| parsed_units(&s, &resources)).map_err(anyhow::Error::from)
        } else {
            std::fs::read_to_string(path)
                .map(|t| preprocess_text(&t, &resources))
                .map_err(anyhow::Error::from)
        };
        match units.and_then(|u| Ok(score_units(&reference, &u, &sources, &options)?)) {
            Ok(r) => {
                reports.insert(stem(path), r);
            }
            Err(e) => {
                eprintln!("{}: {e:#}", path.display());
                failed += 1;
            }
        }
    }
    if !unparsed.is_empty() {
        eprintln!("summaries lacking parses: {}", unparsed.join(", "));
    }

    match &args.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, r) in &reports {
                write_json(r, Some(&dir.join(format!("{name}.json"))))?;
            }
        }
        None if reports.len() == 1 => write_json(reports.values().next().unwrap(), None)?,
        None => write_json(&reports, None)?,
    }
    if let Some(path) = &args.batch {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["summary", "tls", "tss", "tcs", "overall"])?;
        for (name, r) in &reports {
            w.write_record([name.clone(), r.tls.to_string(), r.tss.to_string(), r.tcs.to_string(), r.overall.to_string()])?;
        }
        w.flush()?;
    }
    if let Some(path) = &args.against_ratings {
        let cmp = compare_ratings(&reports, &std::fs::read_to_string(path)?)?;
        write_json(&cmp, args.ratings_out.as_deref())?;
    }

    if reports.is_empty() {
        anyhow::bail!("no summary could be scored");
    }
    Ok(if failed + unparsed.len() > 0 { Status::Partial } else { Status::Complete })
}

/// Correlates overall similarity with rater scores and measures agreement
/// of a one-feature linear map from similarity onto the rating scale.
fn compare_ratings(reports: &BTreeMap<String, SimilarityReport>, ratings: &str) -> anyhow::Result<RatingComparison> {
    let mut sim = Vec::new();
    let mut score = Vec::new();
    let mut ids = Vec::new();
    for (i, line) in ratings.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, v) = line
            .split_once('\t')
            .ok_or_else(|| usage(format!("ratings line {}: expected summary<TAB>score", i + 1)))?;
        let Ok(v) = v.trim().parse::<f64>() else {
            if i == 0 {
                continue;
            }
            return Err(usage(format!("ratings line {}: `{}` is not a number", i + 1, v.trim())));
        };
        match reports.get(id.trim()) {
            Some(r) => {
                ids.push(id.trim().to_string());
                sim.push(r.overall);
                score.push(v);
            }
            None => log::warn!("no report for rated summary `{}`", id.trim()),
        }
    }
    if sim.len() < 2 {
        anyhow::bail!("fewer than two rated summaries were scored");
    }
    let scale = (
        score.iter().copied().fold(f64::INFINITY, f64::min).round() as i64,
        score.iter().copied().fold(f64::NEG_INFINITY, f64::max).round() as i64,
    );
    let data = Dataset {
        feature_names: vec!["overall".into()],
        sample_ids: ids,
        x: sim.iter().map(|&s| vec![s]).collect(),
        labels: score.iter().map(|s| s.to_string()).collect(),
    };
    let qwk = fit(&data, ModelKind::Regressor, TrainingMeta::default())
        .ok()
        .and_then(|m| {
            let pred: Vec<f64> = data.x.iter().map(|r| m.predict_value(r)).collect();
            scaled_qwk(&pred, &score, scale)
        });
    Ok(RatingComparison {
        n: sim.len(),
        pearson: pearson(&sim, &score).ok(),
        spearman: spearman(&sim, &score).ok(),
        qwk,
        scale,
    })
}
