//! `gaze`: clean gaze logs and extract the feature matrix.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use rrkit::clean::{apply_overrides, clean_trace, load_overrides, CleanParams, CleanedTrace};
use rrkit::corpus::{parse_aoi_layout, parse_gaze_log};
use rrkit::features::{aggregate_columns, build_matrix};

use crate::config::{collect_inputs, require_file, stem, usage, Settings};
use crate::Status;

#[derive(Debug, Args)]
pub struct GazeArgs {
    /// Gaze log CSV files or directories of them.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Word/line layout JSON of the stimulus text.
    #[arg(long)]
    pub layout: Option<PathBuf>,
    /// Output feature matrix CSV.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Cleaning parameters, e.g. `min-fix-ms=50 max-fix-ms=1000`.
    #[arg(long, num_args = 1..)]
    pub params: Vec<String>,
    /// Directory of manual word-assignment TSVs named `<log stem>.tsv`.
    #[arg(long)]
    pub overrides_dir: Option<PathBuf>,
    /// Also write per-area feature means and SDs to this CSV.
    #[arg(long)]
    pub aggregate_by_element: Option<PathBuf>,
}

pub fn clean_params(settings: &Settings) -> anyhow::Result<CleanParams> {
    let d = CleanParams::default();
    let p = CleanParams {
        min_fix_ms: settings.get(None, "min_fix_ms", d.min_fix_ms)?,
        max_fix_ms: settings.get(None, "max_fix_ms", d.max_fix_ms)?,
        isolation_gap_words: settings.get(None, "isolation_gap_words", d.isolation_gap_words)?,
        smoothing_enabled: settings.get(None, "smoothing", d.smoothing_enabled)?,
    };
    p.validate().map_err(|e| usage(e.to_string()))?;
    Ok(p)
}

pub fn run(args: GazeArgs, mut settings: Settings) -> anyhow::Result<Status> {
    settings.apply_pairs(&args.params)?;
    let params = clean_params(&settings)?;
    let layout_path = settings.path(args.layout, "layout").ok_or_else(|| usage("layout not found: pass --layout"))?;
    require_file(&layout_path, "layout")?;
    if let Some(dir) = &args.overrides_dir {
        require_file(dir, "overrides directory")?;
    }
    let inputs = collect_inputs(&args.inputs, &["csv"])?;
    let layout = parse_aoi_layout(&layout_path).with_context(|| format!("layout {}", layout_path.display()))?;

    let mut cleaned: Vec<CleanedTrace> = Vec::with_capacity(inputs.len());
    let mut failed = 0;
    for path in &inputs {
        let result = (|| -> anyhow::Result<CleanedTrace> {
            let trace = parse_gaze_log(path)?;
            let mut c = clean_trace(&trace, &layout, &params)?;
            if let Some(dir) = &args.overrides_dir {
                let file = dir.join(format!("{}.tsv", stem(path)));
                if file.exists() {
                    c.fixations = apply_overrides(&c.fixations, &load_overrides(&file)?, &layout)?;
                }
            }
            rrkit::features::extract_row(&c, &layout)?;
            Ok(c)
        })();
        match result {
            Ok(c) => cleaned.push(c),
            Err(e) => {
                eprintln!("{}: {e:#}", path.display());
                failed += 1;
            }
        }
    }
    if cleaned.is_empty() {
        anyhow::bail!("no gaze log could be processed");
    }
    let matrix = build_matrix(&cleaned, &layout)?;
    matrix.write_csv(BufWriter::new(File::create(&args.out).with_context(|| args.out.display().to_string())?))?;
    log::info!("{} rows x {} features -> {}", matrix.rows.len(), matrix.n_features(), args.out.display());

    if let Some(path) = &args.aggregate_by_element {
        let mut w = csv::Writer::from_path(path)?;
        for s in aggregate_columns(&matrix) {
            w.serialize(s)?;
        }
        w.flush()?;
    }
    Ok(if failed > 0 { Status::Partial } else { Status::Complete })
}
