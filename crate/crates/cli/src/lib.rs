//! Command-line front-end for the rrkit pipelines.
//!
//! Exit codes: 0 when every input was processed, 1 when some inputs failed
//! or the run could not complete, 2 for usage and configuration errors.

pub mod config;
pub mod gaze;
pub mod learn;
pub mod simscore;
pub mod text;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::{Settings, UsageError};

#[derive(Debug, Parser)]
#[command(name = "rrkit", version, about = "Reading-comprehension assessment pipelines")]
pub struct Cli {
    /// Flat key=value settings file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean gaze logs and write the gaze feature matrix.
    Gaze(gaze::GazeArgs),
    /// Keep features whose group means differ (Welch t-test).
    Select(learn::SelectArgs),
    /// Split, cross-validate and fit a linear model.
    Train(learn::TrainArgs),
    /// Apply a saved model to labelled rows and report metrics.
    Eval(learn::EvalArgs),
    /// Score summaries against a reference text.
    Simscore(simscore::SimscoreArgs),
    /// Readability, lexical-variation and rating-profile features of texts.
    Lingfeat(text::LingfeatArgs),
    /// Temporal fluency features of speech timelines.
    Fluency(text::FluencyArgs),
}

/// How a command that did not error finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// Some inputs were skipped.
    Partial,
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
pub fn write_json<T: Serialize + ?Sized>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| anyhow::anyhow!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn execute(cli: Cli) -> anyhow::Result<Status> {
    let settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Gaze(a) => gaze::run(a, settings),
        Command::Select(a) => learn::select(a, settings),
        Command::Train(a) => learn::train(a, settings),
        Command::Eval(a) => learn::eval(a, settings),
        Command::Simscore(a) => simscore::run(a, settings),
        Command::Lingfeat(a) => text::lingfeat(a, settings),
        Command::Fluency(a) => text::fluency(a, settings),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(Status::Complete) => 0,
        Ok(Status::Partial) => 1,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
