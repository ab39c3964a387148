//! CoNLL-U dependency parses.
//!
//! Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are skipped. A
//! `# element = <name>` comment tags the sentence with a text element
//! (setting, plot, ...) for per-element similarity breakdowns.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{malformed, read_path, CorpusError, Result};

/// One token with the four properties syntactic similarity uses, plus its
/// surface form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenQuartet {
    pub form: String,
    pub lemma: String,
    /// Universal POS tag.
    pub pos: String,
    pub dep_rel: String,
    /// |index - head index|, 0 for the root.
    pub dep_dist: usize,
    /// 1-based head index within the sentence, 0 for the root.
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParsedSentence {
    pub tokens: Vec<TokenQuartet>,
    pub element: Option<String>,
}

pub fn parse_conllu(path: &Path) -> Result<Vec<ParsedSentence>> {
    read_conllu(&read_path(path)?)
}

pub fn read_conllu(text: &str) -> Result<Vec<ParsedSentence>> {
    let mut sentences = Vec::new();
    // (token, head) pairs of the sentence under construction
    let mut pending: Vec<(TokenQuartet, usize)> = Vec::new();
    let mut element: Option<String> = None;

    let finish = |pending: &mut Vec<(TokenQuartet, usize)>, element: &mut Option<String>, out: &mut Vec<ParsedSentence>| -> Result<()> {
        if pending.is_empty() {
            *element = None;
            return Ok(());
        }
        let n = pending.len();
        let sentence_no = out.len() + 1;
        let mut tokens = Vec::with_capacity(n);
        for (i, (mut tok, head)) in pending.drain(..).enumerate() {
            let id = i + 1;
            if head > n {
                return Err(CorpusError::BadHead {
                    sentence: sentence_no,
                    token: id,
                });
            }
            tok.dep_dist = if head == 0 { 0 } else { id.abs_diff(head) };
            tok.head = head;
            tokens.push(tok);
        }
        out.push(ParsedSentence {
            tokens,
            element: element.take(),
        });
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            finish(&mut pending, &mut element, &mut sentences)?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "element" {
                    element = Some(value.trim().to_ascii_lowercase());
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(malformed(line_no, format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| malformed(line_no, "token id is not an integer"))?;
        if id != pending.len() + 1 {
            return Err(malformed(line_no, format!("token ids must be consecutive; expected {}", pending.len() + 1)));
        }
        let head: usize = cols[6]
            .parse()
            .map_err(|_| malformed(line_no, "head is not an integer"))?;
        let lemma = if cols[2] == "_" { cols[1] } else { cols[2] };
        pending.push((
            TokenQuartet {
                form: cols[1].to_string(),
                lemma: lemma.to_string(),
                pos: cols[3].to_string(),
                dep_rel: cols[7].to_string(),
                dep_dist: 0,
                head: 0,
            },
            head,
        ));
    }
    finish(&mut pending, &mut element, &mut sentences)?;
    Ok(sentences)
}
