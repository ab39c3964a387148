//! Dense word vectors in the plain-text `word2vec`/GloVe layout.

use std::collections::HashMap;
use std::path::Path;

use super::{malformed, read_path, CorpusError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub dimension: usize,
    pub vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

pub fn parse_embeddings(path: &Path) -> Result<EmbeddingTable> {
    read_embeddings(&read_path(path)?).map(|(table, _)| table)
}

/// Parses vectors and also returns the tokens that were defined more than
/// once (the last definition wins).
pub fn read_embeddings(text: &str) -> Result<(EmbeddingTable, Vec<String>)> {
    let mut dimension: Option<usize> = None;
    let mut vectors = HashMap::new();
    let mut duplicates = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if i == 0 && fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
            let dim: usize = fields[1].parse().unwrap_or(0);
            if dim == 0 {
                return Err(malformed(line_no, "header declares dimension 0"));
            }
            dimension = Some(dim);
            continue;
        }
        let token = fields[0];
        let values = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| malformed(line_no, "vector component is not a number"))?;
        let dim = *dimension.get_or_insert(values.len());
        if dim == 0 || values.len() != dim {
            return Err(CorpusError::DimensionMismatch(line_no));
        }
        if vectors.insert(token.to_string(), values).is_some() {
            log::warn!("embedding for `{token}` redefined at line {line_no}; keeping the last one");
            duplicates.push(token.to_string());
        }
    }

    let dimension = dimension.ok_or_else(|| malformed(1, "no vectors"))?;
    Ok((EmbeddingTable { dimension, vectors }, duplicates))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_inferred_from_first_record() {
        let (t, _) = read_embeddings("a 1 2 3 4\nb 0 0 0 1\nc 1 1 1 1\n").unwrap();
        assert_eq!(t.dimension, 4);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn short_record_is_dimension_mismatch() {
        let err = read_embeddings("a 1 2 3 4\nb 1 2 3\n").unwrap_err();
        assert!(matches!(err, CorpusError::DimensionMismatch(2)));
    }

    #[test]
    fn header_fixes_dimension() {
        let err = read_embeddings("2 3\na 1 2\n").unwrap_err();
        assert!(matches!(err, CorpusError::DimensionMismatch(2)));
        let (t, _) = read_embeddings("1 2\na 1 2\n").unwrap();
        assert_eq!(t.get("a"), Some(&[1.0, 2.0][..]));
    }

    #[test]
    fn duplicate_token_last_wins() {
        let (t, dups) = read_embeddings("cat 1 0\ncat 0 1\n").unwrap();
        assert_eq!(t.get("cat"), Some(&[0.0, 1.0][..]));
        assert_eq!(dups, vec!["cat".to_string()]);
    }
}
