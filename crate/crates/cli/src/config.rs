//! Flat `key=value` settings merged from a config file and command-line
//! overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// A problem with how the tool was invoked (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Keys use `_` internally; `-` in input is accepted as a synonym.
fn normalize_key(k: &str) -> String {
    k.trim().replace('-', "_").to_ascii_lowercase()
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str, origin: &str) -> anyhow::Result<Self> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("{origin}:{}: expected key=value", i + 1)))?;
            s.values.insert(normalize_key(k), v.trim().to_string());
        }
        Ok(s)
    }

    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            None => Ok(Settings::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| usage(format!("config file {}: {e}", p.display())))?;
                Self::parse(&text, &p.display().to_string())
            }
        }
    }

    /// Applies `key=value` overrides given on the command line.
    pub fn apply_pairs(&mut self, pairs: &[String]) -> anyhow::Result<()> {
        for p in pairs {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| usage(format!("parameter `{p}` is not key=value")))?;
            self.values.insert(normalize_key(k), v.trim().to_string());
        }
        Ok(())
    }

    /// Flag value if given, else the setting, else `default`.
    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> anyhow::Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| usage(format!("setting {key}={raw} has the wrong type"))),
        }
    }

    pub fn get_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|raw| raw.parse().map_err(|_| usage(format!("setting {key}={raw} has the wrong type"))))
            .transpose()
    }

    pub fn path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.values.get(key).map(PathBuf::from))
    }

    /// Comma-separated list from the setting when the flag list is empty.
    pub fn list(&self, flag: Vec<String>, key: &str) -> Vec<String> {
        if !flag.is_empty() {
            return flag;
        }
        self.values
            .get(key)
            .map(|v| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
            .unwrap_or_default()
    }
}

/// Errors unless `path` exists.
pub fn require_file(path: &Path, what: &str) -> anyhow::Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(usage(format!("{what} not found: {}", path.display())))
    }
}

/// Expands directories (non-recursively, files only) and orders everything
/// by file name, then full path. `extensions` filters directory entries.
pub fn collect_inputs(paths: &[PathBuf], extensions: &[&str]) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            for entry in std::fs::read_dir(p)? {
                let path = entry?.path();
                let ext_ok = path
                    .extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| extensions.iter().any(|x| x.eq_ignore_ascii_case(e)));
                if path.is_file() && ext_ok {
                    out.push(path);
                }
            }
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            return Err(usage(format!("input not found: {}", p.display())));
        }
    }
    out.sort_by(|a, b| a.file_name().cmp(&b.file_name()).then_with(|| a.cmp(b)));
    out.dedup();
    if out.is_empty() {
        return Err(usage("no input files"));
    }
    Ok(out)
}

pub fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let mut s = Settings::parse("# comment\nalpha = 0.05\nmin-fix-ms=40\n", "cfg").unwrap();
        assert_eq!(s.get(None, "alpha", 0.01).unwrap(), 0.05);
        assert_eq!(s.get(Some(0.001), "alpha", 0.01).unwrap(), 0.001);
        assert_eq!(s.get(None, "min_fix_ms", 50i64).unwrap(), 40);
        s.apply_pairs(&["min-fix-ms=60".into()]).unwrap();
        assert_eq!(s.get(None, "min_fix_ms", 50i64).unwrap(), 60);
        assert_eq!(s.get(None, "seed", 7u64).unwrap(), 7);
    }

    #[test]
    fn bad_lines_are_usage_errors() {
        let e = Settings::parse("alpha\n", "cfg").unwrap_err();
        assert!(e.is::<UsageError>());
        let s = Settings::parse("alpha=x\n", "cfg").unwrap();
        assert!(s.get(None, "alpha", 0.01).unwrap_err().is::<UsageError>());
    }
}
