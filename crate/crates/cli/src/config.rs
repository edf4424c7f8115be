//! `key=value` config files, folded into the command line ahead of the flags
//! so that flags win.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("config line {line}: key {key:?} may not be set from a config file")]
    Forbidden { line: usize, key: String },
    #[error("config line {line}: duplicate key {key:?}")]
    Duplicate { line: usize, key: String },
    #[error("--config given without a path")]
    MissingPath,
}

/// Parses `key=value` lines. Blank lines and lines starting with `#` are
/// skipped; keys may be written with dashes or underscores.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key.starts_with('-') {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
        }
        if key == "config" {
            return Err(ConfigError::Forbidden { line: i + 1, key });
        }
        if out.iter().any(|(seen, _)| *seen == key) {
            return Err(ConfigError::Duplicate { line: i + 1, key });
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

/// Rewrites `prog sub [flags]` so that entries of any `--config` file come
/// right after the subcommand. Unknown keys then surface as unknown flags.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => path = Some(it.next().ok_or(ConfigError::MissingPath)?),
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let entries = load(Path::new(&path))?;
    let split = rest.len().min(2);
    let mut out: Vec<OsString> = rest[..split].to_vec();
    for (k, v) in entries {
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    out.extend(rest.drain(split..));
    Ok(out)
}
