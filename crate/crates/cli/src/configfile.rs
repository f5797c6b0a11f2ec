//! Flat `key = value` configuration files.
//!
//! Keys are flag names without the leading dashes. Each entry becomes a
//! `--key=value` token placed right after the subcommand, ahead of the user's
//! own flags; since every flag overrides its earlier occurrences, anything on
//! the command line wins over the file.

use crate::error::CliError;
use std::path::Path;

const SUBCOMMANDS: &[&str] = &[
    "point",
    "sweep-width",
    "sweep-temperature",
    "y-ratio",
    "metal-limit",
    "planar-r2",
    "zero-t",
];

/// Keys that are bare switches: `true` enables them, `false` leaves them off.
const SWITCHES: &[&str] = &["m0-only"];

/// Parse file contents into `(key, value)` pairs. `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!(
                "config line {}: invalid key",
                i + 1
            )));
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Splice the entries of any `--config` file into `argv`.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = find_config(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Usage(format!("cannot read config file {path}: {e}")))?;
    let entries = parse(&text)?;
    let Some(at) = argv.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(argv);
    };
    let mut tokens = Vec::new();
    for (key, value) in entries {
        if SWITCHES.contains(&key.as_str()) {
            match value.as_str() {
                "true" => tokens.push(format!("--{key}")),
                "false" => {}
                other => {
                    return Err(CliError::Usage(format!(
                        "config key {key}: expected true or false, got {other}"
                    )));
                }
            }
        } else {
            tokens.push(format!("--{key}={value}"));
        }
    }
    let mut out = argv;
    out.splice(at + 1..at + 1, tokens);
    Ok(out)
}

fn find_config(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let kv = parse("# run\nmodel = constant\n\nn=1.1  # dilute\n").unwrap();
        assert_eq!(
            kv,
            vec![
                ("model".into(), "constant".into()),
                ("n".into(), "1.1".into())
            ]
        );
    }

    #[test]
    fn rejects_lines_without_equals() {
        assert!(parse("model constant").is_err());
    }
}
