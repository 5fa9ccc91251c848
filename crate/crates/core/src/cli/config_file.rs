//! `--config` files: one `key = value` per line, `#` starts a comment.
//!
//! Keys are flag names without the leading dashes (`theta-deg` or
//! `theta_deg`). File entries are spliced in right after the subcommand name,
//! ahead of the user's own flags, so anything given on the command line wins.

use std::ffi::OsString;
use std::path::Path;

use super::Command;

const BOOLEAN_FLAGS: [&str; 1] = ["scan"];
const FORBIDDEN_KEYS: [&str; 1] = ["config"];

pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key = value", lineno + 1));
        };
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", lineno + 1));
        }
        if FORBIDDEN_KEYS.contains(&key.as_str()) {
            return Err(format!(
                "config line {}: '{key}' cannot be set from a config file",
                lineno + 1
            ));
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

fn to_flags(pairs: &[(String, String)]) -> Result<Vec<OsString>, String> {
    let mut flags = Vec::new();
    for (key, value) in pairs {
        if BOOLEAN_FLAGS.contains(&key.as_str()) {
            match value.as_str() {
                "true" | "1" | "yes" => flags.push(OsString::from(format!("--{key}"))),
                "false" | "0" | "no" => {}
                other => return Err(format!("config key '{key}' expects a boolean, got '{other}'")),
            }
        } else {
            flags.push(OsString::from(format!("--{key}={value}")));
        }
    }
    Ok(flags)
}

/// Rebuilds the argument list with the file's entries inserted after the
/// subcommand token.
pub fn merge(args: &[OsString], path: &Path, subcommand: &str) -> Result<Vec<OsString>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let flags = to_flags(&parse_pairs(&text)?)?;

    let takes_value = ["--format", "--output", "-o", "--config", "--threads"];
    let position = args
        .iter()
        .enumerate()
        .skip(1)
        .find(|(i, a)| {
            a.to_str()
                .is_some_and(|s| Command::NAMES.contains(&s) && s == subcommand)
                && !args[i - 1].to_str().is_some_and(|p| takes_value.contains(&p))
        })
        .map(|(i, _)| i)
        .ok_or_else(|| format!("cannot locate subcommand '{subcommand}' in arguments"))?;

    let mut merged: Vec<OsString> = args[..=position].to_vec();
    merged.extend(flags);
    merged.extend_from_slice(&args[position + 1..]);
    Ok(merged)
}
