//! Key-value config files that mirror command-line flags.
//!
//! Each non-blank line is `key = value` (`#` starts a comment). A key
//! stands for the flag `--key` with `_` read as `-`; the value `true` turns
//! on a switch and `false` leaves it off. File flags are placed before the
//! command-line flags, so the command line wins.

use std::ffi::OsString;
use std::fs;

use crate::error::{HarnessError, Result};

pub fn parse_config(text: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            HarnessError::Spec(format!("config line {}: expected `key = value`", i + 1))
        })?;
        let flag = format!("--{}", key.trim().replace('_', "-"));
        match value.trim() {
            "true" => out.push(flag.into()),
            "false" => {}
            v => {
                out.push(flag.into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

/// Removes `--config PATH` from `args` and splices the file's flags in
/// right after the subcommand words.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = Some(
                it.next()
                    .ok_or_else(|| HarnessError::Spec("--config needs a path".into()))?,
            );
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let file_args = parse_config(&fs::read_to_string(&path)?)?;
    let at = 1 + rest
        .iter()
        .skip(1)
        .take_while(|a| !a.to_string_lossy().starts_with('-'))
        .count();
    rest.splice(at.min(rest.len())..at.min(rest.len()), file_args);
    Ok(rest)
}
