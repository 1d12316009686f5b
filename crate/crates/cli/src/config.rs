//! Merging a flat `key = value` file under the command-line flags.
//!
//! Each key names a long flag of the chosen subcommand. The file's values are
//! spliced into argv right after the subcommand name, so any flag given on
//! the command line comes later and overrides them.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Command};

/// Global options that take a value and may precede the subcommand.
const VALUED_GLOBALS: [&str; 2] = ["--config", "--threads"];

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if VALUED_GLOBALS.contains(&s.as_ref()) {
            i += 2;
            continue;
        }
        if !s.starts_with('-') {
            return Some(i);
        }
        i += 1;
    }
    None
}

/// Returns argv with the config file's entries inserted, or a usage message.
pub fn merge(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("--config {}: {e}", path.display()))?;
    let kv = doslab::lattice::parse_kv(&text).map_err(|e| format!("--config {}: {e}", path.display()))?;
    let Some(at) = subcommand_index(&args) else { return Ok(args) };
    let name = args[at].to_string_lossy().to_string();
    let Some(sub) = cmd.find_subcommand(&name) else { return Ok(args) };
    let mut injected = Vec::new();
    for (key, value) in kv {
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config" && key != "help" && key != "version")
            .ok_or_else(|| format!("--config {}: unknown key {key:?} for `{name}`", path.display()))?;
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" => injected.push(OsString::from(format!("--{key}"))),
                "false" => {}
                other => return Err(format!("--config {}: {key} must be true or false, got {other:?}", path.display())),
            },
            _ => injected.push(OsString::from(format!("--{key}={value}"))),
        }
    }
    let mut out = args[..=at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}
