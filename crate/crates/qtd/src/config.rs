//! `key = value` run configuration files merged into the command line.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;

use crate::error::CliError;

/// Parses a configuration file: one `key = value` per line, `#` comments,
/// blank lines ignored. Keys are long flag names without the dashes.
pub fn parse(text: &str, origin: &Path) -> Result<Vec<(String, String)>, CliError> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("{}:{}: expected `key = value`", origin.display(), i + 1)));
        };
        let key = k.trim().to_owned();
        if key.is_empty() {
            return Err(CliError::Usage(format!("{}:{}: empty key", origin.display(), i + 1)));
        }
        if entries.iter().any(|(seen, _)| *seen == key) {
            return Err(CliError::Usage(format!("{}:{}: duplicate key `{key}`", origin.display(), i + 1)));
        }
        entries.push((key, v.trim().to_owned()));
    }
    Ok(entries)
}

fn config_path(args: &[OsString]) -> Option<(usize, OsString)> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return args.get(i + 1).map(|p| (i, p.clone()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some((i, OsString::from(p)));
        }
    }
    None
}

fn given_on_command_line(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&eq)
    })
}

/// Expands `--config FILE` into flags placed right after the subcommand, so
/// that anything given on the command line wins. Keys are checked against the
/// subcommand's flags.
pub fn merge(args: Vec<OsString>, cmd: &Command) -> Result<Vec<OsString>, CliError> {
    let Some((_, path)) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path).to_path_buf();
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let entries = parse(&text, &path)?;

    let Some((pos, sub)) = args
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| cmd.find_subcommand(a.to_string_lossy().as_ref()).map(|s| (i, s)))
    else {
        return Ok(args);
    };

    let mut injected = Vec::new();
    for (key, value) in entries {
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config" && key != "help")
            .ok_or_else(|| {
                CliError::Usage(format!("{}: unknown key `{key}` for `{}`", path.display(), sub.get_name()))
            })?;
        if given_on_command_line(&args, &key) {
            continue;
        }
        if arg.get_action().takes_values() {
            injected.push(OsString::from(format!("--{key}")));
            injected.push(OsString::from(value));
        } else {
            match value.as_str() {
                "true" => injected.push(OsString::from(format!("--{key}"))),
                "false" => {}
                other => {
                    return Err(CliError::Usage(format!(
                        "{}: `{key}` is a switch and takes true or false, got `{other}`",
                        path.display()
                    )))
                }
            }
        }
    }
    let mut merged = args[..=pos].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&args[pos + 1..]);
    Ok(merged)
}
