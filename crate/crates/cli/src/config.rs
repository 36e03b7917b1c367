//! `--config FILE` support: each `key=value` line becomes `--key value`
//! inserted right after the subcommand, so flags given on the command line
//! still win.

use std::fs;
use std::path::Path;

const SUBCOMMANDS: [&str; 6] = ["check", "scan", "partition", "predict", "export", "probe"];

/// Path given via `--config FILE` or `--config=FILE`, if any.
pub fn config_path(args: &[String]) -> Option<&str> {
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            return iter.next().map(String::as_str);
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            return Some(path);
        }
    }
    None
}

pub fn parse_config(text: &str) -> Result<Vec<String>, String> {
    let mut flags = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got {line:?}", lineno + 1))?;
        let key = key.trim().trim_start_matches('-');
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key {key:?}", lineno + 1));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            "" | "true" => flags.push(flag),
            "false" => {}
            v => {
                flags.push(flag);
                flags.push(v.to_string());
            }
        }
    }
    Ok(flags)
}

/// Splices config flags into `args` right after the subcommand name.
pub fn apply_config(args: Vec<String>, path: &Path) -> Result<Vec<String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let flags = parse_config(&text)?;
    splice(args, flags)
}

fn splice(mut args: Vec<String>, flags: Vec<String>) -> Result<Vec<String>, String> {
    let mut skip_next = false;
    let mut position = None;
    for (i, arg) in args.iter().enumerate().skip(1) {
        if skip_next {
            skip_next = false;
            continue;
        }
        if arg == "--config" {
            skip_next = true;
            continue;
        }
        if SUBCOMMANDS.contains(&arg.as_str()) {
            position = Some(i + 1);
            break;
        }
    }
    let Some(at) = position else {
        return Ok(args);
    };
    args.splice(at..at, flags);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn finds_config_path() {
        assert_eq!(config_path(&strings(&["dbal", "--config", "a.cfg", "check"])), Some("a.cfg"));
        assert_eq!(config_path(&strings(&["dbal", "check", "--config=b.cfg"])), Some("b.cfg"));
        assert_eq!(config_path(&strings(&["dbal", "check"])), None);
    }

    #[test]
    fn parses_lines() {
        let flags = parse_config("# sweep\nk = 3..8\nn_offset=1..40\nno_symmetry=true\ntiming=false\n\n").unwrap();
        assert_eq!(flags, strings(&["--k", "3..8", "--n-offset", "1..40", "--no-symmetry"]));
        assert!(parse_config("just words").is_err());
        assert!(parse_config("config=x").is_err());
    }

    #[test]
    fn splices_after_subcommand() {
        let args = strings(&["dbal", "--config", "scan", "scan", "--l", "2"]);
        let out = splice(args, strings(&["--k", "3"])).unwrap();
        assert_eq!(out, strings(&["dbal", "--config", "scan", "scan", "--k", "3", "--l", "2"]));
    }
}
