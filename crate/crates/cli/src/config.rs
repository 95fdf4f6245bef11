//! Option defaults from a flat TOML file.
//!
//! Every `key = value` pair becomes `--key value` (a `true` boolean becomes
//! a bare `--key`, `false` is dropped) and is placed right after the
//! subcommand name, so flags given on the command line win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub fn file_args(path: &Path) -> CliResult<Vec<OsString>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let table: toml::Table = text.parse()?;
    let mut out = Vec::new();
    for (key, value) in table {
        if matches!(key.as_str(), "config" | "out") {
            return Err(CliError::Usage(format!("config file cannot set '{key}'")));
        }
        let flag = OsString::from(format!("--{key}"));
        match value {
            toml::Value::Boolean(true) => out.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => out.extend([flag, s.into()]),
            toml::Value::Integer(i) => out.extend([flag, i.to_string().into()]),
            toml::Value::Float(f) => out.extend([flag, f.to_string().into()]),
            other => {
                return Err(CliError::Usage(format!(
                    "config key '{key}' must be a string, number or boolean, got {}",
                    other.type_str()
                )))
            }
        }
    }
    Ok(out)
}

/// Value of `--config` in `argv`, if any.
pub fn config_path(argv: &[OsString]) -> Option<&Path> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_str()?;
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return it.next().map(Path::new);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            // borrow from the OsString so the lifetime matches argv
            return Some(Path::new(&a.to_str()?[s.len() - p.len()..]));
        }
    }
    None
}

/// Inserts `extra` after the first argument naming a subcommand.
pub fn inject(argv: &[OsString], extra: Vec<OsString>, subcommands: &[&str]) -> Vec<OsString> {
    let at = argv
        .iter()
        .skip(1)
        .position(|a| a.to_str().is_some_and(|s| subcommands.contains(&s)))
        .map(|i| i + 2);
    match at {
        Some(i) => {
            let mut v = argv[..i].to_vec();
            v.extend(extra);
            v.extend_from_slice(&argv[i..]);
            v
        }
        None => argv.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_config_flag() {
        assert_eq!(
            config_path(&os(&["x", "sweep", "--config", "a.toml"])),
            Some(Path::new("a.toml"))
        );
        assert_eq!(
            config_path(&os(&["x", "--config=b.toml", "sweep"])),
            Some(Path::new("b.toml"))
        );
        assert_eq!(config_path(&os(&["x", "sweep"])), None);
    }

    #[test]
    fn injects_after_subcommand() {
        let v = inject(
            &os(&["x", "--plot", "sweep", "--mode", "both"]),
            os(&["--mode", "discrete"]),
            &["sweep"],
        );
        assert_eq!(
            v,
            os(&["x", "--plot", "sweep", "--mode", "discrete", "--mode", "both"])
        );
    }

    #[test]
    fn reads_flat_toml() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(
            &p,
            "regime = \"isochoric\"\nchild = 2e-4\ncount = 5\nplot = true\nx = false\n",
        )
        .unwrap();
        let args = file_args(&p).unwrap();
        let s: Vec<_> = args.iter().map(|a| a.to_str().unwrap()).collect();
        assert_eq!(
            s,
            [
                "--child",
                "0.0002",
                "--count",
                "5",
                "--plot",
                "--regime",
                "isochoric"
            ]
        );
        std::fs::write(&p, "[section]\na = 1\n").unwrap();
        assert!(file_args(&p).is_err());
    }
}
