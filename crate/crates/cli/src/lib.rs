//! `impactlab` command-line tool: runs kernel, trajectory, cost and regime
//! experiments and writes CSV, SVG and a manifest for each run.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod plot;
pub mod steps;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser};

use args::{Cli, Command};
use commands::{absolute, execute, seed_override, Output};
use error::{CliError, CliResult};
use manifest::{ExperimentManifest, RunConfig};

pub const DEFAULT_OUT: &str = "impactlab-output";

/// Runs the tool on `argv` (including the program name) and returns the exit
/// status.
pub fn run(argv: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let argv = match with_config_file(argv) {
        Ok(a) => a,
        Err(e) => return report(&e, stderr),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => report(&e, stderr),
    }
}

fn report(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    e.exit_code()
}

fn with_config_file(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config::config_path(&argv) else {
        return Ok(argv);
    };
    let extra = config::file_args(path)?;
    let names: Vec<String> = Cli::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(config::inject(&argv, extra, &names))
}

/// Replaces relative input paths with absolute ones and applies the seed
/// override, so the recorded configuration fully determines the output.
fn resolve(mut cmd: Command) -> CliResult<Command> {
    match &mut cmd {
        Command::Impact(c) => c.profile = absolute(&c.profile)?,
        Command::Cost(c) => {
            if let Some(p) = &mut c.profile {
                *p = absolute(p)?;
            }
            if let Some(p) = &mut c.trades {
                *p = absolute(p)?;
            }
        }
        Command::ArbitrageCheck(c) => {
            if let Some(seed) = seed_override()? {
                c.seed = seed;
            }
        }
        _ => {}
    }
    Ok(cmd)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let (config, out_dir) = match cli.command {
        Command::Rerun(r) => {
            let manifest = ExperimentManifest::read(&r.manifest)?;
            let dir = cli.out.unwrap_or_else(|| {
                r.manifest
                    .parent()
                    .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
            });
            (manifest.run_config()?, dir)
        }
        cmd => (
            RunConfig {
                plot: cli.plot,
                command: resolve(cmd)?,
            },
            cli.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        ),
    };
    let output = execute(&config.command)?;
    emit(&config, &output, &out_dir, stdout, stderr)
}

/// Writes stdout, the files and the manifest; all after computation.
fn emit(
    config: &RunConfig,
    output: &Output,
    dir: &Path,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let svg = match (&output.plot, config.plot) {
        (Some(p), true) => Some(plot::emit_plot(p)?),
        (None, true) => {
            return Err(CliError::Usage(format!(
                "{} has nothing to plot",
                config.command.name()
            )));
        }
        _ => None,
    };
    let rendered = output
        .tables
        .iter()
        .map(|(name, t)| Ok((name.clone(), t.to_csv()?)))
        .collect::<CliResult<Vec<_>>>()?;

    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut outputs = Vec::new();
    for (name, text) in &rendered {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        outputs.push(name.clone());
    }
    if let Some(svg) = svg {
        let name = format!("{}.svg", config.command.name());
        let path = dir.join(&name);
        std::fs::write(&path, svg).map_err(|e| CliError::io(&path, e))?;
        outputs.push(name);
    }
    ExperimentManifest::new(config, outputs)?.write(dir)?;

    if let Some((_, text)) = rendered.first() {
        stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e))?;
    }
    for note in &output.notes {
        let _ = writeln!(stderr, "{note}");
    }
    match &output.failure {
        Some(f) => Err(CliError::Failed(f.clone())),
        None => Ok(()),
    }
}
