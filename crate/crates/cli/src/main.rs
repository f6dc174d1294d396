mod args;
mod commands;
mod manifest;
mod render;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, CliResult};
use manifest::{strip_output_flags, OutputDigest, RunManifest};
use snowflake_core::MEMO_CAP_VAR;

const EXIT_VALIDATION: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    ExitCode::from(run(&argv))
}

fn run(argv: &[String]) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match (&cli.replay, &cli.command) {
        (Some(path), None) => replay(path, cli.out.as_deref()),
        (Some(_), Some(_)) => {
            eprintln!("error: --replay takes no subcommand");
            return EXIT_USAGE;
        }
        (None, None) => {
            eprintln!("error: a subcommand is required");
            return EXIT_USAGE;
        }
        (None, Some(cmd)) => fresh(&cli, cmd, &argv[1..]),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            EXIT_VALIDATION
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
    }
}

fn read_stdin() -> CliResult<String> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("cannot read stdin: {e}")))?;
    Ok(s)
}

/// Runs a subcommand. Fits use a pool of `--jobs` workers, everything
/// else a single worker.
fn execute(cmd: &Command, stdin: Option<&str>) -> CliResult<String> {
    let threads = match cmd {
        Command::Fit(a) => a.jobs,
        _ => 1,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match cmd {
        Command::Eigen(a) => commands::eigen(a),
        Command::Present(a) => commands::present(a),
        Command::Vm(a) => commands::vm_cmd(a),
        Command::Word(a) => commands::word(a),
        Command::Disk(a) => commands::disk(a),
        Command::Ball(a) => commands::ball(a),
        Command::Fit(a) => commands::fit(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Solve(a) => commands::solve(a, stdin.unwrap_or("")),
        Command::Render(a) => commands::render_cmd(a),
    })
}

fn write_output(out: Option<&str>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {path}: {e}"))),
        None => {
            let mut handle = io::stdout().lock();
            handle
                .write_all(text.as_bytes())
                .and_then(|_| handle.flush())
                .map_err(|e| CliError::Io(format!("cannot write stdout: {e}")))
        }
    }
}

fn fresh(cli: &Cli, cmd: &Command, args: &[String]) -> CliResult<()> {
    let stdin = match cmd {
        Command::Solve(_) => Some(read_stdin()?),
        _ => None,
    };
    let text = execute(cmd, stdin.as_deref())?;
    write_output(cli.out.as_deref(), &text)?;
    if let Some(path) = &cli.manifest {
        let env: BTreeMap<String, String> =
            std::env::var(MEMO_CAP_VAR).ok().map(|v| (MEMO_CAP_VAR.to_string(), v)).into_iter().collect();
        let m = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            argv: strip_output_flags(args),
            params: serde_json::to_value(cmd).expect("parameters serialize"),
            env,
            stdin,
            output: OutputDigest::of(cli.out.clone(), &text),
        };
        let mut body = serde_json::to_string_pretty(&m).expect("manifest serializes");
        body.push('\n');
        fs::write(path, body).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}

fn replay(path: &str, out: Option<&str>) -> CliResult<()> {
    let body = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))?;
    let m: RunManifest =
        serde_json::from_str(&body).map_err(|e| CliError::Validation(format!("manifest {path} is malformed: {e}")))?;
    if let Some(v) = m.env.get(MEMO_CAP_VAR) {
        std::env::set_var(MEMO_CAP_VAR, v);
    }
    let mut argv = vec!["snowflake".to_string()];
    argv.extend(m.argv.iter().cloned());
    let cli = Cli::try_parse_from(&argv)
        .map_err(|_| CliError::Validation(format!("manifest {path} holds an invalid command line")))?;
    let cmd =
        cli.command.as_ref().ok_or_else(|| CliError::Validation(format!("manifest {path} names no subcommand")))?;
    let text = execute(cmd, m.stdin.as_deref())?;
    let actual = OutputDigest::of(None, &text);
    if let Some(p) = out {
        fs::write(p, &text).map_err(|e| CliError::Io(format!("cannot write {p}: {e}")))?;
    }
    let matched = actual.sha256 == m.output.sha256;
    let report = serde_json::json!({
        "argv": m.argv,
        "recorded_version": m.version,
        "version": env!("CARGO_PKG_VERSION"),
        "expected": m.output.sha256,
        "actual": actual.sha256,
        "match": matched,
    });
    let mut line = serde_json::to_string_pretty(&report).expect("report serializes");
    line.push('\n');
    write_output(None, &line)?;
    if !matched {
        return Err(CliError::Validation(format!(
            "output digest mismatch: expected {}, got {}",
            m.output.sha256, actual.sha256
        )));
    }
    Ok(())
}
