//! `arrovian`: batch verification front end.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 for
//! usage or input errors. Every run emits a manifest (to `--manifest FILE`,
//! else one line on stderr) with digests of its inputs and outputs; `replay`
//! reruns a manifest and compares.

mod args;
mod commands;
mod manifest;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;

use args::{Cli, Command, ReplayArgs};
use commands::{execute, exit_code_for, Run};
use manifest::{read_manifest, strip_manifest_flag, FileDigest, RunManifest, MANIFEST_SCHEMA};

fn output_digests(run: &Run) -> Vec<FileDigest> {
    let mut out = vec![FileDigest::of("stdout", run.stdout.as_bytes())];
    for (path, bytes) in &run.files {
        out.push(FileDigest::of(path.display().to_string(), bytes));
    }
    out
}

fn replay(r: &ReplayArgs) -> anyhow::Result<u8> {
    let m = read_manifest(&r.recorded).with_context(|| format!("reading {}", r.recorded.display()))?;
    let cli = Cli::try_parse_from(std::iter::once("arrovian".to_string()).chain(m.args.iter().cloned()))
        .context("manifest arguments no longer parse")?;
    if matches!(cli.command, Command::Replay(_)) {
        anyhow::bail!("a manifest cannot replay another replay");
    }
    let (code, digests) = match execute(&cli.command, cli.json) {
        Ok(run) => (u8::from(!run.passed), output_digests(&run)),
        Err(e) => (exit_code_for(&e), Vec::new()),
    };
    let mut same = code == m.exit_code;
    println!("command: arrovian {}", m.args.join(" "));
    println!("exit code: recorded {}, now {code}", m.exit_code);
    for recorded in &m.outputs {
        let now = digests.iter().find(|d| d.name == recorded.name);
        let status = match now {
            Some(d) if d.sha256 == recorded.sha256 => "identical",
            Some(_) => "DIFFERS",
            None => "MISSING",
        };
        same &= status == "identical";
        println!("{}: {status}", recorded.name);
    }
    for extra in digests.iter().filter(|d| !m.outputs.iter().any(|r| r.name == d.name)) {
        same = false;
        println!("{}: NEW", extra.name);
    }
    println!("replay: {}", if same { "reproduced" } else { "NOT reproduced" });
    Ok(u8::from(!same))
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Command::Replay(r) = &cli.command {
        return match replay(r) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        };
    }

    let start = Instant::now();
    let mut code;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut seed = None;
    match execute(&cli.command, cli.json) {
        Ok(run) => {
            code = u8::from(!run.passed);
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(run.stdout.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                code = 2;
            }
            for (path, bytes) in &run.files {
                if let Err(e) = std::fs::write(path, bytes) {
                    eprintln!("error: writing {}: {e}", path.display());
                    code = 2;
                }
            }
            inputs = run
                .inputs
                .iter()
                .map(|(p, b)| FileDigest::of(p.display().to_string(), b))
                .collect();
            outputs = output_digests(&run);
            seed = run.seed;
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            code = exit_code_for(&e);
        }
    }

    let manifest = RunManifest {
        schema: MANIFEST_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cli.command.name().into(),
        args: strip_manifest_flag(&raw),
        parameters: serde_json::to_value(&cli.command).unwrap_or_default(),
        inputs,
        outputs,
        exit_code: code,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        seed,
        threads: cli.threads,
    };
    match &cli.manifest {
        Some(path) => {
            let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: writing manifest {}: {e}", path.display());
                code = 2;
            }
        }
        None => eprintln!("manifest: {}", serde_json::to_string(&manifest).expect("manifest serializes")),
    }
    ExitCode::from(code)
}
