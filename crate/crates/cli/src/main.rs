mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Suite};
use manifest::RunManifest;

const THREADS_VAR: &str = "LP_THREADS";

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn seed_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Verify(suite) => match suite {
            Suite::Lp { common, .. }
            | Suite::Besov { common, .. }
            | Suite::Bilinear { common, .. }
            | Suite::Heatchar { common, .. }
            | Suite::Bernstein { common, .. } => Some(common.seed),
            Suite::Comb { .. } => None,
        },
        Command::Solve(a) => Some(a.solver.seed),
        Command::Sweep(a) => Some(a.solver.seed),
        Command::Generate(a) => Some(a.seed),
        Command::Decompose(_) | Command::Norm(_) => None,
    }
}

fn name_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Decompose(_) => "decompose",
        Command::Norm(_) => "norm",
        Command::Verify(s) => match s {
            Suite::Lp { .. } => "verify lp",
            Suite::Besov { .. } => "verify besov",
            Suite::Bilinear { .. } => "verify bilinear",
            Suite::Heatchar { .. } => "verify heatchar",
            Suite::Comb { .. } => "verify comb",
            Suite::Bernstein { .. } => "verify bernstein",
        },
        Command::Solve(_) => "solve",
        Command::Sweep(_) => "sweep",
        Command::Generate(_) => "generate",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("lp: error: {msg}");
        return ExitCode::from(2);
    }
    let started = manifest::now_ms();
    let result = match &cli.command {
        Command::Decompose(a) => commands::decompose(a),
        Command::Norm(a) => commands::norm(a),
        Command::Verify(s) => commands::verify(s),
        Command::Solve(a) => commands::solve(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Generate(a) => commands::generate(a),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("lp: error: {e}");
            return ExitCode::from(2);
        }
    };
    let code: u8 = if outcome.pass { 0 } else { 1 };
    let record = RunManifest {
        command: name_of(&cli.command).to_string(),
        config: &cli.command,
        version: env!("CARGO_PKG_VERSION"),
        seed: seed_of(&cli.command),
        threads: rayon::current_num_threads(),
        started_unix_ms: started,
        finished_unix_ms: manifest::now_ms(),
        outputs: outcome.outputs,
        results: outcome.results,
        exit_code: code as i32,
    };
    let target = cli.manifest.or(outcome.manifest);
    if let Err(e) = manifest::write(&record, target.as_deref()) {
        eprintln!("lp: error: cannot write manifest: {e}");
        return ExitCode::from(2);
    }
    if !outcome.pass {
        eprintln!("lp: one or more checks failed");
    }
    ExitCode::from(code)
}
