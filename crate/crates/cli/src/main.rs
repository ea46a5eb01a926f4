//! `udcp`: verify, measure, bound and search uniquely decodable code pairs.
//!
//! Every subcommand prints one JSON document (or its indented rendering) on
//! stdout and a run manifest on stderr. Exit codes: 0 success, 1 usage or
//! domain error, 2 verification failure, 3 search budget exhausted.

mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use commands::{Cli, Context, Status};
use output::{document, render_human, to_json_line, RunManifest};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();

    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(1);
        }
    }

    let mut ctx = Context::new(cli.global.seed);
    let name = cli.command.name();
    let result = commands::run(&cli.command, &mut ctx);

    let code: u8 = match result {
        Ok((body, status)) => {
            let doc = document(name, body);
            let text = if cli.global.json {
                match to_json_line(&doc) {
                    Ok(line) => line + "\n",
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
            } else {
                render_human(&doc)
            };
            print!("{text}");
            match status {
                Status::Ok => 0,
                Status::VerificationFailed => 2,
                Status::BudgetExhausted => 3,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            commands::exit_code_for(&e)
        }
    };

    let manifest = RunManifest::new(name, argv, ctx.seed, ctx.inputs, start.elapsed(), code as i32);
    let line = to_json_line(&manifest).unwrap_or_default();
    match &cli.global.manifest {
        Some(path) => {
            if let Err(e) = std::fs::write(path, line + "\n") {
                eprintln!("error: cannot write manifest {path}: {e}");
                return ExitCode::from(1);
            }
        }
        None => eprintln!("{line}"),
    }
    ExitCode::from(code)
}
