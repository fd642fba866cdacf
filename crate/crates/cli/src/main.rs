mod cli;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use misfact::Exec;

use cli::{Cli, Command};
use commands::{Failure, Session};

fn exec_for(threads: usize) -> anyhow::Result<Exec> {
    if threads == 1 || !cfg!(feature = "parallel") {
        return Ok(Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    if threads > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(Exec::Parallel)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version land here too, with exit code 0
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let exec = match exec_for(cli.threads) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    };
    let session = Session { engine: commands::engine(cli.cap), exec, cap: cli.cap };
    let result = match &cli.command {
        Command::Poly(a) => commands::poly(&session, a),
        Command::Factor(a) => commands::factor(&session, a),
        Command::Count(a) => commands::count(&session, a),
        Command::Roots(a) => commands::roots(&session, a),
        Command::Verify(a) => commands::verify(&session, a),
        Command::Plot(a) => commands::plot(&session, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
