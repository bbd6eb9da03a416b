use std::process;

use clap::error::ErrorKind;
use clap::Parser;
use satlab_cli::{run, Cli, ExitCode, RunConfig, CHECKS};

fn exit(code: ExitCode) -> ! {
    process::exit(code as i32)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit(ExitCode::Success),
                _ => exit(ExitCode::Usage),
            }
        }
    };
    if cli.list_checks {
        for (command, check) in CHECKS {
            println!("{command:<12} {check}");
        }
        exit(ExitCode::Success);
    }
    if let Some(threads) = std::env::var_os("SATLAB_THREADS") {
        let n = threads.to_str().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0);
        let Some(n) = n else {
            eprintln!("usage: SATLAB_THREADS must be a positive integer");
            exit(ExitCode::Usage);
        };
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("numerical failure: thread pool: {e}");
            exit(ExitCode::Numerical);
        }
    }
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("usage: {msg}");
            exit(ExitCode::Usage);
        }
    };
    exit(run(&config))
}
