use std::process::ExitCode;

use clap::Parser;
use ppcoh::{run, Cli};

fn init_threads() {
    let Ok(v) = std::env::var("HOPF_THREADS") else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("HOPF_THREADS ignored: {e}");
            }
        }
        _ => log::warn!("HOPF_THREADS={v:?} is not a positive integer; ignored"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    init_threads();
    let cli = Cli::parse();
    let (kind, opts) = cli.command.split();
    match run(kind, opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let ppcoh::CliError::Golden(d) = &e {
                for entry in d {
                    eprintln!("  {entry}");
                }
            }
            eprintln!("ppcoh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
