use std::process::ExitCode;

use clap::Parser;
use rode_cli::{run, Cli};

fn init_logging(verbose: u8) {
    let default = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RODE_LOG", default)).init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    let out = match run(&cli.command) {
        Ok(out) => out,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let text = out.render(cli.format);
    match &cli.output {
        Some(path) => {
            if let Err(err) = std::fs::write(path, text) {
                eprintln!("error: {}: {err}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(out.exit_code() as u8)
}
