use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use dmolab_cli::cli::Cli;
use dmolab_cli::CliError;

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = dmolab_cli::apply_thread_limit().and_then(|()| dmolab_cli::run(&cli, &matches));
    match result {
        Ok(outcome) if cli.common.dry_run => {
            println!("{}", serde_json::to_string_pretty(&outcome.config).expect("plain JSON values"));
            ExitCode::SUCCESS
        }
        Ok(outcome) => {
            for path in &outcome.written {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("dmolab: {e}");
    ExitCode::from(e.exit_code() as u8)
}
