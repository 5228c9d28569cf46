//! Library side of the `dmolab` binary: argument resolution, dispatch and
//! artifact publication.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::ArgMatches;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cli::{ChainCommand, Cli, Command, DmoCommand, DynamicsCommand, HexCommand, NbodyCommand};
use crate::commands::Context;
use crate::output::Artifact;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge { what: String, size: usize, limit: usize },
    #[error("{0}")]
    Compute(String),
    #[error(transparent)]
    Dmo(#[from] dmolab_dmo::DmoError),
    #[error(transparent)]
    Extended(#[from] dmolab_extended::ExtendedError),
    #[error(transparent)]
    ManyBody(#[from] dmolab_manybody::ManyBodyError),
    #[error(transparent)]
    Chain(#[from] dmolab_chain::ChainError),
    #[error(transparent)]
    Hex(#[from] dmolab_hex::HexError),
}

impl CliError {
    /// 2 for rejected input, 1 for failures while computing or writing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::TooLarge { .. } => 2,
            CliError::Dmo(e) if matches!(e, dmolab_dmo::DmoError::InvalidParams(_) | dmolab_dmo::DmoError::CutoffTooSmall { .. }) => 2,
            CliError::Extended(dmolab_extended::ExtendedError::InvalidParams(_)) => 2,
            CliError::ManyBody(dmolab_manybody::ManyBodyError::InvalidParams(_)) => 2,
            CliError::Chain(_) | CliError::Hex(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub command: String,
    /// Subcommand, output format and resolved parameters; hashed into the manifest.
    pub config: Value,
    /// Files written, manifest last. Empty on a dry run.
    pub written: Vec<PathBuf>,
}

fn leaf(matches: &ArgMatches) -> &ArgMatches {
    match matches.subcommand() {
        Some((_, sub)) => leaf(sub),
        None => matches,
    }
}

struct Runner<'a> {
    cli: &'a Cli,
    leaf: &'a ArgMatches,
    file: Option<Map<String, Value>>,
}

impl Runner<'_> {
    fn run<P>(&self, command: &str, args: &P, handler: fn(&Context, &P) -> Result<Vec<Artifact>, CliError>) -> Result<Outcome, CliError>
    where
        P: Serialize + DeserializeOwned,
    {
        let params = config::resolve(args, self.leaf, self.file.as_ref())?;
        let common = &self.cli.common;
        let config = json!({
            "command": command,
            "format": common.format,
            "params": serde_json::to_value(&params).map_err(|e| CliError::Config(e.to_string()))?,
        });
        let ctx = Context {
            format: common.format,
            dry_run: common.dry_run,
        };
        let artifacts = handler(&ctx, &params)?;
        let written = if common.dry_run {
            Vec::new()
        } else {
            output::publish(&common.out_dir, command, &config, &artifacts)?
        };
        Ok(Outcome {
            command: command.to_owned(),
            config,
            written,
        })
    }
}

/// Runs one parsed command line. `matches` must come from the same parse as `cli`.
pub fn run(cli: &Cli, matches: &ArgMatches) -> Result<Outcome, CliError> {
    let file = cli.common.config.as_deref().map(config::load_config).transpose()?;
    let r = Runner {
        cli,
        leaf: leaf(matches),
        file,
    };
    match &cli.command {
        Command::Dmo(DmoCommand::Spectrum(a)) => r.run("dmo spectrum", a, commands::dmo_spectrum),
        Command::Dmo(DmoCommand::Blocks(a)) => r.run("dmo blocks", a, commands::dmo_blocks),
        Command::Dmo(DmoCommand::Susy(a)) => r.run("dmo susy", a, commands::dmo_susy),
        Command::Dmo(DmoCommand::Fw(a)) => r.run("dmo fw", a, commands::dmo_fw),
        Command::Twoparticle(a) => r.run("twoparticle", a, commands::two_particle),
        Command::Nbody(NbodyCommand::Nest(a)) => r.run("nbody nest", a, commands::nbody_nest),
        Command::Dynamics(d) => match &d.command {
            Some(DynamicsCommand::Run(a)) => r.run("dynamics run", a, commands::dynamics_run_cmd),
            Some(DynamicsCommand::Scan(a)) => r.run("dynamics scan", a, commands::dynamics_scan_cmd),
            None => r.run("dynamics scan", &d.scan, commands::dynamics_scan_cmd),
        },
        Command::Chain(ChainCommand::Gen(a)) => r.run("chain gen", a, commands::chain_gen),
        Command::Chain(ChainCommand::Diag(a)) => r.run("chain diag", a, commands::chain_diag),
        Command::Chain(ChainCommand::Dispersion(a)) => r.run("chain dispersion", a, commands::chain_dispersion),
        Command::Hex(HexCommand::Gen(a)) => r.run("hex gen", a, commands::hex_gen),
        Command::Hex(HexCommand::Deform(a)) => r.run("hex deform", a, commands::hex_deform),
        Command::Hex(HexCommand::Diag(a)) => r.run("hex diag", a, commands::hex_diag),
        Command::Hex(HexCommand::Dispersion(a)) => r.run("hex dispersion", a, commands::hex_dispersion_cmd),
        Command::Hex(HexCommand::Conic(a)) => r.run("hex conic", a, commands::hex_conic),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::{CommandFactory, FromArgMatches};
    let matches = Cli::command()
        .try_get_matches_from(args)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Config(e.to_string()))?;
    run(&cli, &matches)
}

/// Caps the worker pool from `DMOLAB_THREADS`, if set.
pub fn apply_thread_limit() -> Result<(), CliError> {
    let Ok(text) = std::env::var("DMOLAB_THREADS") else {
        return Ok(());
    };
    let workers: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|w| *w > 0)
        .ok_or_else(|| CliError::Config(format!("DMOLAB_THREADS = `{text}` is not a positive integer")))?;
    dmolab_opkit::par::set_worker_count(workers);
    Ok(())
}
