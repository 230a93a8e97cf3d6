//! Front end for the gru-vader pipeline. Every subcommand writes its reports
//! under `--out` together with a `manifest.json` describing the run.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod pipeline;
pub mod run;
pub mod svg;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use config::AppConfig;
pub use error::CliError;
pub use run::{RunContext, RunManifest};

/// Runs a parsed command line and writes its manifest, also on failure.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let mut config = match &cli.config {
        Some(p) => AppConfig::load(p)?,
        None => AppConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.training.seed = seed;
    }
    let mut ctx = RunContext::new(config, cli.out.clone(), cli.svg)?;
    let result = ctx
        .config
        .validate()
        .and_then(|_| commands::dispatch(&mut ctx, &cli.command));
    let args = serde_json::json!({
        "config": cli.config,
        "seed": cli.seed,
        "out": cli.out,
        "svg": cli.svg,
        "command": cli.command,
    });
    ctx.write_manifest(cli.command.name(), args, &result)?;
    result
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
