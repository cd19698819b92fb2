mod artifact;
mod commands;
mod config;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use artifact::{Provenance, Sink};
use config::{json_to_args, Cli, RunConfig};

pub enum CliError {
    /// Bad flags or parameters: exit 2.
    Usage(String),
    /// A verification did not pass: exit 1 with this report.
    Failed(serde_json::Value),
    Core(relnls::Error),
    Io(std::io::Error),
}

impl From<relnls::Error> for CliError {
    fn from(e: relnls::Error) -> Self {
        match e {
            relnls::Error::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Core(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn parse(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let cli = Cli::try_parse_from(&args)?;
    let Some(path) = &cli.json_config else {
        return Ok(cli);
    };
    let usage = |msg: String| Cli::command().error(ErrorKind::ValueValidation, msg);
    if cli.command.is_some() {
        return Err(usage("give either a subcommand or --json-config, not both".into()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let words = json_to_args(&text).map_err(usage)?;
    // Keep the command-line globals except the config itself.
    let mut rebuilt: Vec<OsString> = Vec::new();
    let mut it = args.into_iter();
    rebuilt.extend(it.next());
    while let Some(a) = it.next() {
        if a == "--json-config" {
            it.next();
        } else if !a.to_string_lossy().starts_with("--json-config=") {
            rebuilt.push(a);
        }
    }
    rebuilt.extend(words.into_iter().map(OsString::from));
    let cli = Cli::try_parse_from(rebuilt)?;
    Ok(cli)
}

fn main() -> ExitCode {
    let cli = match parse(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let Some(command) = &cli.command else {
        let _ = Cli::command().print_help();
        return ExitCode::from(2);
    };
    let provenance = Provenance::new(&RunConfig { command, seed: cli.seed });
    let mut sink = Sink::new(&cli.out, provenance);
    match commands::run(command, cli.seed, &mut sink) {
        Ok(()) => {
            for p in sink.written() {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(CliError::Failed(report)) => {
            let doc = serde_json::json!({ "status": "failed", "header": sink.provenance, "report": report });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            ExitCode::from(1)
        }
        Err(CliError::Core(e)) => {
            let doc = serde_json::json!({ "status": "error", "header": sink.provenance, "error": e.to_string() });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: cannot write artifacts to {}: {e}", cli.out.display());
            ExitCode::from(1)
        }
    }
}
