//! Batch front end. [`run`] returns the exit code and both output streams so
//! tests can drive it without spawning processes.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::ontology::Time;
use crate::rcl::{self, Model};
use crate::reasoner::permitted_activities;
use crate::temporal::snapshot;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_NOT_REALIZED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "rcl", version, about = "Check, query and reason over RCL models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a model and print its diagnostics
    Check { file: PathBuf },
    /// Print the inferred closure
    Infer { file: PathBuf },
    /// Print the activities a role is permitted to perform
    Query {
        file: PathBuf,
        #[arg(long, value_name = "ROLE")]
        permitted: String,
        /// Only facts holding at this time; omitted means all times
        #[arg(long, allow_negative_numbers = true)]
        at: Option<Time>,
    },
    /// Print the facts holding at one time point
    Snapshot {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        at: Time,
    },
    /// Check whether a trace realizes a procedure
    Realize {
        file: PathBuf,
        #[arg(long)]
        procedure: String,
        #[arg(long)]
        trace: String,
    },
    /// Print the base facts
    Export { file: PathBuf },
}

impl Command {
    fn file(&self) -> &PathBuf {
        match self {
            Command::Check { file }
            | Command::Infer { file }
            | Command::Query { file, .. }
            | Command::Snapshot { file, .. }
            | Command::Realize { file, .. }
            | Command::Export { file } => file,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, message: impl std::fmt::Display) -> Outcome {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

/// Reads and validates the model. Diagnostics always go to stderr.
fn load(command: &Command) -> Result<(Model, String), Outcome> {
    let path = command.file();
    let source = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    let (model, diagnostics) = rcl::load(&source);
    let stderr: String = diagnostics.iter().map(|d| format!("{d}\n")).collect();
    match model {
        Some(model) => Ok((model, stderr)),
        None => Err(Outcome {
            code: EXIT_INVALID,
            stdout: String::new(),
            stderr,
        }),
    }
}

pub fn execute(command: &Command) -> Outcome {
    let (model, stderr) = match load(command) {
        Ok(loaded) => loaded,
        Err(outcome) => return outcome,
    };
    let mut out = Outcome {
        stderr,
        ..Outcome::default()
    };
    match command {
        Command::Check { .. } => {}
        Command::Infer { .. } => out.stdout = model.closure().canonical_export(),
        Command::Export { .. } => out.stdout = model.store.base_export(),
        Command::Query { permitted, at, .. } => {
            match permitted_activities(&model.closure(), permitted, *at) {
                Ok(activities) => {
                    out.stdout = activities.iter().map(|a| format!("{a}\n")).collect()
                }
                Err(e) => {
                    out.code = EXIT_UNKNOWN;
                    out.stderr.push_str(&format!("error: {e}\n"));
                }
            }
        }
        Command::Snapshot { at, .. } => out.stdout = snapshot(&model.closure(), *at).render(),
        Command::Realize {
            procedure, trace, ..
        } => match model.realize(&model.closure(), procedure, trace) {
            Ok(report) => {
                out.stdout = format!("{report}\n");
                if !report.realized {
                    out.code = EXIT_NOT_REALIZED;
                }
            }
            Err(e) => {
                out.code = match e {
                    Error::UnknownProcedure(_) | Error::UnknownTrace(_) => EXIT_UNKNOWN,
                    _ => EXIT_INVALID,
                };
                out.stderr.push_str(&format!("error: {e}\n"));
            }
        },
    }
    out
}
