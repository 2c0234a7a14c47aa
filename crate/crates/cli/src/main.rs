mod args;
mod commands;
mod compare;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_LIMIT: u8 = 4;

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            error: anyhow::anyhow!(msg.into()),
        }
    }

    pub fn input(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_INPUT,
            error: error.into(),
        }
    }
}

impl From<dagrel_core::Error> for Failure {
    fn from(e: dagrel_core::Error) -> Self {
        use dagrel_core::Error as E;
        let code = match e {
            E::InvalidParameter(_) => EXIT_USAGE,
            E::CapExceeded { .. } | E::StreamExhausted(_) | E::PathCountOverflow => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Exact(a) => commands::exact(a),
        Command::Compare(a) => compare::run(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
