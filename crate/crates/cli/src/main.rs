mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use sumsetlab_core::Error;

use args::Cli;

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_BUDGET: u8 = 65;
pub const EXIT_IO: u8 = 74;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Serialize)]
struct BudgetReport<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    required_bytes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap_bytes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    required_bits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ceiling_bits: Option<u32>,
}

fn budget_report(e: &Error) -> BudgetReport<'static> {
    let mut r = BudgetReport {
        error: "budget",
        message: e.to_string(),
        required_bytes: None,
        cap_bytes: None,
        required_bits: None,
        ceiling_bits: None,
    };
    match e {
        Error::Resource { required_bytes, cap_bytes } => {
            r.required_bytes = Some(*required_bytes);
            r.cap_bytes = Some(*cap_bytes);
        }
        Error::Precision { required_bits, ceiling_bits } => {
            r.required_bits = Some(*required_bits);
            r.ceiling_bits = Some(*ceiling_bits);
        }
        _ => {}
    }
    r
}

fn report_error(e: CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        CliError::Core(e) if e.is_budget_refusal() => {
            eprintln!("{}", serde_json::to_string(&budget_report(&e)).expect("plain struct"));
            ExitCode::from(EXIT_BUDGET)
        }
        CliError::Core(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        CliError::Io(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = args::apply_config(&mut cli.command) {
        return report_error(e);
    }
    if let Some(n) = cli.command.common().jobs {
        if n == 0 {
            return report_error(CliError::Usage("--jobs must be >= 1".into()));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return report_error(CliError::Usage(format!("thread pool: {e}")));
        }
    }
    match commands::run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => report_error(e),
    }
}
