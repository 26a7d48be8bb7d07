//! Command-line pipeline: manifest of WAV files in, feature tables,
//! statistical reports, classifier comparison and SVG figures out.

pub mod args;
pub mod error;
pub mod features;
pub mod manifest;
pub mod pipeline;
pub mod plot;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, RunConfig};
pub use error::{CliError, CliResult};

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::from_options(&cli.opts).and_then(|cfg| pipeline::execute(cli.command, &cfg));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
