// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! Command-line front end: argument parsing, per-verb handlers, JSON run
//! reports and the scaling benchmark harness.

pub mod args;
pub mod bench;
pub mod commands;
pub mod error;
pub mod matrix;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

pub use error::{CliError, Result};
pub use report::{RunReport, SCHEMA_VERSION};

/// Parses `argv`, runs the verb, prints the report to `out` and errors to
/// `err`. Returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let start = Instant::now();
    match commands::execute(cli.command) {
        Ok(mut report) => {
            report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            report.peak_memory_kb = report::peak_memory_kb();
            match report.write(&mut *out) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "plb: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "plb: {e}");
            e.exit_code()
        }
    }
}
