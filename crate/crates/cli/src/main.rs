use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dml_core::report::{emit_json, emit_text, run, ProblemFile, EXIT_ERROR};
use dml_core::DmlError;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Orbit,
    Sml,
    Interp,
    Degree,
    Height,
    Density,
}

/// Return sets, linear recurrence zeros, degree and height growth for polynomial maps.
#[derive(Parser, Debug)]
#[command(name = "dml", version)]
struct Args {
    /// Command to run; must match the `command` field of the problem file.
    cmd: Cmd,
    /// Problem file (JSON), or `-` for stdin.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// `key=value`; bare keys set solver config, dotted keys set document fields.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match read_input(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.file.display());
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let cmd = format!("{:?}", args.cmd).to_lowercase();
    let report = ProblemFile::from_json(&text, &args.overrides)
        .and_then(|(pf, doc)| {
            if pf.command.as_str() != cmd {
                return Err(DmlError::Invalid(format!(
                    "problem file is a `{}` problem, not `{cmd}`",
                    pf.command.as_str()
                )));
            }
            run(&pf, doc)
        });
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let out = match args.format {
        Format::Json => emit_json(&report),
        Format::Text => emit_text(&report),
    };
    print!("{out}");
    ExitCode::from(report.exit_code as u8)
}
