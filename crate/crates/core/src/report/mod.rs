//! Problem files in, reports out. The `dml` binary is a thin shell over this module.

pub mod problem;
pub mod run;

pub use problem::{Command, InterpSpec, OrbitMode, ProblemFile, RecurrenceSpec};
pub use run::{
    emit_json, emit_text, exit_code_for, parse_report, run, run_text, Report, ToolInfo, EXIT_ERROR, EXIT_OK,
    EXIT_PARTIAL, TOOL_NAME, TOOL_VERSION,
};
