//! A command-file interpreter over the library.
//!
//! A command file is a sequence of `NAME(args) = result;` statements ended by
//! `KDEND;`. Variables hold trees, pyramids, lists, matrices and scalars.
//! Graphics commands write PGM snapshots instead of opening windows.

mod commands;
pub mod images;
pub mod interp;
pub mod parser;
pub mod registry;
pub mod value;

pub use interp::{Entry, Flow, Report, Session};
pub use parser::{parse, parse_commands, pretty_print, Arg, Command, Statement};
pub use registry::{canonical, catalogue, classify, Class};
pub use value::{Handle, List, Value, VarTable};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ScriptError {
    #[error("line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("unknown command {0}")]
    UnknownCommand(String),
    #[error("{name} is not provided ({reason})")]
    OutOfScope { name: String, reason: &'static str },
    #[error("{command} takes {expected} arguments, got {found}")]
    ArityMismatch { command: String, expected: String, found: usize },
    #[error("variable {variable}: expected {expected}, found {found}")]
    TypeMismatch { variable: String, expected: &'static str, found: String },
    #[error("{command}, argument {index}: {reason}")]
    BadArgument { command: String, index: usize, reason: String },
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Core(#[from] crate::Error),
}
