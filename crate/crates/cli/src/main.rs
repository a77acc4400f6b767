use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use regtree::script::{self, Class, Session};

#[derive(Parser)]
#[command(name = "regtree", version, about = "Run region-tree command files")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a command file.
    Run {
        file: PathBuf,
        /// Where written trees and window snapshots go.
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Extra directories searched by read commands, after the file's own.
        #[arg(short = 'I', long = "input-dir")]
        input_dirs: Vec<PathBuf>,
        /// Print one line per executed command.
        #[arg(long)]
        trace: bool,
        /// Continue after a failing command instead of stopping.
        #[arg(long)]
        keep_going: bool,
    },
    /// Parse a command file and report names that will not run.
    Check { file: PathBuf },
    /// List the command catalogue with how each name is handled.
    Commands,
}

fn read(file: &PathBuf) -> Result<String> {
    std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))
}

fn run(file: PathBuf, out_dir: PathBuf, input_dirs: Vec<PathBuf>, trace: bool, keep_going: bool) -> Result<bool> {
    let statements = script::parse(&read(&file)?)?;
    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut session = Session::new(Some(out_dir));
    if let Some(dir) = file.parent() {
        session.add_input_dir(if dir.as_os_str().is_empty() { PathBuf::from(".") } else { dir.to_path_buf() });
    }
    for d in input_dirs {
        session.add_input_dir(d);
    }
    let report = session.run(&statements, keep_going);
    if trace {
        print!("{}", report.to_text());
    } else {
        for e in report.entries.iter().filter(|e| e.outcome.is_err()) {
            if let Err(err) = &e.outcome {
                eprintln!("line {}: {}: {err}", e.line, e.command);
            }
        }
    }
    let files = report.files().count();
    eprintln!("{} commands, {} errors, {} files written", report.entries.len(), report.errors(), files);
    Ok(report.errors() == 0)
}

fn check(file: PathBuf) -> Result<bool> {
    let statements = script::parse(&read(&file)?)?;
    let mut ok = true;
    for st in &statements {
        match script::classify(&st.command.name) {
            Some(Class::Implemented | Class::Display) => {}
            Some(Class::Alias(to)) => println!("line {}: {} runs as {to}", st.line, st.command.name),
            Some(Class::OutOfScope(why)) => {
                ok = false;
                println!("line {}: {} is not provided ({why})", st.line, st.command.name);
            }
            None => {
                ok = false;
                println!("line {}: unknown command {}", st.line, st.command.name);
            }
        }
    }
    println!("{} commands", statements.len());
    Ok(ok)
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().cmd {
        Cmd::Run { file, out_dir, input_dirs, trace, keep_going } => run(file, out_dir, input_dirs, trace, keep_going),
        Cmd::Check { file } => check(file),
        Cmd::Commands => {
            for (name, what) in script::catalogue() {
                let class = match script::classify(name) {
                    Some(Class::Implemented) => "implemented".to_string(),
                    Some(Class::Alias(to)) => format!("alias of {to}"),
                    Some(Class::Display) => "display".to_string(),
                    Some(Class::OutOfScope(_)) => "not provided".to_string(),
                    None => "unclassified".to_string(),
                };
                println!("{name:<8} {class:<16} {what}");
            }
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
