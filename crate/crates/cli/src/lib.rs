//! Command-line front end: parse, ground, then emit numeric or text output,
//! or enumerate answer sets with the reference evaluator.

pub mod numeric;

use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use ratground_core::ast::{PrintMode, Span};
use ratground_core::evaluator::{self, EvalError};
use ratground_core::grounder::{self, GroundError, GroundOptions, GroundProgram};
use ratground_core::parser::{self, ParseError, ParseOptions, SafetyViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    /// lparse/smodels numeric format
    #[default]
    GroundNumeric,
    /// Ground program as rules
    GroundText,
    /// Answer sets by exhaustive search
    SolveReference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Print {
    #[default]
    Fraction,
    Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(
    name = "ratground",
    version,
    about = "Ground ASP-Core-2 programs with exact rational terms"
)]
pub struct Options {
    /// Input files; standard input when empty
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub mode: Mode,
    /// Decimal places kept when reading and printing decimals (0 to 6)
    #[arg(long, default_value_t = 6)]
    pub decimal_digits: u32,
    #[arg(long, value_enum, default_value_t)]
    pub print: Print,
    /// Truncating `/` when both operands are integers
    #[arg(long)]
    pub integer_division: bool,
    /// Report substitutions skipped for undefined arithmetic
    #[arg(long)]
    pub warn_undefined: bool,
    /// Answer sets to print in solve mode; 0 prints all
    #[arg(long = "models", default_value_t = 0)]
    pub n_models: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            inputs: Vec::new(),
            mode: Mode::default(),
            decimal_digits: 6,
            print: Print::default(),
            integer_division: false,
            warn_undefined: false,
            n_models: 0,
        }
    }
}

impl Options {
    pub fn print_mode(&self) -> PrintMode {
        match self.print {
            Print::Fraction => PrintMode::Fraction,
            Print::Decimal => PrintMode::Decimal(self.decimal_digits),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input { path: String, source: io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Safety(String),
    #[error("{0}")]
    Ground(String),
    #[error("{0}")]
    TooLarge(EvalError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Parse(_) | CliError::Safety(_) => 1,
            CliError::Ground(_) => 2,
            CliError::TooLarge(_) => 3,
        }
    }
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

fn locate(sources: &[(String, String)], span: Span) -> String {
    match sources.get(span.source) {
        Some((name, _)) => format!("{name}:"),
        None => String::new(),
    }
}

fn parse_error(sources: &[(String, String)], e: &ParseError) -> CliError {
    CliError::Parse(format!("{}{e}", locate(sources, e.span)))
}

fn safety_error(sources: &[(String, String)], vs: &[SafetyViolation]) -> CliError {
    let lines: Vec<String> = vs.iter().map(|v| format!("{}{v}", locate(sources, v.span))).collect();
    CliError::Safety(lines.join("\n"))
}

fn ground_error(sources: &[(String, String)], e: &GroundError) -> CliError {
    CliError::Ground(format!("{}{e}", locate(sources, e.span())))
}

/// Parses, checks and grounds named sources.
pub fn ground_sources(sources: &[(String, String)], opts: &Options) -> Result<GroundProgram, CliError> {
    let named: Vec<(&str, &str)> = sources.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
    let popts = ParseOptions {
        decimal_digits: opts.decimal_digits,
    };
    let program = parser::parse_sources(&named, &popts).map_err(|e| parse_error(sources, &e))?;
    let violations = parser::check_safety(&program);
    if !violations.is_empty() {
        return Err(safety_error(sources, &violations));
    }
    let gopts = GroundOptions {
        integer_division: opts.integer_division,
        warn_undefined: opts.warn_undefined,
    };
    grounder::ground(&program, &gopts).map_err(|e| ground_error(sources, &e))
}

/// Runs the pipeline on in-memory sources.
pub fn execute(sources: &[(String, String)], opts: &Options) -> Result<Output, CliError> {
    let g = ground_sources(sources, opts)?;
    let mode = opts.print_mode();
    let mut stdout = String::new();
    match opts.mode {
        Mode::GroundNumeric => ratground_core::emitter::emit(&g, &mut stdout, mode).expect("writing to a string"),
        Mode::GroundText => grounder::write_ground_program(&mut stdout, &g, mode).expect("writing to a string"),
        Mode::SolveReference => solve(&g, opts, &mut stdout)?,
    }
    Ok(Output {
        stdout,
        warnings: g.warnings,
    })
}

fn solve(g: &GroundProgram, opts: &Options, out: &mut String) -> Result<(), CliError> {
    let mode = opts.print_mode();
    let found = evaluator::optimal_answer_sets(g).map_err(CliError::TooLarge)?;
    if found.is_empty() {
        out.push_str("UNSATISFIABLE\n");
        return Ok(());
    }
    let limit = if opts.n_models == 0 { found.len() } else { opts.n_models };
    for (i, costs) in found.iter().take(limit) {
        evaluator::write_answer_set(out, g, i, mode).expect("writing to a string");
        out.push('\n');
        if !g.weaks.is_empty() {
            evaluator::write_costs(out, g, costs, mode).expect("writing to a string");
            out.push('\n');
        }
    }
    Ok(())
}

/// Reads the inputs named in `opts` (or `stdin`), runs the pipeline and
/// returns the process exit code.
pub fn run(opts: &Options, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut sources = Vec::new();
    if opts.inputs.is_empty() {
        let mut text = String::new();
        if let Err(source) = stdin.read_to_string(&mut text) {
            let e = CliError::Input {
                path: "<stdin>".into(),
                source,
            };
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
        sources.push(("<stdin>".to_string(), text));
    }
    for path in &opts.inputs {
        match std::fs::read_to_string(path) {
            Ok(text) => sources.push((path.display().to_string(), text)),
            Err(source) => {
                let e = CliError::Input {
                    path: path.display().to_string(),
                    source,
                };
                let _ = writeln!(stderr, "error: {e}");
                return e.exit_code();
            }
        }
    }
    match execute(&sources, opts) {
        Ok(out) => {
            for w in &out.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            if stdout
                .write_all(out.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
