#![allow(dead_code)]

pub mod listing;
pub mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use ratground::{execute, Mode, Options};
use ratground_core::evaluator;
use ratground_core::grounder::GroundProgram;
use ratground_core::rational::Rational;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Source paired with its file name, as `execute` expects.
pub fn source(path: &Path) -> Vec<(String, String)> {
    vec![(path.file_name().unwrap().to_string_lossy().into_owned(), read(path))]
}

/// Options from a `% flags:` comment line, if any.
pub fn options_for(text: &str, mode: Mode) -> Options {
    let mut opts = Options {
        mode,
        ..Options::default()
    };
    for flag in text
        .lines()
        .filter_map(|l| l.strip_prefix("% flags:"))
        .flat_map(str::split_whitespace)
    {
        match flag {
            "--integer-division" => opts.integer_division = true,
            other => panic!("unknown fixture flag {other}"),
        }
    }
    opts
}

pub fn solve_output(path: &Path, opts: &Options) -> String {
    let opts = Options {
        mode: Mode::SolveReference,
        ..opts.clone()
    };
    execute(&source(path), &opts)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .stdout
}

/// An answer set line split into atoms, with the following `COSTS` line.
pub type Listed = BTreeSet<(BTreeSet<String>, Option<String>)>;

pub fn parse_listing(text: &str) -> Listed {
    let mut out = BTreeSet::new();
    let mut lines = text.lines().filter(|l| !l.trim().is_empty()).peekable();
    while let Some(l) = lines.next() {
        if l == "UNSATISFIABLE" {
            continue;
        }
        let inner = l
            .strip_prefix('{')
            .and_then(|l| l.strip_suffix('}'))
            .unwrap_or_else(|| panic!("bad line {l}"));
        let atoms = if inner.is_empty() {
            BTreeSet::new()
        } else {
            inner.split(", ").map(str::to_string).collect()
        };
        let costs = lines.next_if(|l| l.starts_with("COSTS")).map(str::to_string);
        out.insert((atoms, costs));
    }
    out
}

/// Every `.lp` file under `dir`, sorted.
pub fn programs(dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "lp"))
        .collect();
    out.sort();
    out
}

/// Optimal answer sets from the library grounder and evaluator, rendered
/// like the oracle's.
pub fn library_solutions(g: &GroundProgram) -> oracle::Solutions {
    evaluator::optimal_answer_sets(g)
        .unwrap()
        .into_iter()
        .map(|(i, c)| {
            let atoms = i.iter().map(|&a| g.atoms.atom(a).to_string()).collect();
            let costs: BTreeMap<Rational, Rational> = c.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            (atoms, costs)
        })
        .collect()
}

/// Oracle answer sets, or `None` when its instantiation is too large to
/// search.
pub fn oracle_solutions(text: &str, opts: &Options) -> Option<oracle::Solutions> {
    let p = ratground_core::parser::parse_program(
        text,
        &ratground_core::parser::ParseOptions {
            decimal_digits: opts.decimal_digits,
        },
    )
    .unwrap();
    let gopts = ratground_core::grounder::GroundOptions {
        integer_division: opts.integer_division,
        warn_undefined: false,
    };
    let inst = oracle::instantiate(&p, &gopts);
    if inst.atom_count() > oracle::MAX_ATOMS {
        return None;
    }
    Some(
        oracle::solve(&inst)
            .into_iter()
            .map(|(a, c)| (a, c.into_iter().filter(|(_, v)| !v.is_zero()).collect()))
            .collect(),
    )
}

/// Every program under the fixture directories, paired with its options.
pub fn all_fixtures() -> Vec<(PathBuf, Options)> {
    let mut all = programs(&fixtures());
    all.extend(programs(&fixtures().join("integer")));
    all.into_iter()
        .map(|p| {
            let opts = options_for(&read(&p), Mode::SolveReference);
            (p, opts)
        })
        .collect()
}

/// Compares library and oracle on every fixture with at most 20 ground
/// atoms; returns how many were compared.
pub fn compare_with_oracle() -> Result<usize, String> {
    let mut compared = 0;
    for (path, opts) in all_fixtures() {
        let text = read(&path);
        let Ok(g) = ratground::ground_sources(&source(&path), &opts) else {
            continue;
        };
        if g.atoms.len() > 20 {
            continue;
        }
        let Some(want) = oracle_solutions(&text, &opts) else {
            return Err(format!("{}: too large for the oracle", path.display()));
        };
        let got = library_solutions(&g);
        if got != want {
            return Err(format!("{}: library {got:?}, oracle {want:?}", path.display()));
        }
        compared += 1;
    }
    Ok(compared)
}
