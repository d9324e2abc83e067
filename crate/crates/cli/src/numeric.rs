//! Writing the numeric format to byte streams and reading it back.

use std::io;
use std::str::FromStr;

use num_bigint::BigInt;
use ratground_core::ast::PrintMode;
use ratground_core::emitter::{self, NumericRule};
use ratground_core::grounder::{AtomId, GroundProgram};

/// Writes `g` in the numeric format.
pub fn write_numeric(w: &mut dyn io::Write, g: &GroundProgram, mode: PrintMode) -> io::Result<()> {
    let mut text = String::new();
    emitter::emit(g, &mut text, mode).map_err(|_| io::Error::other("formatting failed"))?;
    w.write_all(text.as_bytes())
}

/// A parsed numeric program.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NumericProgram {
    pub rules: Vec<NumericRule>,
    pub symbols: Vec<(AtomId, String)>,
    pub b_plus: Vec<AtomId>,
    pub b_minus: Vec<AtomId>,
    pub models: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ReadError {
    pub line: usize,
    pub message: String,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, ReadError> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l)
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn err(&self, message: impl Into<String>) -> ReadError {
        ReadError {
            line: self.line,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: &str) -> Result<(), ReadError> {
        let l = self.next()?;
        if l != want {
            return Err(self.err(format!("expected `{want}`, found `{l}`")));
        }
        Ok(())
    }

    /// Ids up to a terminating `0`.
    fn ids(&mut self) -> Result<Vec<AtomId>, ReadError> {
        let mut out = Vec::new();
        loop {
            let l = self.next()?;
            let id: AtomId = l.trim().parse().map_err(|_| self.err(format!("bad id `{l}`")))?;
            if id == 0 {
                return Ok(out);
            }
            out.push(id);
        }
    }
}

struct Fields<'a> {
    it: std::str::SplitWhitespace<'a>,
}

impl Fields<'_> {
    fn num<T: FromStr>(&mut self) -> Option<T> {
        self.it.next()?.parse().ok()
    }

    fn many<T: FromStr>(&mut self, n: usize) -> Option<Vec<T>> {
        (0..n).map(|_| self.num()).collect()
    }
}

fn statement(line: &str) -> Option<NumericRule> {
    let mut f = Fields {
        it: line.split_whitespace(),
    };
    let kind: u8 = f.num()?;
    let rule = match kind {
        1 => {
            let head = f.num()?;
            let (n, k): (usize, usize) = (f.num()?, f.num()?);
            NumericRule::Basic {
                head,
                neg: f.many(k)?,
                pos: f.many(n.checked_sub(k)?)?,
            }
        }
        2 => {
            let head = f.num()?;
            let (n, k): (usize, usize) = (f.num()?, f.num()?);
            NumericRule::Constraint {
                head,
                bound: f.num()?,
                neg: f.many(k)?,
                pos: f.many(n.checked_sub(k)?)?,
            }
        }
        5 => {
            let head = f.num()?;
            let bound: BigInt = f.num()?;
            let (n, k): (usize, usize) = (f.num()?, f.num()?);
            NumericRule::Weight {
                head,
                bound,
                neg: f.many(k)?,
                pos: f.many(n.checked_sub(k)?)?,
                weights: f.many(n)?,
            }
        }
        6 => {
            if f.num::<u8>()? != 0 {
                return None;
            }
            let (n, k): (usize, usize) = (f.num()?, f.num()?);
            NumericRule::Minimize {
                neg: f.many(k)?,
                pos: f.many(n.checked_sub(k)?)?,
                weights: f.many(n)?,
            }
        }
        8 => {
            let h: usize = f.num()?;
            let heads = f.many(h)?;
            let (n, k): (usize, usize) = (f.num()?, f.num()?);
            NumericRule::Disjunctive {
                heads,
                neg: f.many(k)?,
                pos: f.many(n.checked_sub(k)?)?,
            }
        }
        _ => return None,
    };
    f.it.next().is_none().then_some(rule)
}

/// Parses numeric-format text.
pub fn read_numeric(text: &str) -> Result<NumericProgram, ReadError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let mut p = NumericProgram::default();
    loop {
        let l = lines.next()?;
        if l.trim() == "0" {
            break;
        }
        p.rules
            .push(statement(l).ok_or_else(|| lines.err(format!("bad statement `{l}`")))?);
    }
    loop {
        let l = lines.next()?;
        if l.trim() == "0" {
            break;
        }
        let (id, name) = l.split_once(' ').ok_or_else(|| lines.err("bad symbol entry"))?;
        let id = id.parse().map_err(|_| lines.err(format!("bad id `{id}`")))?;
        p.symbols.push((id, name.to_string()));
    }
    lines.expect("B+")?;
    p.b_plus = lines.ids()?;
    lines.expect("B-")?;
    p.b_minus = lines.ids()?;
    let l = lines.next()?;
    p.models = l
        .trim()
        .parse()
        .map_err(|_| lines.err(format!("bad model count `{l}`")))?;
    if let Some((i, extra)) = lines.inner.find(|(_, l)| !l.trim().is_empty()) {
        return Err(ReadError {
            line: i + 1,
            message: format!("trailing input `{extra}`"),
        });
    }
    Ok(p)
}
