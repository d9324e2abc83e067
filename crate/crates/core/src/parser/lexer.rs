use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ParseError;
use crate::ast::{AggFn, Rel, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Var(String),
    Anonymous,
    Int(String),
    Decimal(String),
    Str(String),
    Aggregate(AggFn),
    Not,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Dot,
    DotDot,
    If,
    WeakIf,
    Bar,
    Plus,
    Minus,
    Star,
    Slash,
    Backslash,
    Rel(Rel),
    At,
    Amp,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Var(s) => format!("variable `{s}`"),
            Tok::Anonymous => "`_`".into(),
            Tok::Int(s) | Tok::Decimal(s) => format!("number `{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Aggregate(f) => format!("`{}`", f.name()),
            Tok::Not => "`not`".into(),
            Tok::Rel(r) => format!("`{}`", r.symbol()),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", punct(other)),
        }
    }
}

fn punct(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::Colon => ":",
        Tok::Dot => ".",
        Tok::DotDot => "..",
        Tok::If => ":-",
        Tok::WeakIf => ":~",
        Tok::Bar => "|",
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::Backslash => "\\",
        Tok::At => "@",
        Tok::Amp => "&",
        _ => "?",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    column: u32,
    source: usize,
}

impl Cursor {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span {
            source: self.source,
            line: self.line,
            column: self.column,
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek(0) {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits source text into tokens; comments and whitespace are dropped.
pub fn tokenize(text: &str, source: usize) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        source,
    };
    let mut out = Vec::new();
    loop {
        let span = cur.span();
        let Some(c) = cur.peek(0) else {
            out.push(Token { tok: Tok::Eof, span });
            return Ok(out);
        };
        let err = |message: String| ParseError { span, message };
        let tok = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '%' => {
                if cur.peek(1) == Some('*') {
                    cur.bump();
                    cur.bump();
                    loop {
                        match cur.bump() {
                            Some('*') if cur.peek(0) == Some('%') => {
                                cur.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(err("unterminated block comment".into())),
                        }
                    }
                } else {
                    cur.take_while(|c| c != '\n');
                }
                continue;
            }
            'a'..='z' => {
                let word = cur.take_while(is_word);
                if word == "not" {
                    Tok::Not
                } else {
                    Tok::Ident(word)
                }
            }
            'A'..='Z' => Tok::Var(cur.take_while(is_word)),
            '_' => {
                let word = cur.take_while(is_word);
                if word == "_" {
                    Tok::Anonymous
                } else if word
                    .trim_start_matches('_')
                    .starts_with(|c: char| c.is_ascii_uppercase())
                {
                    Tok::Var(word)
                } else {
                    return Err(err(format!("invalid name `{word}`")));
                }
            }
            '0'..='9' => {
                let int = cur.take_while(|c| c.is_ascii_digit());
                if cur.peek(0) == Some('.') && cur.peek(1).is_some_and(|c| c.is_ascii_digit()) {
                    cur.bump();
                    let frac = cur.take_while(|c| c.is_ascii_digit());
                    Tok::Decimal(format!("{int}.{frac}"))
                } else {
                    Tok::Int(int)
                }
            }
            '"' => {
                cur.bump();
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        Some('\\') if cur.peek(0) == Some('"') => {
                            cur.bump();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(err("unterminated string".into())),
                    }
                }
                Tok::Str(s)
            }
            '#' => {
                cur.bump();
                let word = cur.take_while(is_word);
                match word.as_str() {
                    "count" => Tok::Aggregate(AggFn::Count),
                    "sum" => Tok::Aggregate(AggFn::Sum),
                    "max" => Tok::Aggregate(AggFn::Max),
                    "min" => Tok::Aggregate(AggFn::Min),
                    _ => return Err(err(format!("unsupported directive `#{word}`"))),
                }
            }
            _ => {
                cur.bump();
                let next = cur.peek(0);
                let mut two = |t: Tok| {
                    cur.bump();
                    t
                };
                match (c, next) {
                    (':', Some('-')) => two(Tok::If),
                    (':', Some('~')) | (':', Some('\u{223c}')) => two(Tok::WeakIf),
                    (':', _) => Tok::Colon,
                    ('.', Some('.')) => two(Tok::DotDot),
                    ('.', _) => Tok::Dot,
                    ('<', Some('=')) => two(Tok::Rel(Rel::Le)),
                    ('<', Some('>')) => two(Tok::Rel(Rel::Ne)),
                    ('<', _) => Tok::Rel(Rel::Lt),
                    ('>', Some('=')) => two(Tok::Rel(Rel::Ge)),
                    ('>', _) => Tok::Rel(Rel::Gt),
                    ('!', Some('=')) => two(Tok::Rel(Rel::Ne)),
                    ('=', Some('=')) => two(Tok::Rel(Rel::Eq)),
                    ('=', _) => Tok::Rel(Rel::Eq),
                    ('(', _) => Tok::LParen,
                    (')', _) => Tok::RParen,
                    ('[', _) => Tok::LBracket,
                    (']', _) => Tok::RBracket,
                    ('{', _) => Tok::LBrace,
                    ('}', _) => Tok::RBrace,
                    (',', _) => Tok::Comma,
                    (';', _) => Tok::Semi,
                    ('|', _) => Tok::Bar,
                    ('+', _) => Tok::Plus,
                    ('-', _) => Tok::Minus,
                    ('*', _) => Tok::Star,
                    ('/', _) => Tok::Slash,
                    ('\\', _) => Tok::Backslash,
                    ('@', _) => Tok::At,
                    ('&', _) => Tok::Amp,
                    _ => return Err(err(format!("illegal character `{c}`"))),
                }
            }
        };
        out.push(Token { tok, span });
    }
}
