//! Command-file grammar.
//!
//! ```text
//! file    := { command } [ "KDEND" [ "(" ")" ] ";" ] <ignored>
//! command := NAME [ "(" [ arg { "," arg } ] ")" ] [ "=" NAME ] ";"
//! arg     := integer | real | NAME
//! ```
//!
//! `/* ... */` comments and whitespace may appear between any two tokens.

use std::fmt;

use super::ScriptError;

/// A literal argument. Identifiers name variables or are bare words
/// (titles, file names, type tags).
#[derive(Clone, Debug, PartialEq)]
pub enum Arg {
    Int(i64),
    Real(f64),
    Ident(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub name: String,
    pub args: Vec<Arg>,
    pub result: Option<String>,
}

/// A command and the line it starts on.
#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub line: usize,
    pub command: Command,
}

pub const END: &str = "KDEND";

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Int(i) => write!(f, "{i}"),
            // Debug keeps a '.' or an exponent, so the token reads back as real.
            Arg::Real(x) => write!(f, "{x:?}"),
            Arg::Ident(s) => f.write_str(s),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(Arg::to_string).collect();
            write!(f, "({})", args.join(", "))?;
        }
        if let Some(r) = &self.result {
            write!(f, " = {r}")?;
        }
        f.write_str(";")
    }
}

/// One command per line.
pub fn pretty_print(commands: &[Command]) -> String {
    commands.iter().map(|c| format!("{c}\n")).collect()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Lit(Arg),
    Open,
    Close,
    Comma,
    Equals,
    Semi,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

fn is_name_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { src: text.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn peek_byte(&self, ahead: usize) -> Option<u8> {
        self.src.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn error(line: usize, col: usize, expected: impl Into<String>) -> ScriptError {
        ScriptError::Syntax { line, col, expected: expected.into() }
    }

    fn skip_trivia(&mut self) -> Result<(), ScriptError> {
        loop {
            match self.peek_byte(0) {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.peek_byte(1) == Some(b'*') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    loop {
                        match self.peek_byte(0) {
                            None => return Err(Self::error(line, col, "'*/' closing the comment")),
                            Some(b'*') if self.peek_byte(1) == Some(b'/') => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    /// Next token and its position.
    fn next(&mut self) -> Result<(Tok, usize, usize), ScriptError> {
        self.skip_trivia()?;
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek_byte(0) else {
            return Ok((Tok::Eof, line, col));
        };
        let single = match c {
            b'(' => Some(Tok::Open),
            b')' => Some(Tok::Close),
            b',' => Some(Tok::Comma),
            b'=' => Some(Tok::Equals),
            b';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = single {
            self.bump();
            return Ok((t, line, col));
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.peek_byte(0).is_some_and(is_name_char) {
                self.bump();
            }
            let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
            return Ok((Tok::Name(s), line, col));
        }
        let starts_number = c.is_ascii_digit()
            || ((c == b'-' || c == b'+' || c == b'.')
                && self.peek_byte(1).is_some_and(|d| d.is_ascii_digit() || d == b'.'));
        if starts_number {
            return self.number(line, col).map(|a| (Tok::Lit(a), line, col));
        }
        Err(Self::error(line, col, "a name, a number or punctuation"))
    }

    fn number(&mut self, line: usize, col: usize) -> Result<Arg, ScriptError> {
        let start = self.pos;
        if matches!(self.peek_byte(0), Some(b'-' | b'+')) {
            self.bump();
        }
        let mut prev = 0u8;
        while let Some(c) = self.peek_byte(0) {
            let sign_in_exponent = (c == b'-' || c == b'+') && (prev == b'e' || prev == b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || sign_in_exponent {
                prev = self.bump();
            } else {
                break;
            }
        }
        if self.peek_byte(0).is_some_and(is_name_char) {
            return Err(Self::error(line, col, "a number literal"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII number");
        let real = text.contains(['.', 'e', 'E']);
        let parsed = if real { text.parse().ok().map(Arg::Real) } else { text.parse().ok().map(Arg::Int) };
        parsed.ok_or_else(|| Self::error(line, col, "a number literal"))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
}

impl Parser<'_> {
    fn advance(&mut self) -> Result<(), ScriptError> {
        let (t, l, c) = self.lex.next()?;
        self.tok = t;
        self.line = l;
        self.col = c;
        Ok(())
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ScriptError> {
        Err(Lexer::error(self.line, self.col, expected))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ScriptError> {
        if self.tok != t {
            return self.fail(what);
        }
        self.advance()
    }

    fn name(&mut self, what: &str) -> Result<String, ScriptError> {
        match &self.tok {
            Tok::Name(n) => {
                let n = n.clone();
                self.advance()?;
                Ok(n)
            }
            _ => self.fail(what),
        }
    }

    fn command(&mut self) -> Result<Command, ScriptError> {
        let name = self.name("a command name")?;
        let mut args = Vec::new();
        if self.tok == Tok::Open {
            self.advance()?;
            if self.tok != Tok::Close {
                loop {
                    let arg = match &self.tok {
                        Tok::Name(n) => Arg::Ident(n.clone()),
                        Tok::Lit(a) => a.clone(),
                        _ => return self.fail("an argument"),
                    };
                    args.push(arg);
                    self.advance()?;
                    match self.tok {
                        Tok::Comma => self.advance()?,
                        Tok::Close => break,
                        _ => return self.fail("',' or ')'"),
                    }
                }
            }
            self.expect(Tok::Close, "')'")?;
        }
        let result = if self.tok == Tok::Equals {
            self.advance()?;
            Some(self.name("a result variable name")?)
        } else {
            None
        };
        self.expect(Tok::Semi, "';'")?;
        Ok(Command { name, args, result })
    }
}

/// Parse a command stream. Parsing stops after `KDEND;`, which is kept as the
/// last statement; anything after it is ignored.
pub fn parse(text: &str) -> Result<Vec<Statement>, ScriptError> {
    let mut p = Parser { lex: Lexer::new(text), tok: Tok::Eof, line: 1, col: 1 };
    p.advance()?;
    let mut out = Vec::new();
    while p.tok != Tok::Eof {
        let line = p.line;
        let command = p.command()?;
        let end = command.name == END;
        out.push(Statement { line, command });
        if end {
            break;
        }
    }
    Ok(out)
}

/// [`parse`] without line numbers.
pub fn parse_commands(text: &str) -> Result<Vec<Command>, ScriptError> {
    Ok(parse(text)?.into_iter().map(|s| s.command).collect())
}
