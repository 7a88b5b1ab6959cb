//! Text syntax for presentations.
//!
//! ```text
//! presentation := "<" [ident ("," ident)*] "|" [relator ("," relator)*] ">"
//! relator      := word ("=" word)*
//! word         := factor (["*"] factor)*
//! factor       := atom ["^" int]
//! atom         := ident | "1" | "(" word ")" | "[" word "," word "]"
//! ```
//!
//! A chain `r = s = t` contributes the relators `r s^-1` and `s t^-1`.
//! `[u, v]` is the commutator `u v u^-1 v^-1`.

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    let err = |line, column, message: String| Error::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        let signed = (c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || signed {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            column += i - start;
            let s: String = chars[start..i].iter().collect();
            let v: i64 = s
                .parse()
                .ok()
                .filter(|v: &i64| v.unsigned_abs() <= i32::MAX as u64)
                .ok_or_else(|| err(l0, c0, format!("integer `{s}` out of range")))?;
            out.push(Token {
                tok: Tok::Int(v),
                line: l0,
                column: c0,
            });
            continue;
        }
        if "<>|,=^*()[]".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                column: c0,
            });
            column += 1;
            i += 1;
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'n> {
    toks: Vec<Token>,
    pos: usize,
    names: &'n [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{c}`")))
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().tok, Tok::Ident(_) | Tok::Int(1))
            || self.is_sym('(')
            || self.is_sym('[')
    }

    fn word(&mut self) -> Result<Word> {
        if !self.starts_atom() {
            return Err(self.error_here("expected a word"));
        }
        let mut w = self.factor()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                let f = self.factor()?;
                w = w.mul(&f);
            } else if self.starts_atom() {
                let f = self.factor()?;
                w = w.mul(&f);
            } else {
                return Ok(w);
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.is_sym('^') {
            self.bump();
            match self.peek().tok {
                Tok::Int(e) => {
                    self.bump();
                    Ok(base.pow(e))
                }
                _ => Err(self.error_here("expected an integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.bump();
                match self.names.iter().position(|n| *n == name) {
                    Some(g) => Ok(Word::gen(g)),
                    None => Err(Error::UndeclaredGenerator(name)),
                }
            }
            Tok::Int(1) => {
                self.bump();
                Ok(Word::identity())
            }
            Tok::Sym('(') => {
                self.bump();
                let w = self.word()?;
                self.expect_sym(')')?;
                Ok(w)
            }
            Tok::Sym('[') => {
                self.bump();
                let u = self.word()?;
                self.expect_sym(',')?;
                let v = self.word()?;
                self.expect_sym(']')?;
                Ok(u.mul(&v).mul(&u.inverse()).mul(&v.inverse()))
            }
            _ => Err(self.error_here("expected a generator, `1`, `(` or `[`")),
        }
    }

    fn relator(&mut self, out: &mut Vec<Word>) -> Result<()> {
        let mut lhs = self.word()?;
        let mut had_equation = false;
        while self.is_sym('=') {
            self.bump();
            let rhs = self.word()?;
            out.push(lhs.mul(&rhs.inverse()));
            lhs = rhs;
            had_equation = true;
        }
        if !had_equation {
            out.push(lhs);
        }
        Ok(())
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let toks = lex(text)?;
    let mut header = Parser {
        toks,
        pos: 0,
        names: &[],
    };
    header.expect_sym('<')?;
    let mut names: Vec<String> = Vec::new();
    if !header.is_sym('|') {
        loop {
            match header.peek().tok.clone() {
                Tok::Ident(n) => {
                    if names.contains(&n) {
                        return Err(Error::DuplicateGenerator(n));
                    }
                    header.bump();
                    names.push(n);
                }
                _ => return Err(header.error_here("expected a generator name")),
            }
            if header.is_sym(',') {
                header.bump();
            } else {
                break;
            }
        }
    }
    header.expect_sym('|')?;
    let mut p = Parser {
        toks: header.toks,
        pos: header.pos,
        names: &names,
    };
    let mut relators = Vec::new();
    if !p.is_sym('>') {
        loop {
            p.relator(&mut relators)?;
            if p.is_sym(',') {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect_sym('>')?;
    if p.peek().tok != Tok::End {
        return Err(p.error_here("trailing input after `>`"));
    }
    Presentation::new(names, relators)
}

/// Parses a single word over `names`.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        names,
    };
    let w = p.word()?;
    if p.peek().tok != Tok::End {
        return Err(p.error_here("trailing input after word"));
    }
    Ok(w)
}
