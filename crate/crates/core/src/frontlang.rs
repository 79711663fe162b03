//! A small text format for generators and move scripts.
//!
//! ```text
//! # comments run to the end of the line
//! generator circ {
//!     x: cos(1);
//!     y: sin(1) - 0.25 sin(3) + 0.1;
//! }
//!
//! script demo {
//!     swallowtail_birth at=0.25 width=0.05 frames=64;
//!     balance;
//! }
//! ```
//!
//! The grammar is LL(1):
//!
//! ```text
//! doc       := (generator | script)*
//! generator := "generator" NAME "{" "x" ":" series ";" "y" ":" series ";" "}"
//! series    := term (("+" | "-") term)*
//! term      := "-"? NUMBER? ("cos" | "sin") "(" INT ")" | "-"? NUMBER
//! script    := "script" NAME "{" (move ";")* "}"
//! move      := KIND (NAME "=" "-"? NUMBER)*
//! ```
//!
//! Harmonics run from 1 to 64. Names are unique across the document.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::curves::{Basis, Description, Term, TrigSeries};
use crate::error::Result;
use crate::homotopy::{Move, MoveKind};

/// Largest harmonic accepted in a series.
pub const MAX_HARMONIC: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: duplicate name `{name}`")]
    DuplicateName { line: usize, col: usize, name: String },
    #[error("{line}:{col}: unknown move kind `{name}`")]
    UnknownMoveKind { line: usize, col: usize, name: String },
}

impl ParseError {
    /// `(line, column)` of the offending token, both 1-based.
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::DuplicateName { line, col, .. }
            | ParseError::UnknownMoveKind { line, col, .. } => (*line, *col),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorDecl {
    pub name: String,
    pub x: TrigSeries,
    pub y: TrigSeries,
}

impl GeneratorDecl {
    pub fn description(&self) -> Description {
        Description::Series {
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoveDecl {
    pub kind: MoveKind,
    pub params: Vec<(String, f64)>,
}

impl MoveDecl {
    pub fn to_move(&self, default_frames: usize) -> Result<Move> {
        Move::from_params(self.kind.name(), &self.params, default_frames)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScriptDecl {
    pub name: String,
    pub moves: Vec<MoveDecl>,
}

impl ScriptDecl {
    /// Validate the parameters of every move.
    pub fn to_moves(&self, default_frames: usize) -> Result<Vec<Move>> {
        self.moves.iter().map(|m| m.to_move(default_frames)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub generators: Vec<GeneratorDecl>,
    pub scripts: Vec<ScriptDecl>,
}

impl Document {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty() && self.scripts.is_empty()
    }

    pub fn generator(&self, name: &str) -> Option<&GeneratorDecl> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn script(&self, name: &str) -> Option<&ScriptDecl> {
        self.scripts.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64, String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Plus,
    Minus,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(_, s) => format!("number `{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> std::result::Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ':' => Some(Tok::Colon),
            ';' => Some(Tok::Semi),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let digits = |i: &mut usize| {
                let s = *i;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
                *i > s
            };
            let mut ok = digits(&mut i);
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                ok |= digits(&mut i);
            }
            if ok && i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if digits(&mut j) {
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let value = if ok { s.parse::<f64>().ok().filter(|v| v.is_finite()) } else { None };
            let Some(value) = value else {
                return Err(ParseError::Syntax {
                    line: l0,
                    col: c0,
                    expected: "a finite number".into(),
                    found: format!("`{s}`"),
                });
            };
            out.push(Token {
                tok: Tok::Number(value, s),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(ParseError::Syntax {
            line: l0,
            col: c0,
            expected: "a token".into(),
            found: format!("`{c}`"),
        });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: HashSet<String>,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
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

    fn error<T>(&self, expected: &str) -> PResult<T> {
        let t = self.peek();
        Err(ParseError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.into(),
            found: t.tok.describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.describe())
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        match &self.peek().tok {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(())
            }
            _ => self.error(&format!("`{word}`")),
        }
    }

    fn name(&mut self) -> PResult<String> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) => {
                self.bump();
                if !self.names.insert(s.clone()) {
                    return Err(ParseError::DuplicateName {
                        line: t.line,
                        col: t.col,
                        name: s,
                    });
                }
                Ok(s)
            }
            _ => self.error("a name"),
        }
    }

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        loop {
            match &self.peek().tok {
                Tok::Eof => return Ok(doc),
                Tok::Ident(s) if s == "generator" => doc.generators.push(self.generator()?),
                Tok::Ident(s) if s == "script" => doc.scripts.push(self.script()?),
                _ => return self.error("`generator` or `script`"),
            }
        }
    }

    fn generator(&mut self) -> PResult<GeneratorDecl> {
        self.keyword("generator")?;
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        self.keyword("x")?;
        self.expect(Tok::Colon)?;
        let x = self.series()?;
        self.expect(Tok::Semi)?;
        self.keyword("y")?;
        self.expect(Tok::Colon)?;
        let y = self.series()?;
        self.expect(Tok::Semi)?;
        self.expect(Tok::RBrace)?;
        Ok(GeneratorDecl { name, x, y })
    }

    fn series(&mut self) -> PResult<TrigSeries> {
        let mut terms = vec![self.term(false)?];
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term(false)?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(self.term(true)?);
                }
                _ => return Ok(TrigSeries::new(terms)),
            }
        }
    }

    fn term(&mut self, negated: bool) -> PResult<Term> {
        let mut sign = if negated { -1.0 } else { 1.0 };
        if self.peek().tok == Tok::Minus {
            self.bump();
            sign = -sign;
        }
        let coeff = match self.peek().tok {
            Tok::Number(v, _) => {
                self.bump();
                Some(v)
            }
            _ => None,
        };
        let basis = match &self.peek().tok {
            Tok::Ident(s) if s == "cos" || s == "sin" => {
                let cos = s == "cos";
                self.bump();
                self.expect(Tok::LParen)?;
                let k = self.harmonic()?;
                self.expect(Tok::RParen)?;
                if cos {
                    Basis::Cos(k)
                } else {
                    Basis::Sin(k)
                }
            }
            _ if coeff.is_some() => Basis::Const,
            _ => return self.error("a number, `cos` or `sin`"),
        };
        Ok(Term {
            coeff: sign * coeff.unwrap_or(1.0),
            basis,
        })
    }

    fn harmonic(&mut self) -> PResult<u32> {
        let expected = format!("a harmonic between 1 and {MAX_HARMONIC}");
        if let Tok::Number(_, text) = &self.peek().tok {
            if text.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(k) = text.parse::<u32>() {
                    if (1..=MAX_HARMONIC).contains(&k) {
                        self.bump();
                        return Ok(k);
                    }
                }
            }
        }
        self.error(&expected)
    }

    fn script(&mut self) -> PResult<ScriptDecl> {
        self.keyword("script")?;
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut moves = Vec::new();
        while self.peek().tok != Tok::RBrace {
            moves.push(self.move_decl()?);
            self.expect(Tok::Semi)?;
        }
        self.bump();
        Ok(ScriptDecl { name, moves })
    }

    fn move_decl(&mut self) -> PResult<MoveDecl> {
        let t = self.peek().clone();
        let Tok::Ident(word) = t.tok else {
            return self.error("a move kind or `}`");
        };
        let kind = MoveKind::from_name(&word).ok_or(ParseError::UnknownMoveKind {
            line: t.line,
            col: t.col,
            name: word,
        })?;
        self.bump();
        let mut params: Vec<(String, f64)> = Vec::new();
        while let Tok::Ident(key) = self.peek().tok.clone() {
            let t = self.bump();
            if params.iter().any(|(k, _)| *k == key) {
                return Err(ParseError::DuplicateName {
                    line: t.line,
                    col: t.col,
                    name: key,
                });
            }
            self.expect(Tok::Eq)?;
            let sign = if self.peek().tok == Tok::Minus {
                self.bump();
                -1.0
            } else {
                1.0
            };
            match self.peek().tok {
                Tok::Number(v, _) => {
                    self.bump();
                    params.push((key, sign * v));
                }
                _ => return self.error("a number"),
            }
        }
        Ok(MoveDecl { kind, params })
    }
}

/// Parse a document.
pub fn parse(text: &str) -> std::result::Result<Document, ParseError> {
    let toks = lex(text)?;
    Parser {
        toks,
        pos: 0,
        names: HashSet::new(),
    }
    .document()
}

/// Shortest decimal that reads back as the same `f64`.
fn number(v: f64) -> String {
    let plain = format!("{v}");
    if plain.len() > 20 {
        format!("{v:e}")
    } else {
        plain
    }
}

fn emit_series(out: &mut String, s: &TrigSeries) {
    if s.terms.is_empty() {
        out.push('0');
        return;
    }
    for (i, t) in s.terms.iter().enumerate() {
        let neg = t.coeff.is_sign_negative();
        let c = t.coeff.abs();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        match t.basis {
            Basis::Const => out.push_str(&number(c)),
            Basis::Cos(k) | Basis::Sin(k) => {
                if c != 1.0 {
                    let _ = write!(out, "{} ", number(c));
                }
                let f = if matches!(t.basis, Basis::Cos(_)) { "cos" } else { "sin" };
                let _ = write!(out, "{f}({k})");
            }
        }
    }
}

/// Canonical text of a document; [`parse`] reads it back unchanged.
pub fn emit(doc: &Document) -> String {
    let mut blocks = Vec::new();
    for g in &doc.generators {
        let mut b = format!("generator {} {{\n    x: ", g.name);
        emit_series(&mut b, &g.x);
        b.push_str(";\n    y: ");
        emit_series(&mut b, &g.y);
        b.push_str(";\n}\n");
        blocks.push(b);
    }
    for s in &doc.scripts {
        let mut b = format!("script {} {{\n", s.name);
        for m in &s.moves {
            b.push_str("    ");
            b.push_str(m.kind.name());
            for (k, v) in &m.params {
                let _ = write!(b, " {k}={}", number(*v));
            }
            b.push_str(";\n");
        }
        b.push_str("}\n");
        blocks.push(b);
    }
    blocks.join("\n")
}
