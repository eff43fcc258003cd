use std::fmt;

use thiserror::Error;

use super::TripleGraph;
use crate::term::{Datatype, Term, Triple};
use crate::vocab::RDF_TYPE;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TurtleErrorKind {
    Syntax(String),
    UnknownPrefix(String),
    UnterminatedStatement,
}

impl fmt::Display for TurtleErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TurtleErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            TurtleErrorKind::UnknownPrefix(p) => write!(f, "unknown prefix '{p}:'"),
            TurtleErrorKind::UnterminatedStatement => {
                f.write_str("unterminated statement: expected '.' before end of input")
            }
        }
    }
}

/// Parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct TurtleError {
    pub line: usize,
    pub column: usize,
    pub kind: TurtleErrorKind,
}

/// Parses a document in the supported Turtle subset.
///
/// The default prefixes (`ssd`, `ssid`, `aut`, `rdf`, `rdfs`, `xsd`, `owl`)
/// are predeclared; directives in the document may add or rebind labels.
pub fn parse_turtle(text: &str) -> Result<TripleGraph, TurtleError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        graph: TripleGraph::new(),
    };
    p.document()?;
    Ok(p.graph)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    graph: TripleGraph,
}

type PResult<T> = Result<T, TurtleError>;

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err<T>(&self, kind: TurtleErrorKind) -> PResult<T> {
        Err(TurtleError {
            line: self.line,
            column: self.column,
            kind,
        })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        self.err(TurtleErrorKind::Syntax(msg.into()))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn at_eof(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        let n = kw.chars().count();
        let matches = kw
            .chars()
            .enumerate()
            .all(|(i, k)| self.peek_at(i).is_some_and(|c| c.eq_ignore_ascii_case(&k)));
        matches && self.peek_at(n).is_some_and(char::is_whitespace)
    }

    fn document(&mut self) -> PResult<()> {
        while !self.at_eof() {
            if self.peek() == Some('@') {
                self.at_directive()?;
            } else if self.starts_with_keyword("PREFIX") {
                for _ in 0..6 {
                    self.bump();
                }
                self.prefix_body()?;
            } else {
                self.statement()?;
            }
        }
        Ok(())
    }

    fn at_directive(&mut self) -> PResult<()> {
        self.bump();
        let word = self.name_chars();
        if word != "prefix" {
            return self.syntax(format!("unsupported directive '@{word}'"));
        }
        self.prefix_body()?;
        self.expect_dot()
    }

    fn prefix_body(&mut self) -> PResult<()> {
        self.skip_ws();
        let label = self.name_chars();
        if self.peek() != Some(':') {
            return self.syntax("expected ':' after prefix label");
        }
        self.bump();
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.graph.prefixes.insert(label, iri);
        Ok(())
    }

    fn expect_dot(&mut self) -> PResult<()> {
        self.skip_ws();
        match self.peek() {
            Some('.') => {
                self.bump();
                Ok(())
            }
            None => self.err(TurtleErrorKind::UnterminatedStatement),
            Some(c) => self.syntax(format!("expected '.', found '{c}'")),
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let subject = self.subject()?;
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.object()?;
                self.graph
                    .insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            match self.peek() {
                Some(';') => {
                    while self.peek() == Some(';') {
                        self.bump();
                        self.skip_ws();
                    }
                    if self.peek() == Some('.') {
                        self.bump();
                        return Ok(());
                    }
                    if self.peek().is_none() {
                        return self.err(TurtleErrorKind::UnterminatedStatement);
                    }
                }
                Some('.') => {
                    self.bump();
                    return Ok(());
                }
                None => return self.err(TurtleErrorKind::UnterminatedStatement),
                Some(c) => return self.syntax(format!("expected ';', ',' or '.', found '{c}'")),
            }
        }
    }

    fn subject(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank(),
            Some(c) if is_name_start(c) || c == ':' => self.prefixed_name(),
            Some(c) => self.syntax(format!("expected subject, found '{c}'")),
            None => self.err(TurtleErrorKind::UnterminatedStatement),
        }
    }

    fn verb(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('a') if self.peek_at(1).is_none_or(|c| !is_name_char(c) && c != ':') => {
                self.bump();
                Ok(Term::iri(RDF_TYPE))
            }
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some(c) if is_name_start(c) || c == ':' => self.prefixed_name(),
            Some(c) => self.syntax(format!("expected predicate, found '{c}'")),
            None => self.err(TurtleErrorKind::UnterminatedStatement),
        }
    }

    fn object(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank(),
            Some('"') => self.string(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.number(),
            Some(c) if is_name_start(c) || c == ':' => self.prefixed_name(),
            Some(c) => self.syntax(format!("expected object, found '{c}'")),
            None => self.err(TurtleErrorKind::UnterminatedStatement),
        }
    }

    fn iri_ref(&mut self) -> PResult<String> {
        if self.peek() != Some('<') {
            return self.syntax("expected '<'");
        }
        self.bump();
        let mut iri = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return self.syntax(format!("invalid character {c:?} in IRI"))
                }
                Some(c) => iri.push(c),
                None => return self.syntax("unterminated IRI"),
            }
        }
        if !iri.contains(':') {
            return self.syntax(format!("relative IRI <{iri}> is not supported"));
        }
        Ok(iri)
    }

    fn name_chars(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) || (c == '.' && self.peek_at(1).is_some_and(is_name_char)) {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn prefixed_name(&mut self) -> PResult<Term> {
        let (line, column) = (self.line, self.column);
        let prefix = self.name_chars();
        if self.peek() != Some(':') {
            return self.syntax(format!("expected prefixed name, found '{prefix}'"));
        }
        self.bump();
        let local = self.name_chars();
        match self.graph.prefixes.get(&prefix) {
            Some(ns) => Ok(Term::Iri(format!("{ns}{local}"))),
            None => Err(TurtleError {
                line,
                column,
                kind: TurtleErrorKind::UnknownPrefix(prefix),
            }),
        }
    }

    fn blank(&mut self) -> PResult<Term> {
        self.bump();
        self.bump();
        let label = self.name_chars();
        if label.is_empty() {
            return self.syntax("empty blank node label");
        }
        Ok(Term::Blank(label))
    }

    fn number(&mut self) -> PResult<Term> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        let digits = |p: &mut Self, s: &mut String| {
            while let Some(c) = p.peek().filter(char::is_ascii_digit) {
                s.push(c);
                p.bump();
            }
        };
        digits(self, &mut s);
        if !s.chars().any(|c| c.is_ascii_digit()) {
            return self.syntax("expected digits");
        }
        let mut datatype = Datatype::Integer;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            s.push('.');
            self.bump();
            digits(self, &mut s);
            datatype = Datatype::Decimal;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return self.syntax("numeric exponents are not supported");
        }
        if self.peek().is_some_and(is_name_char) {
            return self.syntax("malformed number");
        }
        Ok(Term::Literal {
            lexical: s,
            datatype,
        })
    }

    fn string(&mut self) -> PResult<Term> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('r') => s.push('\r'),
                    Some('t') => s.push('\t'),
                    Some(c) => return self.syntax(format!("unsupported escape '\\{c}'")),
                    None => return self.syntax("unterminated string"),
                },
                Some('\n') | None => return self.syntax("unterminated string"),
                Some(c) => s.push(c),
            }
        }
        match self.peek() {
            Some('@') => self.syntax("language-tagged strings are not supported"),
            Some('^') => self.syntax("typed literals are not supported"),
            _ => Ok(Term::string(s)),
        }
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}
