//! `SELECT … WHERE { … }` over basic graph patterns, with optional
//! `ORDER BY ASC|DESC(?v)` and `LIMIT n`. Keywords are case-insensitive.

use std::cmp::Ordering;
use std::fmt;

use super::{line_col, BindingTable, QueryEngine, QueryError, TermId};
use crate::term::{compare_for_ordering, Term};
use crate::vocab::{self, PrefixTable, RDF_TYPE};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.to_string())
    }

    fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Const(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    fn terms(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Asc,
    Desc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparqlQuery {
    pub prefixes: PrefixTable,
    pub select: Vec<String>,
    pub patterns: Vec<TriplePattern>,
    pub order_by: Option<(String, Order)>,
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Var(String),
    Iri(String),
    PName(String, String),
    Literal(Term),
    Punct(char),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("'{w}'"),
        Tok::Var(v) => format!("'?{v}'"),
        Tok::Iri(i) => format!("'<{i}>'"),
        Tok::PName(p, l) => format!("'{p}:{l}'"),
        Tok::Literal(l) => format!("'{l}'"),
        Tok::Punct(c) => format!("'{c}'"),
        Tok::End => "end of query".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, QueryError> {
    let err = |at: usize, message: String| {
        let (line, column) = line_col(text, at);
        QueryError::Syntax { line, column, message }
    };
    let is_name = |c: char| c.is_alphanumeric() || matches!(c, '_' | '-' | '.');
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c == '#' {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        let tok = match c {
            '{' | '}' | '(' | ')' | ';' | ',' | '.' | '*' => {
                i += 1;
                Tok::Punct(c)
            }
            '<' => {
                let end = rest.find('>').ok_or_else(|| err(start, "unterminated IRI".into()))?;
                i += end + 1;
                Tok::Iri(rest[1..end].to_string())
            }
            '?' | '$' => {
                let len = rest[1..]
                    .find(|n: char| !(n.is_alphanumeric() || n == '_'))
                    .unwrap_or(rest.len() - 1);
                if len == 0 {
                    return Err(err(start, "empty variable name".into()));
                }
                i += 1 + len;
                Tok::Var(rest[1..1 + len].to_string())
            }
            '"' => {
                let mut value = String::new();
                let mut chars = rest[1..].char_indices();
                let end = loop {
                    match chars.next() {
                        Some((j, '"')) => break j + 2,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, 'n')) => value.push('\n'),
                            Some((_, 't')) => value.push('\t'),
                            Some((_, 'r')) => value.push('\r'),
                            Some((_, e @ ('"' | '\\'))) => value.push(e),
                            _ => return Err(err(start, "bad escape in string".into())),
                        },
                        Some((_, ch)) => value.push(ch),
                        None => return Err(err(start, "unterminated string".into())),
                    }
                };
                i += end;
                Tok::Literal(Term::string(value))
            }
            c if c.is_ascii_digit()
                || ((c == '-' || c == '+') && rest[1..].starts_with(|n: char| n.is_ascii_digit())) =>
            {
                let mut len = 1 + rest[1..].find(|n: char| !n.is_ascii_digit()).unwrap_or(rest.len() - 1);
                let mut decimal = false;
                if rest[len..].starts_with('.') && rest[len + 1..].starts_with(|n: char| n.is_ascii_digit()) {
                    decimal = true;
                    len += 1 + rest[len + 1..]
                        .find(|n: char| !n.is_ascii_digit())
                        .unwrap_or(rest.len() - len - 1);
                }
                let lexical = &rest[..len];
                i += len;
                if decimal {
                    Tok::Literal(Term::Literal {
                        lexical: lexical.to_string(),
                        datatype: crate::term::Datatype::Decimal,
                    })
                } else {
                    let n = lexical.parse().map_err(|_| err(start, "integer out of range".into()))?;
                    Tok::Literal(Term::integer(n))
                }
            }
            c if c.is_alphabetic() || c == '_' || c == ':' => {
                let prefix_len = rest.find(|n: char| !(is_name(n))).unwrap_or(rest.len());
                if rest[prefix_len..].starts_with(':') {
                    let prefix = &rest[..prefix_len];
                    let local_start = prefix_len + 1;
                    let local_len = rest[local_start..]
                        .find(|n: char| !is_name(n))
                        .unwrap_or(rest.len() - local_start);
                    let local = rest[local_start..local_start + local_len].trim_end_matches('.');
                    i += local_start + local.len();
                    Tok::PName(prefix.to_string(), local.to_string())
                } else {
                    let word = rest[..prefix_len].trim_end_matches('.');
                    i += word.len();
                    Tok::Word(word.to_string())
                }
            }
            other => return Err(err(start, format!("unexpected character '{other}'"))),
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'t> {
    text: &'t str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    prefixes: PrefixTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos.min(self.toks.len() - 1)].0
    }

    fn next(&mut self) -> Tok {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn here(&self) -> (usize, usize) {
        line_col(self.text, self.toks[self.pos.min(self.toks.len() - 1)].1)
    }

    fn expected(&self, what: &str) -> QueryError {
        let (line, column) = self.here();
        QueryError::Syntax {
            line,
            column,
            message: format!("expected {what}, found {}", describe(self.peek())),
        }
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.expected(&format!("'{kw}'")))
        }
    }

    fn expect(&mut self, c: char) -> Result<(), QueryError> {
        if *self.peek() == Tok::Punct(c) {
            self.next();
            Ok(())
        } else {
            Err(self.expected(&format!("'{c}'")))
        }
    }

    fn query(&mut self) -> Result<SparqlQuery, QueryError> {
        while self.keyword("PREFIX") {
            self.next();
            let label = match self.next() {
                Tok::PName(label, local) if local.is_empty() => label,
                _ => {
                    self.pos -= 1;
                    return Err(self.expected("a prefix label like 'ex:'"));
                }
            };
            let ns = match self.next() {
                Tok::Iri(ns) => ns,
                _ => {
                    self.pos -= 1;
                    return Err(self.expected("a namespace IRI"));
                }
            };
            self.prefixes.insert(label, ns);
        }

        self.expect_keyword("SELECT")?;
        let mut select = Vec::new();
        while let Tok::Var(v) = self.peek() {
            let v = v.clone();
            self.next();
            if !select.contains(&v) {
                select.push(v);
            }
        }
        if select.is_empty() {
            return Err(self.expected("at least one variable"));
        }

        self.expect_keyword("WHERE")?;
        self.expect('{')?;
        let mut patterns = Vec::new();
        while *self.peek() != Tok::Punct('}') {
            self.triples_block(&mut patterns)?;
            if *self.peek() == Tok::Punct('.') {
                self.next();
            } else if *self.peek() != Tok::Punct('}') {
                return Err(self.expected("'.' or '}'"));
            }
        }
        self.expect('}')?;

        let mut order_by = None;
        if self.keyword("ORDER") {
            self.next();
            self.expect_keyword("BY")?;
            let dir = if self.keyword("ASC") {
                Some(Order::Asc)
            } else if self.keyword("DESC") {
                Some(Order::Desc)
            } else {
                None
            };
            let var = if let Some(dir) = dir {
                self.next();
                self.expect('(')?;
                let v = self.var()?;
                self.expect(')')?;
                (v, dir)
            } else {
                (self.var()?, Order::Asc)
            };
            order_by = Some(var);
        }

        let mut limit = None;
        if self.keyword("LIMIT") {
            self.next();
            match self.next() {
                Tok::Literal(t) if t.as_integer().is_some_and(|n| n > 0) => {
                    limit = Some(t.as_integer().unwrap() as usize)
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.expected("a positive integer"));
                }
            }
        }
        if *self.peek() != Tok::End {
            return Err(self.expected("end of query"));
        }

        let used = |v: &str| {
            patterns
                .iter()
                .any(|p: &TriplePattern| p.terms().iter().any(|t| t.as_var() == Some(v)))
        };
        for v in select.iter().chain(order_by.as_ref().map(|(v, _)| v)) {
            if !used(v) {
                return Err(QueryError::UnboundVariable(v.clone()));
            }
        }
        Ok(SparqlQuery {
            prefixes: std::mem::take(&mut self.prefixes),
            select,
            patterns,
            order_by,
            limit,
        })
    }

    fn var(&mut self) -> Result<String, QueryError> {
        match self.peek() {
            Tok::Var(v) => {
                let v = v.clone();
                self.next();
                Ok(v)
            }
            _ => Err(self.expected("a variable")),
        }
    }

    fn triples_block(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.term(false)?;
        loop {
            let predicate = if self.keyword("a") {
                self.next();
                PatternTerm::Const(Term::iri(RDF_TYPE))
            } else {
                self.term(false)?
            };
            loop {
                let object = self.term(true)?;
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if *self.peek() == Tok::Punct(',') {
                    self.next();
                } else {
                    break;
                }
            }
            if *self.peek() == Tok::Punct(';') {
                self.next();
                // A trailing ';' before '.' or '}' is allowed.
                if matches!(self.peek(), Tok::Punct('.') | Tok::Punct('}')) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn term(&mut self, literal_ok: bool) -> Result<PatternTerm, QueryError> {
        let (line, column) = self.here();
        match self.next() {
            Tok::Var(v) => Ok(PatternTerm::Var(v)),
            Tok::Iri(i) => Ok(PatternTerm::Const(Term::iri(i))),
            Tok::PName(prefix, local) => match self.prefixes.get(&prefix) {
                Some(ns) => Ok(PatternTerm::Const(Term::iri(format!("{ns}{local}")))),
                None => Err(QueryError::UnknownPrefix { line, column, prefix }),
            },
            Tok::Literal(t) if literal_ok => Ok(PatternTerm::Const(t)),
            _ => {
                self.pos -= 1;
                Err(self.expected(if literal_ok {
                    "a variable, IRI or literal"
                } else {
                    "a variable or IRI"
                }))
            }
        }
    }
}

/// Parses a query. The default prefixes are predeclared; `PREFIX` lines
/// add to or override them.
pub fn parse_sparql(text: &str) -> Result<SparqlQuery, QueryError> {
    let toks = lex(text)?;
    let mut p = Parser {
        text,
        toks,
        pos: 0,
        prefixes: vocab::default_prefixes(),
    };
    p.query()
}

type Row = Vec<Option<TermId>>;

pub(super) fn evaluate(engine: &QueryEngine, q: &SparqlQuery) -> BindingTable {
    let st = engine.store();
    let mut vars: Vec<&str> = Vec::new();
    for p in &q.patterns {
        for t in p.terms() {
            if let Some(v) = t.as_var() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
    }
    let slot = |v: &str| vars.iter().position(|x| *x == v).expect("variable collected above");

    // Each position is a variable slot or a constant id; a constant missing
    // from the store makes the whole conjunction empty.
    #[derive(Clone, Copy)]
    enum Pos {
        Var(usize),
        Const(TermId),
    }
    let mut compiled: Vec<[Pos; 3]> = Vec::new();
    let mut empty = false;
    for p in &q.patterns {
        let mut c = [Pos::Const(0); 3];
        for (k, t) in p.terms().into_iter().enumerate() {
            c[k] = match t {
                PatternTerm::Var(v) => Pos::Var(slot(v)),
                PatternTerm::Const(term) => match st.id(term) {
                    Some(id) => Pos::Const(id),
                    None => {
                        empty = true;
                        Pos::Const(0)
                    }
                },
            };
        }
        compiled.push(c);
    }

    let header: Vec<String> = q.select.clone();
    if empty || q.patterns.is_empty() {
        return BindingTable { header, rows: Vec::new() };
    }

    let estimate = |c: &[Pos; 3], bound: &[bool]| -> (usize, usize) {
        let is_bound = |p: Pos| match p {
            Pos::Const(_) => true,
            Pos::Var(v) => bound[v],
        };
        let n_bound = c.iter().filter(|p| is_bound(**p)).count();
        let card = match (c[0], c[1], c[2]) {
            (Pos::Const(s), Pos::Const(p), _) => st.objects(s, p).len(),
            (_, Pos::Const(p), Pos::Const(o)) => st.subjects(p, o).len(),
            (Pos::Const(s), _, _) => st.outgoing(s).len(),
            (_, _, Pos::Const(o)) => st.incoming(o).len(),
            (_, Pos::Const(p), _) => st.pairs(p).len(),
            _ => st.len(),
        };
        (3 - n_bound, card)
    };

    let mut rows: Vec<Row> = vec![vec![None; vars.len()]];
    let mut bound = vec![false; vars.len()];
    let mut remaining: Vec<[Pos; 3]> = compiled;
    while !remaining.is_empty() && !rows.is_empty() {
        let (best, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, c)| estimate(c, &bound))
            .unwrap();
        let pat = remaining.remove(best);
        let mut next = Vec::new();
        for row in &rows {
            let val = |p: Pos| match p {
                Pos::Const(id) => Some(id),
                Pos::Var(v) => row[v],
            };
            let (s, p, o) = (val(pat[0]), val(pat[1]), val(pat[2]));
            let mut emit = |ts: TermId, tp: TermId, to: TermId| {
                let mut r = row.clone();
                for (pos, id) in pat.iter().zip([ts, tp, to]) {
                    if let Pos::Var(v) = *pos {
                        match r[v] {
                            Some(existing) if existing != id => return,
                            _ => r[v] = Some(id),
                        }
                    }
                }
                next.push(r);
            };
            match (s, p, o) {
                (Some(s), Some(p), Some(o)) => {
                    if st.contains(s, p, o) {
                        emit(s, p, o);
                    }
                }
                (Some(s), Some(p), None) => st.objects(s, p).iter().for_each(|&o| emit(s, p, o)),
                (None, Some(p), Some(o)) => st.subjects(p, o).iter().for_each(|&s| emit(s, p, o)),
                (Some(s), None, Some(o)) => st
                    .outgoing(s)
                    .iter()
                    .filter(|(_, x)| *x == o)
                    .for_each(|&(p, _)| emit(s, p, o)),
                (Some(s), None, None) => st.outgoing(s).iter().for_each(|&(p, o)| emit(s, p, o)),
                (None, None, Some(o)) => st.incoming(o).iter().for_each(|&(s, p)| emit(s, p, o)),
                (None, Some(p), None) => st.pairs(p).iter().for_each(|&(s, o)| emit(s, p, o)),
                (None, None, None) => st.triples().iter().for_each(|&[s, p, o]| emit(s, p, o)),
            }
        }
        rows = next;
        for pos in pat {
            if let Pos::Var(v) = pos {
                bound[v] = true;
            }
        }
    }

    let project: Vec<usize> = q.select.iter().map(|v| slot(v)).collect();
    let term = |id: Option<TermId>| st.term(id.expect("all pattern variables are bound")).clone();
    let mut keyed: Vec<(Option<Term>, Vec<Term>)> = rows
        .into_iter()
        .map(|r| {
            let key = q.order_by.as_ref().map(|(v, _)| term(r[slot(v)]));
            (key, project.iter().map(|&i| term(r[i])).collect())
        })
        .collect();
    let dir = q.order_by.as_ref().map(|(_, d)| *d);
    keyed.sort_by(|(ka, ra), (kb, rb)| {
        let by_key = match (ka, kb) {
            (Some(a), Some(b)) => {
                let o = compare_for_ordering(a, b);
                if dir == Some(Order::Desc) {
                    o.reverse()
                } else {
                    o
                }
            }
            _ => Ordering::Equal,
        };
        by_key.then_with(|| ra.cmp(rb))
    });
    let mut out: Vec<Vec<Term>> = keyed.into_iter().map(|(_, r)| r).collect();
    if let Some(n) = q.limit {
        out.truncate(n);
    }
    BindingTable { header, rows: out }
}
