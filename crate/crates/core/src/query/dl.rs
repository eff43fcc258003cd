//! Manchester-style class expressions:
//!
//! ```text
//! Expr  := Atom ('and' Atom)*
//! Atom  := Class
//!        | prop 'some' Filler
//!        | prop 'value' Individual
//!        | '{' Individual (',' Individual)* '}'
//!        | '(' Expr ')'
//! Filler := Atom | datatype '[' op integer ']'      op: < <= > >= =
//! ```
//!
//! Names are prefixed (`ssd:Result`), full (`<http://…>`) or bare. Bare
//! names resolve against the core vocabulary first, then the autism
//! extension.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{line_col, QueryEngine, QueryError, TermId};
use crate::term::Term;
use crate::vocab::{self, RDF_TYPE, XSD_NS};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Name {
    Iri(String),
    Local(String),
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Iri(iri) => match vocab::compact(iri, &vocab::default_prefixes()) {
                Some(p) => f.write_str(&p),
                None => write!(f, "<{iri}>"),
            },
            Name::Local(l) => f.write_str(l),
        }
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::Local(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FacetOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl FacetOp {
    pub fn holds(self, value: i64, bound: i64) -> bool {
        match self {
            FacetOp::Lt => value < bound,
            FacetOp::Le => value <= bound,
            FacetOp::Gt => value > bound,
            FacetOp::Ge => value >= bound,
            FacetOp::Eq => value == bound,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            FacetOp::Lt => "<",
            FacetOp::Le => "<=",
            FacetOp::Gt => ">",
            FacetOp::Ge => ">=",
            FacetOp::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Facet {
    pub op: FacetOp,
    pub bound: i64,
    /// Datatype IRI as written, e.g. `xsd:int`.
    pub datatype: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassExpr {
    Named(Name),
    And(Box<ClassExpr>, Box<ClassExpr>),
    Some(Name, Box<ClassExpr>),
    Value(Name, Name),
    OneOf(Vec<Name>),
    DataSome(Name, Facet),
}

impl ClassExpr {
    pub fn named(n: impl Into<Name>) -> Self {
        ClassExpr::Named(n.into())
    }

    pub fn and(self, other: ClassExpr) -> Self {
        ClassExpr::And(Box::new(self), Box::new(other))
    }

    pub fn some(p: impl Into<Name>, filler: ClassExpr) -> Self {
        ClassExpr::Some(p.into(), Box::new(filler))
    }

    pub fn value(p: impl Into<Name>, ind: impl Into<Name>) -> Self {
        ClassExpr::Value(p.into(), ind.into())
    }

    pub fn one_of<I: Into<Name>>(inds: impl IntoIterator<Item = I>) -> Self {
        ClassExpr::OneOf(inds.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, e: &ClassExpr) -> fmt::Result {
            match e {
                ClassExpr::And(..) => write!(f, "({e})"),
                _ => write!(f, "{e}"),
            }
        }
        match self {
            ClassExpr::Named(n) => write!(f, "{n}"),
            ClassExpr::And(l, r) => {
                write!(f, "{l} and ")?;
                operand(f, r)
            }
            ClassExpr::Some(p, c) => match **c {
                ClassExpr::Named(_) | ClassExpr::OneOf(_) => write!(f, "{p} some {c}"),
                _ => write!(f, "{p} some ({c})"),
            },
            ClassExpr::Value(p, i) => write!(f, "{p} value {i}"),
            ClassExpr::OneOf(items) => {
                f.write_str("{")?;
                for (i, n) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{n}")?;
                }
                f.write_str("}")
            }
            ClassExpr::DataSome(p, facet) => write!(
                f,
                "{p} some {}[{}{}]",
                facet.datatype,
                facet.op.symbol(),
                facet.bound
            ),
        }
    }
}

const INTEGER_TYPES: &[&str] = &["int", "integer", "long", "short", "nonNegativeInteger"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(Name),
    Int(i64),
    Op(FacetOp),
    And,
    Some,
    Value,
    Punct(char),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => format!("'{n}'"),
        Tok::Int(i) => format!("'{i}'"),
        Tok::Op(o) => format!("'{}'", o.symbol()),
        Tok::And => "'and'".into(),
        Tok::Some => "'some'".into(),
        Tok::Value => "'value'".into(),
        Tok::Punct(c) => format!("'{c}'"),
        Tok::End => "end of query".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, QueryError> {
    let err = |at: usize, message: String| {
        let (line, column) = line_col(text, at);
        QueryError::Syntax { line, column, message }
    };
    let prefixes = vocab::default_prefixes();
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let tok = match c {
            '(' | ')' | '{' | '}' | '[' | ']' | ',' => {
                i += 1;
                Tok::Punct(c)
            }
            '<' if text[i + 1..].starts_with(|n: char| n.is_ascii_alphabetic()) => {
                let end = text[i..]
                    .find('>')
                    .ok_or_else(|| err(start, "unterminated IRI".into()))?;
                let iri = &text[i + 1..i + end];
                i += end + 1;
                Tok::Name(Name::Iri(iri.to_string()))
            }
            '<' | '>' | '=' => {
                let eq = text[i + 1..].starts_with('=');
                let op = match (c, eq) {
                    ('<', true) => FacetOp::Le,
                    ('<', false) => FacetOp::Lt,
                    ('>', true) => FacetOp::Ge,
                    ('>', false) => FacetOp::Gt,
                    _ => FacetOp::Eq,
                };
                i += if eq && c != '=' { 2 } else { 1 };
                Tok::Op(op)
            }
            c if c.is_ascii_digit()
                || ((c == '-' || c == '+')
                    && text[i + 1..].starts_with(|n: char| n.is_ascii_digit())) =>
            {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i]
                    .parse()
                    .map_err(|_| err(start, "integer out of range".into()))?;
                Tok::Int(n)
            }
            c if c.is_alphabetic() || c == '_' => {
                let end = text[i..]
                    .find(|n: char| !(n.is_alphanumeric() || matches!(n, '_' | '-' | ':' | '.')))
                    .map_or(text.len(), |e| i + e);
                let word = text[i..end].trim_end_matches('.');
                i += word.len();
                match word {
                    "and" | "AND" => Tok::And,
                    "some" | "SOME" => Tok::Some,
                    "value" | "VALUE" => Tok::Value,
                    _ => match word.split_once(':') {
                        Some((prefix, local)) => {
                            let ns = prefixes.get(prefix).ok_or_else(|| {
                                let (line, column) = line_col(text, start);
                                QueryError::UnknownPrefix {
                                    line,
                                    column,
                                    prefix: prefix.to_string(),
                                }
                            })?;
                            Tok::Name(Name::Iri(format!("{ns}{local}")))
                        }
                        None => Tok::Name(Name::Local(word.to_string())),
                    },
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
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos.min(self.toks.len() - 1)].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn next(&mut self) -> Tok {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = line_col(self.text, self.toks[self.pos.min(self.toks.len() - 1)].1);
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn expected(&self, what: &str) -> QueryError {
        self.error(format!("expected {what}, found {}", describe(self.peek())))
    }

    fn expect(&mut self, c: char) -> Result<(), QueryError> {
        if *self.peek() == Tok::Punct(c) {
            self.next();
            Ok(())
        } else {
            Err(self.expected(&format!("'{c}'")))
        }
    }

    fn name(&mut self, what: &str) -> Result<Name, QueryError> {
        match self.peek() {
            Tok::Name(_) => match self.next() {
                Tok::Name(n) => Ok(n),
                _ => unreachable!(),
            },
            _ => Err(self.expected(what)),
        }
    }

    fn expr(&mut self) -> Result<ClassExpr, QueryError> {
        let mut left = self.atom()?;
        while *self.peek() == Tok::And {
            self.next();
            let right = self.atom()?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<ClassExpr, QueryError> {
        match self.peek() {
            Tok::Punct('(') => {
                self.next();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Punct('{') => {
                self.next();
                let mut items = vec![self.name("an individual")?];
                while *self.peek() == Tok::Punct(',') {
                    self.next();
                    items.push(self.name("an individual")?);
                }
                self.expect('}')?;
                Ok(ClassExpr::OneOf(items))
            }
            Tok::Name(_) => match self.peek2() {
                Tok::Some => {
                    let p = self.name("a property")?;
                    self.next();
                    self.filler(p)
                }
                Tok::Value => {
                    let p = self.name("a property")?;
                    self.next();
                    let ind = self.name("an individual")?;
                    Ok(ClassExpr::Value(p, ind))
                }
                Tok::Punct('[') => Err(self.error("datatype restriction needs 'property some' before it")),
                _ => Ok(ClassExpr::Named(self.name("a class")?)),
            },
            _ => Err(self.expected("a class expression")),
        }
    }

    fn filler(&mut self, prop: Name) -> Result<ClassExpr, QueryError> {
        if matches!(self.peek(), Tok::Name(_)) && *self.peek2() == Tok::Punct('[') {
            let at = self.pos;
            let dt = self.name("a datatype")?;
            let integer = match &dt {
                Name::Iri(iri) => iri
                    .strip_prefix(XSD_NS)
                    .is_some_and(|l| INTEGER_TYPES.contains(&l)),
                Name::Local(_) => false,
            };
            if !integer {
                self.pos = at;
                return Err(self.error(format!("only integer datatypes can be restricted, found '{dt}'")));
            }
            self.expect('[')?;
            let op = match self.next() {
                Tok::Op(op) => op,
                _ => {
                    self.pos -= 1;
                    return Err(self.expected("a comparison operator"));
                }
            };
            let bound = match self.next() {
                Tok::Int(n) => n,
                _ => {
                    self.pos -= 1;
                    return Err(self.expected("an integer bound"));
                }
            };
            self.expect(']')?;
            return Ok(ClassExpr::DataSome(
                prop,
                Facet {
                    op,
                    bound,
                    datatype: dt.to_string(),
                },
            ));
        }
        Ok(ClassExpr::Some(prop, Box::new(self.atom()?)))
    }
}

/// Parses a class expression.
pub fn parse_dl_query(text: &str) -> Result<ClassExpr, QueryError> {
    let toks = lex(text)?;
    let mut p = Parser { text, toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.expected("'and' or end of query"));
    }
    Ok(e)
}

pub(super) fn evaluate(engine: &QueryEngine, expr: &ClassExpr) -> Result<BTreeSet<Term>, QueryError> {
    let ids = eval(engine, expr)?;
    let st = engine.store();
    Ok(ids.into_iter().map(|id| st.term(id).clone()).collect())
}

fn eval(engine: &QueryEngine, expr: &ClassExpr) -> Result<HashSet<TermId>, QueryError> {
    let st = engine.store();
    Ok(match expr {
        ClassExpr::Named(n) => {
            let c = engine.resolve_class(n)?;
            match (st.id_of_iri(RDF_TYPE), st.id_of_iri(&c)) {
                (Some(ty), Some(c)) => st.subjects(ty, c).iter().copied().collect(),
                _ => HashSet::new(),
            }
        }
        ClassExpr::And(l, r) => {
            let mut a = eval(engine, l)?;
            let b = eval(engine, r)?;
            a.retain(|x| b.contains(x));
            a
        }
        ClassExpr::Some(p, filler) => {
            let p = engine.resolve_property(p)?;
            let members = eval(engine, filler)?;
            let Some(p) = st.id_of_iri(&p) else {
                return Ok(HashSet::new());
            };
            let pairs = st.pairs(p);
            if members.len() > pairs.len() {
                pairs
                    .iter()
                    .filter(|(_, o)| members.contains(o))
                    .map(|(s, _)| *s)
                    .collect()
            } else {
                members
                    .iter()
                    .flat_map(|m| st.subjects(p, *m))
                    .copied()
                    .collect()
            }
        }
        ClassExpr::Value(p, ind) => {
            let p = engine.resolve_property(p)?;
            let ind = engine.resolve_individual(ind);
            match (st.id_of_iri(&p), st.id(&ind)) {
                (Some(p), Some(i)) => st.subjects(p, i).iter().copied().collect(),
                _ => HashSet::new(),
            }
        }
        ClassExpr::OneOf(items) => items
            .iter()
            .filter_map(|n| st.id(&engine.resolve_individual(n)))
            .collect(),
        ClassExpr::DataSome(p, facet) => {
            let p = engine.resolve_property(p)?;
            match st.id_of_iri(&p) {
                Some(p) => st
                    .pairs(p)
                    .iter()
                    .filter(|(_, o)| {
                        st.term(*o)
                            .as_integer()
                            .is_some_and(|v| facet.op.holds(v, facet.bound))
                    })
                    .map(|(s, _)| *s)
                    .collect(),
                None => HashSet::new(),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_query_tree() {
        let e = parse_dl_query("Result and isResultOfPhase some {ph01}").unwrap();
        assert_eq!(
            e,
            ClassExpr::named("Result").and(ClassExpr::some("isResultOfPhase", ClassExpr::one_of(["ph01"])))
        );
    }

    #[test]
    fn complex_query_tree() {
        let e = parse_dl_query(
            "AcrossSettingMBD and hasParticipant some (Participant and hasAge some (years some xsd:int[<10])) and hasMBDItem some (AcrossSettingMBDItem and hasSetting value school)",
        )
        .unwrap();
        let age = ClassExpr::DataSome(
            "years".into(),
            Facet {
                op: FacetOp::Lt,
                bound: 10,
                datatype: "xsd:int".into(),
            },
        );
        let expected = ClassExpr::named("AcrossSettingMBD")
            .and(ClassExpr::some(
                "hasParticipant",
                ClassExpr::named("Participant").and(ClassExpr::some("hasAge", age)),
            ))
            .and(ClassExpr::some(
                "hasMBDItem",
                ClassExpr::named("AcrossSettingMBDItem").and(ClassExpr::value("hasSetting", "school")),
            ));
        assert_eq!(e, expected);
    }

    #[test]
    fn and_is_left_associative() {
        let e = parse_dl_query("A and B and C").unwrap();
        assert_eq!(e, ClassExpr::named("A").and(ClassExpr::named("B")).and(ClassExpr::named("C")));
    }

    #[test]
    fn dangling_and_is_rejected() {
        let err = parse_dl_query("Result and").unwrap_err();
        assert!(matches!(err, QueryError::Syntax { line: 1, column: 11, .. }), "{err}");
    }

    #[test]
    fn other_syntax_errors() {
        for bad in [
            "",
            "(Result",
            "{}",
            "p some",
            "p some xsd:string[<3]",
            "p some xsd:int[<x]",
            "p some xsd:int[3]",
            "Result Result",
            "Result & x",
        ] {
            assert!(
                matches!(parse_dl_query(bad), Err(QueryError::Syntax { .. })),
                "{bad:?} parsed"
            );
        }
        assert!(matches!(
            parse_dl_query("foo:Bar"),
            Err(QueryError::UnknownPrefix { .. })
        ));
    }

    #[test]
    fn display_reparses() {
        for q in [
            "Result and isResultOfPhase some {ph01}",
            "A and (B and C)",
            "p some (q some xsd:int[>=3]) and r value x",
            "<http://example.org/C> and ssd:Result",
            "aut:Peer-mediatedIntervention",
        ] {
            let e = parse_dl_query(q).unwrap();
            assert_eq!(parse_dl_query(&e.to_string()).unwrap(), e, "{q}");
        }
    }

    #[test]
    fn facets() {
        assert!(FacetOp::Lt.holds(9, 10));
        assert!(!FacetOp::Lt.holds(10, 10));
        assert!(FacetOp::Le.holds(10, 10));
        assert!(FacetOp::Ge.holds(1, 1));
        assert!(!FacetOp::Gt.holds(1, 1));
        assert!(FacetOp::Eq.holds(-2, -2));
        let e = parse_dl_query("years some xsd:integer[= -2]").unwrap();
        assert!(matches!(e, ClassExpr::DataSome(_, Facet { bound: -2, .. })));
    }
}
