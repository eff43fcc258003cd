//! RDF terms and triples.

use std::cmp::Ordering;
use std::fmt;

use crate::vocab::{self, PrefixTable};

/// Datatype tag carried by a literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Datatype {
    Integer,
    Decimal,
    String,
}

/// A node or value in the annotation graph.
///
/// IRIs are stored fully expanded. Literal lexical forms are kept verbatim so
/// that `10.10` and `10.1` stay distinct terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal { lexical: String, datatype: Datatype },
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term::Iri(iri.into())
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::Blank(label.into())
    }

    pub fn integer(value: i64) -> Self {
        Term::Literal {
            lexical: value.to_string(),
            datatype: Datatype::Integer,
        }
    }

    /// Decimal literal with the shortest lexical form that still has a `.`.
    pub fn decimal(value: f64) -> Self {
        Term::Literal {
            lexical: format_decimal(value),
            datatype: Datatype::Decimal,
        }
    }

    pub fn string(value: impl Into<String>) -> Self {
        Term::Literal {
            lexical: value.into(),
            datatype: Datatype::String,
        }
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    /// Integer value of an integer literal.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Term::Literal {
                lexical,
                datatype: Datatype::Integer,
            } => lexical.trim_start_matches('+').parse().ok(),
            _ => None,
        }
    }

    /// Numeric value of an integer or decimal literal.
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Term::Literal {
                lexical,
                datatype: Datatype::Integer | Datatype::Decimal,
            } => lexical.trim_start_matches('+').parse().ok(),
            _ => None,
        }
    }

    /// Turtle-style rendering using prefixed names where possible.
    pub fn display_with<'a>(&'a self, prefixes: &'a PrefixTable) -> impl fmt::Display + 'a {
        DisplayWith {
            term: self,
            prefixes,
        }
    }

    /// Short human label: the local name for IRIs, the lexical form for
    /// literals.
    pub fn label(&self) -> &str {
        match self {
            Term::Iri(iri) => vocab::local_name(iri),
            Term::Blank(b) => b,
            Term::Literal { lexical, .. } => lexical,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(b) => write!(f, "_:{b}"),
            Term::Literal { lexical, datatype } => match datatype {
                Datatype::String => write_quoted(f, lexical),
                _ => f.write_str(lexical),
            },
        }
    }
}

struct DisplayWith<'a> {
    term: &'a Term,
    prefixes: &'a PrefixTable,
}

impl fmt::Display for DisplayWith<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Term::Iri(iri) = self.term {
            if let Some(pname) = vocab::compact(iri, self.prefixes) {
                return f.write_str(&pname);
            }
        }
        self.term.fmt(f)
    }
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\r' => f.write_str("\\r")?,
            '\t' => f.write_str("\\t")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

pub(crate) fn format_decimal(value: f64) -> String {
    let s = value.to_string();
    if s.contains('.') || !value.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}

/// Orders numeric literals by value and everything else by term order.
/// Numbers sort before other terms.
pub fn compare_for_ordering(a: &Term, b: &Term) -> Ordering {
    match (a.as_number(), b.as_number()) {
        (Some(x), Some(y)) => x.total_cmp(&y).then_with(|| a.cmp(b)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

/// A subject-predicate-object statement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        Triple {
            subject,
            predicate,
            object,
        }
    }

    /// `subject rdf:type class`.
    pub fn typed(subject: Term, class: &str) -> Self {
        Triple::new(subject, Term::iri(vocab::RDF_TYPE), Term::iri(class))
    }
}
