use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write;

use super::TripleGraph;
use crate::term::{self, Datatype, Term};
use crate::vocab::{self, PrefixTable, RDF_TYPE};

/// Writes `graph` in canonical form.
///
/// Prefix directives come first, sorted by label. IRI subjects follow in
/// lexicographic order, then blank-node subjects. Blank nodes are renamed
/// `_:b1, _:b2, …` in order of first use, with `rdf:type` written first as
/// `a` and the remaining predicates grouped with `;` in sorted order.
pub fn serialize_turtle(graph: &TripleGraph) -> String {
    let mut out = String::new();
    for (label, ns) in &graph.prefixes {
        let _ = writeln!(out, "@prefix {label}: <{ns}> .");
    }

    // subject -> predicate -> objects, with rdf:type ordered first.
    let mut by_subject: Blocks<'_> = BTreeMap::new();
    for t in &graph.triples {
        by_subject
            .entry(&t.subject)
            .or_default()
            .entry(PredKey(&t.predicate))
            .or_default()
            .push(&t.object);
    }

    let mut names = BlankNames::default();
    let mut queue: VecDeque<&Term> = VecDeque::new();
    let mut written_blanks = std::collections::HashSet::new();

    let iri_subjects: Vec<&Term> = by_subject.keys().copied().filter(|s| !s.is_blank()).collect();
    let blank_subjects: Vec<&Term> = by_subject.keys().copied().filter(|s| s.is_blank()).collect();

    for s in iri_subjects {
        write_block(s, &by_subject, &graph.prefixes, &mut names, &mut queue, &mut out);
    }
    // Blank subjects reached from IRI subjects, breadth first, then any that
    // are never used as objects.
    let mut leftover = blank_subjects.into_iter();
    loop {
        let next = match queue.pop_front() {
            Some(b) => Some(b),
            None => leftover.by_ref().find(|b| !written_blanks.contains(*b)),
        };
        let Some(b) = next else { break };
        if !written_blanks.insert(b) || !by_subject.contains_key(b) {
            continue;
        }
        write_block(b, &by_subject, &graph.prefixes, &mut names, &mut queue, &mut out);
    }
    out
}

type Blocks<'g> = BTreeMap<&'g Term, BTreeMap<PredKey<'g>, Vec<&'g Term>>>;

fn write_block<'g>(
    subject: &Term,
    by_subject: &Blocks<'g>,
    prefixes: &PrefixTable,
    names: &mut BlankNames,
    queue: &mut VecDeque<&'g Term>,
    out: &mut String,
) {
    let preds = &by_subject[subject];
    out.push('\n');
    out.push_str(&render(subject, prefixes, names));
    let mut first = true;
    for (pred, objects) in preds {
        let pred_text = if pred.0.as_iri() == Some(RDF_TYPE) {
            "a".to_string()
        } else {
            render(pred.0, prefixes, names)
        };
        let mut objects = objects.clone();
        objects.sort();
        for o in objects {
            if o.is_blank() && !names.contains(o) {
                queue.push_back(o);
            }
            let text = render(o, prefixes, names);
            if first {
                let _ = write!(out, " {pred_text} {text}");
                first = false;
            } else {
                let _ = write!(out, " ;\n    {pred_text} {text}");
            }
        }
    }
    out.push_str(" .\n");
}

/// Predicate ordering key that puts `rdf:type` first.
#[derive(PartialEq, Eq)]
struct PredKey<'a>(&'a Term);

impl Ord for PredKey<'_> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let rank = |t: &Term| t.as_iri() != Some(RDF_TYPE);
        rank(self.0)
            .cmp(&rank(other.0))
            .then_with(|| self.0.cmp(other.0))
    }
}

impl PartialOrd for PredKey<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Default)]
struct BlankNames {
    map: HashMap<String, usize>,
}

impl BlankNames {
    fn contains(&self, t: &Term) -> bool {
        matches!(t, Term::Blank(l) if self.map.contains_key(l))
    }

    fn name(&mut self, label: &str) -> usize {
        let next = self.map.len() + 1;
        *self.map.entry(label.to_string()).or_insert(next)
    }
}

fn render(t: &Term, prefixes: &PrefixTable, names: &mut BlankNames) -> String {
    match t {
        Term::Iri(iri) => vocab::compact(iri, prefixes).unwrap_or_else(|| format!("<{iri}>")),
        Term::Blank(label) => format!("_:b{}", names.name(label)),
        Term::Literal { lexical, datatype } => match datatype {
            Datatype::String => {
                let mut s = String::new();
                let _ = term::write_quoted(&mut s, lexical);
                s
            }
            _ => lexical.clone(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_turtle;
    use super::*;

    #[test]
    fn phase_block_keeps_position() {
        let g = parse_turtle("ssd:ph01 a ssd:BaselinePhase ;\n    ssd:hasPosition 1 .").unwrap();
        let text = serialize_turtle(&g);
        assert!(text.contains("ssd:hasPosition 1"), "{text}");
        assert!(text.contains("ssd:ph01 a ssd:BaselinePhase ;"), "{text}");
    }

    #[test]
    fn empty_graph_writes_prefixes_only() {
        let text = serialize_turtle(&TripleGraph::new());
        assert!(text.lines().all(|l| l.starts_with("@prefix ")));
        assert_eq!(text.lines().count(), vocab::default_prefixes().len());
    }

    #[test]
    fn blank_nodes_renumbered_in_first_use_order() {
        let g = parse_turtle(
            "ssd:paul ssd:hasAge _:zz ; ssd:diagnosedAtAge _:aa .\n_:zz ssd:years 7 .\n_:aa ssd:years 3 .\n_:lonely ssd:years 1 .",
        )
        .unwrap();
        let text = serialize_turtle(&g);
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('@') && !l.is_empty()).collect();
        assert_eq!(
            body,
            [
                "ssd:paul ssd:diagnosedAtAge _:b1 ;",
                "    ssd:hasAge _:b2 .",
                "_:b1 ssd:years 3 .",
                "_:b2 ssd:years 7 .",
                "_:b3 ssd:years 1 .",
            ]
        );
    }

    #[test]
    fn output_is_deterministic_and_reparses() {
        let src = "ssd:b ssd:p \"x\\\"y\" .\nssd:a a ssd:Result ; ssd:hasValue 10.1, 2.0 .";
        let g = parse_turtle(src).unwrap();
        let once = serialize_turtle(&g);
        let again = serialize_turtle(&parse_turtle(&once).unwrap());
        assert_eq!(once, again);
        assert_eq!(parse_turtle(&once).unwrap().triples, g.triples);
    }
}
