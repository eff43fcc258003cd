mod common;

use proptest::prelude::*;
use ssdont::synth::{generate_studies, GenProfile};
use ssdont::turtle::{graph_to_kb, isomorphic, kb_to_graph, parse_turtle, serialize_turtle, TripleGraph};
use ssdont::vocab::{self, core};
use ssdont::{load_kb_file, Term, Triple};

fn reload(kb: &ssdont::KnowledgeBase) -> (TripleGraph, TripleGraph, ssdont::KnowledgeBase) {
    let graph = kb_to_graph(kb);
    let text = serialize_turtle(&graph);
    let back = parse_turtle(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let kb2 = graph_to_kb(&back, &ssdont::Taxonomy::core()).unwrap();
    (graph, back, kb2)
}

#[test]
fn generated_kbs_round_trip() {
    let mut failures = Vec::new();
    for seed in 1..=100 {
        let kb = generate_studies(10, &GenProfile::default().with_seed(seed)).unwrap();
        let (graph, back, kb2) = reload(&kb);
        if !isomorphic(&graph.triples, &back.triples) {
            failures.push(format!("seed {seed}: graphs not isomorphic"));
        } else if kb2.with_canonical_blank_labels() != kb.with_canonical_blank_labels() {
            failures.push(format!("seed {seed}: typed content differs"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn fixtures_round_trip() {
    for name in ["ssd01_abab.ttl", "ab_study.ttl", "across_setting.ttl", "cookbook.ttl", "broken.ttl"] {
        let kb = load_kb_file(common::fixture(name)).unwrap();
        let (graph, back, kb2) = reload(&kb);
        assert!(isomorphic(&graph.triples, &back.triples), "{name}");
        assert_eq!(kb2.with_canonical_blank_labels(), kb.with_canonical_blank_labels(), "{name}");
    }
}

#[test]
fn serialization_is_canonical() {
    let kb = generate_studies(5, &GenProfile::default()).unwrap();
    let text = serialize_turtle(&kb_to_graph(&kb));
    let again = serialize_turtle(&parse_turtle(&text).unwrap());
    assert_eq!(text, again);
}

fn node() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0..6u8).prop_map(|i| Term::iri(core(&format!("n{i}")))),
        (0..4u8).prop_map(|i| Term::blank(format!("b{i}"))),
    ]
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![
        node(),
        (-50i64..50).prop_map(Term::integer),
        (-500i64..500).prop_map(|v| Term::decimal(v as f64 / 10.0)),
        "[a-z \"\\\\]{0,6}".prop_map(Term::string),
    ]
}

fn predicate() -> impl Strategy<Value = Term> {
    prop::sample::select(vec![vocab::prop::HAS_PHASE, vocab::prop::HAS_VALUE, vocab::prop::HAS_SETTING, vocab::RDF_TYPE])
        .prop_map(Term::iri)
}

proptest! {
    #[test]
    fn random_graphs_round_trip(triples in prop::collection::btree_set((node(), predicate(), object()), 0..25)) {
        let mut g = TripleGraph::new();
        for (s, p, o) in triples {
            g.insert(Triple::new(s, p, o));
        }
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).unwrap();
        prop_assert!(isomorphic(&g.triples, &back.triples), "{}", text);
    }
}
