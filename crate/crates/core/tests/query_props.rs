mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use ssdont::bench::BEST_RESULT_QUERY;
use ssdont::classifier::materialize_types;
use ssdont::query::{parse_dl_query, parse_sparql, ClassExpr, Name, QueryEngine};
use ssdont::synth::{generate_studies, GenProfile};
use ssdont::turtle::kb_to_graph;
use ssdont::vocab::{self, autism, class};
use ssdont::{KnowledgeBase, Term};

fn corpus(seed: u64, n: usize) -> KnowledgeBase {
    materialize_types(&generate_studies(n, &GenProfile::default().with_seed(seed)).unwrap()).unwrap()
}

const CLASSES: &[&str] = &[
    class::SINGLE_SUBJECT_DESIGN,
    class::AB_DESIGN,
    class::WITHDRAWAL_DESIGN,
    class::ACROSS_SETTING_MBD,
    class::PHASE,
    class::SIMPLE_INTERVENTION_PHASE,
    class::PARTICIPANT,
    class::RESULT,
    class::INTERVENTION_TYPE,
    class::PEER_MEDIATED_INTERVENTION,
    class::OUTCOME,
    class::MBD_ITEM,
];

fn distinct_column(engine: &QueryEngine, sparql: &str) -> BTreeSet<Term> {
    let table = engine.sparql(&parse_sparql(sparql).unwrap());
    table.values("x").into_iter().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dl_agrees_with_sparql(seed in 0u64..10_000, c in prop::sample::select(CLASSES), p in prop::sample::select(vocab::prop::ALL)) {
        let kb = corpus(seed, 6);
        let engine = QueryEngine::new(&kb);
        let named = ClassExpr::named(Name::Iri(c.to_string()));
        prop_assert_eq!(
            engine.dl(&named).unwrap(),
            distinct_column(&engine, &format!("SELECT ?x WHERE {{ ?x a <{c}> }}"))
        );
        let some = ClassExpr::some(Name::Iri(p.to_string()), named.clone());
        prop_assert_eq!(
            engine.dl(&some).unwrap(),
            distinct_column(&engine, &format!("SELECT ?x WHERE {{ ?x <{p}> ?y . ?y a <{c}> }}"))
        );
        let both = ClassExpr::and(named.clone(), some.clone());
        prop_assert_eq!(
            engine.dl(&both).unwrap(),
            distinct_column(&engine, &format!("SELECT ?x WHERE {{ ?x a <{c}> ; <{p}> ?y . ?y a <{c}> }}"))
        );
        prop_assert_eq!(engine.dl(&both).unwrap(), engine.dl(&ClassExpr::and(some, named)).unwrap());
    }

    #[test]
    fn answers_grow_with_the_corpus(seed in 0u64..10_000, extra in 1usize..6) {
        let small = corpus(seed, 5);
        let large = corpus(seed, 5 + extra);
        let g_small = kb_to_graph(&small).triples;
        let g_large = kb_to_graph(&large).triples;
        prop_assert!(g_small.is_subset(&g_large));
        let queries = [
            "SingleSubjectDesign and hasParticipant some (hasCondition value autism)",
            "hasPhase some (hasInterventionType some Peer-mediatedIntervention)",
            "hasParticipant some (hasAge some (years some xsd:int[>=4] and years some xsd:int[<=9]))",
            "Result and isResultOfPhase some SimpleInterventionPhase",
            "hasMBDItem some (hasSetting value school)",
        ];
        let (es, el) = (QueryEngine::new(&small), QueryEngine::new(&large));
        for q in queries {
            let e = parse_dl_query(q).unwrap();
            let a = es.dl(&e).unwrap();
            let b = el.dl(&e).unwrap();
            prop_assert!(a.is_subset(&b), "{}", q);
        }
    }

    #[test]
    fn order_desc_limit_one_is_the_maximum(seed in 0u64..10_000) {
        let kb = corpus(seed, 8);
        let engine = QueryEngine::new(&kb);
        let t = engine.sparql(&parse_sparql("SELECT ?r ?v WHERE { ?r a ssd:Result ; ssd:hasValue ?v } ORDER BY DESC(?v) LIMIT 1").unwrap());
        let max = kb.studies.iter().flat_map(|s| &s.results).map(|r| r.value).fold(f64::MIN, f64::max);
        prop_assert_eq!(t.len(), 1);
        prop_assert_eq!(t.rows[0][1].as_number(), Some(max));

        let t = engine.sparql(&parse_sparql("SELECT ?v WHERE { ?r a ssd:Result ; ssd:hasValue ?v } ORDER BY ?v LIMIT 1").unwrap());
        let min = kb.studies.iter().flat_map(|s| &s.results).map(|r| r.value).fold(f64::MAX, f64::min);
        prop_assert_eq!(t.rows[0][0].as_number(), Some(min));
    }

    #[test]
    fn best_result_query_matches_linear_scan(seed in 0u64..10_000) {
        let kb = corpus(seed, 30);
        let engine = QueryEngine::new(&kb);
        let t = engine.sparql(&parse_sparql(BEST_RESULT_QUERY).unwrap());
        match common::best_result_oracle(&kb) {
            None => prop_assert!(t.is_empty()),
            Some((_, _, best)) => {
                prop_assert_eq!(t.len(), 1);
                prop_assert_eq!(t.rows[0][2].as_number(), Some(best));
            }
        }
    }
}

#[test]
fn bag_semantics_keeps_duplicates() {
    let kb = corpus(3, 4);
    let engine = QueryEngine::new(&kb);
    let t = engine.sparql(&parse_sparql("SELECT ?s WHERE { ?s ssd:hasPhase ?p }").unwrap());
    let phases: usize = kb.studies.iter().map(|s| s.phases.len()).sum::<usize>()
        + kb.studies.iter().flat_map(|s| &s.mbd_items).map(|i| i.phases.len()).sum::<usize>();
    assert_eq!(t.len(), phases);
}

#[test]
fn one_of_and_value_agree() {
    let kb = corpus(9, 10);
    let engine = QueryEngine::new(&kb);
    let a = engine.dl(&parse_dl_query("hasPhase some (hasInterventionType value weekendInterview)").unwrap()).unwrap();
    let b = engine.dl(&parse_dl_query("hasPhase some (hasInterventionType some {weekendInterview})").unwrap()).unwrap();
    assert_eq!(a, b);
    let c = engine
        .dl(&ClassExpr::some(
            Name::Iri(vocab::prop::HAS_PHASE.into()),
            ClassExpr::value(Name::Iri(vocab::prop::HAS_INTERVENTION_TYPE.into()), Name::Iri(autism("weekendInterview"))),
        ))
        .unwrap();
    assert_eq!(a, c);
}

#[test]
fn best_result_oracle_is_exercised() {
    let hits = (0..20).filter(|s| common::best_result_oracle(&corpus(*s, 30)).is_some()).count();
    assert!(hits >= 5, "only {hits} of 20 corpora have a matching study");
}
