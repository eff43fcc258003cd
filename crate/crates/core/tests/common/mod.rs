//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use regex::Regex;
use ssdont::model::{Phase, PhaseKind};
use ssdont::vocab::{autism, class, core, RDF_TYPE};
use ssdont::{KnowledgeBase, Study, Term};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Every signature of length 1..=max_len over {B, I, A}, optionally ending in
/// one F (counted in the length).
pub fn all_signatures(max_len: usize) -> Vec<String> {
    let mut bodies = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|p| ['B', 'I', 'A'].map(|c| format!("{p}{c}")))
            .collect();
        bodies.extend(frontier.iter().cloned());
    }
    let mut out = Vec::new();
    for body in bodies {
        if !body.is_empty() {
            out.push(body.clone());
        }
        if body.len() < max_len {
            out.push(format!("{body}F"));
        }
    }
    out
}

/// Design classes a signature matches, by regular expression over the
/// letter string, closed upward by a hand-written parent table.
pub fn oracle_classes(sig: &str) -> BTreeSet<String> {
    let non_f = sig.trim_end_matches('F');
    let follow_up_ok = !non_f.contains('F') && sig.len() - non_f.len() <= 1;
    let mut out = BTreeSet::from([class::SINGLE_SUBJECT_DESIGN.to_string()]);
    if !follow_up_ok {
        return out;
    }
    let table: [(&str, &str, &[&str]); 5] = [
        (r"^BIF?$", class::AB_DESIGN, &[class::SIMPLE_DESIGN]),
        (r"^BIBIF?$", class::ABAB_DESIGN, &[class::WITHDRAWAL_DESIGN]),
        (r"^BI+F?$", class::SIMPLE_DESIGN, &[]),
        (r"^B(IB)+I?F?$", class::WITHDRAWAL_DESIGN, &[]),
        (r"^BAF?$", class::ALTERNATING_TREATMENT_DESIGN, &[]),
    ];
    for (re, c, parents) in table {
        if Regex::new(re).unwrap().is_match(sig) {
            if c == class::WITHDRAWAL_DESIGN && non_f.len() < 3 {
                continue;
            }
            out.insert(c.to_string());
            out.extend(parents.iter().map(|p| p.to_string()));
        }
    }
    out
}

/// A structurally valid study with the given phase letters.
pub fn study_from_signature(id: &str, sig: &str) -> Study {
    let mut s = Study::new(Term::iri(core(id)));
    for (i, c) in sig.chars().enumerate() {
        let kind = PhaseKind::from_symbol(c).unwrap();
        let mut p = Phase::new(Term::iri(core(&format!("{id}_ph{}", i + 1))), kind, i as i64 + 1);
        match kind {
            PhaseKind::SimpleIntervention => p = p.with_interventions([Term::iri(autism("weekendInterview"))]),
            PhaseKind::AlternatingIntervention => {
                p = p.with_interventions([Term::iri(autism("weekendInterview")), Term::iri(autism("videoClips"))])
            }
            _ => {}
        }
        s.phases.push(p);
    }
    s
}

/// Reflexive-transitive closure by repeated relaxation over the edge list.
pub fn brute_closure(edges: &[(String, String)], nodes: &BTreeSet<String>) -> BTreeMap<String, BTreeSet<String>> {
    let mut reach: BTreeMap<String, BTreeSet<String>> =
        nodes.iter().map(|n| (n.clone(), BTreeSet::from([n.clone()]))).collect();
    loop {
        let mut changed = false;
        for (child, parent) in edges {
            let add: Vec<String> = reach[parent].iter().cloned().collect();
            let set = reach.get_mut(child).unwrap();
            for a in add {
                changed |= set.insert(a);
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// Linear scan for the best intervention-phase value among AB studies on
/// the Wh-questions outcome whose intervention is peer mediated.
pub fn best_result_oracle(kb: &KnowledgeBase) -> Option<(Term, Term, f64)> {
    let graph = ssdont::turtle::kb_to_graph(kb);
    let peer = autism("Peer-mediatedIntervention");
    let is_peer = |t: &Term| {
        graph.triples.iter().any(|tr| {
            &tr.subject == t
                && tr.predicate.as_iri() == Some(RDF_TYPE)
                && tr.object.as_iri().is_some_and(|c| kb.taxonomy.subsumed_by(c, &peer))
        })
    };
    let ab = Regex::new(r"^BIF?$").unwrap();
    let wh = Term::iri(autism("correct_answers_wh"));
    let mut best: Option<(Term, Term, f64)> = None;
    for study in &kb.studies {
        let sig = ssdont::PhaseSignature::of_phases(&study.phases).to_string();
        let asserted_ab = study.asserted_class.as_deref() == Some(class::AB_DESIGN);
        if !(ab.is_match(&sig) || asserted_ab) || !study.outcomes.contains(&wh) {
            continue;
        }
        for phase in study.phases.iter().filter(|p| p.kind == PhaseKind::SimpleIntervention) {
            for it in phase.intervention_types.iter().filter(|t| is_peer(t)) {
                for r in study.results.iter().filter(|r| r.phase == phase.id) {
                    if best.as_ref().is_none_or(|b| r.value > b.2) {
                        best = Some((study.id.clone(), it.clone(), r.value));
                    }
                }
            }
        }
    }
    best
}

pub enum Lang {
    Dl,
    Sparql,
}

/// A competency question, its query over `fixtures/cookbook.ttl`, and the
/// answer worked out by hand from the fixture. DL answers are individuals;
/// SPARQL answers are rows with space-separated cells.
pub struct CookbookEntry {
    pub question: &'static str,
    pub lang: Lang,
    pub query: &'static str,
    pub expected: &'static [&'static str],
}

pub const COOKBOOK: &[CookbookEntry] = &[
    CookbookEntry {
        question: "What is the type of the SSD study? (cb02)",
        lang: Lang::Sparql,
        query: "SELECT ?type WHERE { ssd:cb02 a ?type }",
        expected: &["ssd:ABAB_Design", "ssd:WithdrawalDesign", "ssd:SingleSubjectDesign"],
    },
    CookbookEntry {
        question: "What is the type of the SSD study? (cb03)",
        lang: Lang::Sparql,
        query: "SELECT ?type WHERE { ssd:cb03 a ?type }",
        expected: &["ssd:AlternatingTreatmentDesign", "ssd:SingleSubjectDesign"],
    },
    CookbookEntry {
        question: "Retrieve SSD studies regarding autism",
        lang: Lang::Dl,
        query: "SingleSubjectDesign and hasParticipant some (hasCondition value autism)",
        expected: &["ssd:cb01", "ssd:cb02", "ssd:cb04", "ssd:cb05"],
    },
    CookbookEntry {
        question: "Which condition do the participants of cb03 have?",
        lang: Lang::Sparql,
        query: "SELECT ?c WHERE { ssd:cb03 ssd:hasParticipant ?p . ?p ssd:hasCondition ?c }",
        expected: &["ssd:adhd"],
    },
    CookbookEntry {
        question: "Retrieve SSD studies with participants between 1 and 3 years old",
        lang: Lang::Dl,
        query: "SingleSubjectDesign and hasParticipant some (hasAge some (years some xsd:int[>=1] and years some xsd:int[<=3]))",
        expected: &["ssd:cb01", "ssd:cb04", "ssd:cb05"],
    },
    CookbookEntry {
        question: "How old are the participants of cb05?",
        lang: Lang::Sparql,
        query: "SELECT ?p ?y WHERE { ssd:cb05 ssd:hasParticipant ?p . ?p ssd:hasAge ?a . ?a ssd:years ?y }",
        expected: &["ssd:eve 1", "ssd:finn 4"],
    },
    CookbookEntry {
        question: "Retrieve SSD studies where weekendInterview was used",
        lang: Lang::Dl,
        query: "hasPhase some (hasInterventionType value weekendInterview)",
        expected: &["ssd:cb02", "ssd:cb03"],
    },
    CookbookEntry {
        question: "Retrieve SSD studies where a peer-mediated intervention was used",
        lang: Lang::Dl,
        query: "SingleSubjectDesign and hasPhase some (hasInterventionType some Peer-mediatedIntervention)",
        expected: &["ssd:cb01", "ssd:cb02", "ssd:cb03"],
    },
    CookbookEntry {
        question: "Retrieve multiple-baseline studies where a peer-mediated intervention was used",
        lang: Lang::Dl,
        query: "hasMBDItem some (hasPhase some (hasInterventionType some Peer-mediatedIntervention))",
        expected: &["ssd:cb04"],
    },
    CookbookEntry {
        question: "Retrieve SSD studies across settings",
        lang: Lang::Dl,
        query: "AcrossSettingMBD",
        expected: &["ssd:cb06"],
    },
    CookbookEntry {
        question: "Retrieve SSD studies across subjects",
        lang: Lang::Dl,
        query: "AcrossSubjectMBD",
        expected: &["ssd:cb05"],
    },
    CookbookEntry {
        question: "Retrieve SSD studies across outcomes",
        lang: Lang::Dl,
        query: "AcrossOutcomeMBD",
        expected: &["ssd:cb04"],
    },
    CookbookEntry {
        question: "Retrieve multiple-baseline studies",
        lang: Lang::Dl,
        query: "MultipleBaselineDesign",
        expected: &["ssd:cb04", "ssd:cb05", "ssd:cb06"],
    },
    CookbookEntry {
        question: "Retrieve multiple-baseline studies whose substudies are withdrawal designs",
        lang: Lang::Sparql,
        query: "SELECT ?s WHERE { ?s a ssd:MultipleBaselineDesign ; ssd:hasMBDItemType ssd:WithdrawalDesign }",
        expected: &["ssd:cb06"],
    },
    CookbookEntry {
        question: "Retrieve withdrawal studies",
        lang: Lang::Dl,
        query: "WithdrawalDesign",
        expected: &["ssd:cb02"],
    },
];

/// Runs one cookbook entry and returns its answer as a set of strings in the
/// same shape as `expected`.
pub fn run_cookbook_entry(engine: &ssdont::query::QueryEngine, entry: &CookbookEntry) -> Result<BTreeSet<String>, String> {
    let prefixes = ssdont::vocab::default_prefixes();
    match entry.lang {
        Lang::Dl => {
            let expr = ssdont::query::parse_dl_query(entry.query).map_err(|e| e.to_string())?;
            let hits = engine.dl(&expr).map_err(|e| e.to_string())?;
            Ok(hits.iter().map(|t| t.display_with(&prefixes).to_string()).collect())
        }
        Lang::Sparql => {
            let q = ssdont::query::parse_sparql(entry.query).map_err(|e| e.to_string())?;
            let table = engine.sparql(&q);
            Ok(table
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|t| t.display_with(&prefixes).to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect())
        }
    }
}
