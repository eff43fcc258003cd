//! Conversion between triple graphs and the typed study model.
//!
//! Every triple that the typed model does not interpret is kept as an opaque
//! triple in [`KnowledgeBase::extra`], so nothing is lost on a round trip.
//! `rdfs:subClassOf` triples between IRIs also extend the taxonomy.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::TripleGraph;
use crate::model::{
    AgeDescription, AgeNode, InstantNode, KnowledgeBase, MbdItem, Measurement, Outcome,
    OutcomeForm, Participant, Phase, PhaseKind, Study,
};
use crate::taxonomy::{Taxonomy, TaxonomyError};
use crate::term::{Term, Triple};
use crate::vocab::{class, prop, RDFS_SUBCLASS_OF, RDF_TYPE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IssueKind {
    /// A property value has the wrong kind of term.
    TypeClash,
    /// A reference to something that is not in the graph.
    DanglingReference,
    MissingProperty,
    /// More values than the property allows, or contradictory types.
    Conflict,
    TaxonomyCycle,
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IssueKind::TypeClash => "type clash",
            IssueKind::DanglingReference => "dangling reference",
            IssueKind::MissingProperty => "missing property",
            IssueKind::Conflict => "conflict",
            IssueKind::TaxonomyCycle => "taxonomy cycle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MappingIssue {
    pub kind: IssueKind,
    pub subject: Term,
    pub message: String,
}

impl fmt::Display for MappingIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.kind, self.subject, self.message)
    }
}

/// Schema problems found while building the typed model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", summarize(.issues))]
pub struct MappingError {
    pub issues: Vec<MappingIssue>,
}

fn summarize(issues: &[MappingIssue]) -> String {
    match issues {
        [] => "no issues".into(),
        [one] => one.to_string(),
        [first, rest @ ..] => format!("{first} (and {} more)", rest.len()),
    }
}

/// Builds the typed model from a graph.
pub fn graph_to_kb(graph: &TripleGraph, taxonomy: &Taxonomy) -> Result<KnowledgeBase, MappingError> {
    let triples: Vec<&Triple> = graph.triples.iter().collect();
    let mut b = Builder::new(&triples, taxonomy.clone());
    b.extend_taxonomy();
    let studies = b.studies();
    let outcomes = b.outcomes();
    if !b.issues.is_empty() {
        b.issues.sort();
        b.issues.dedup();
        return Err(MappingError { issues: b.issues });
    }
    let extra = triples
        .iter()
        .zip(&b.consumed)
        .filter(|(_, used)| !**used)
        .map(|(t, _)| (*t).clone())
        .collect();
    let mut kb = KnowledgeBase::new(b.taxonomy);
    kb.prefixes = graph.prefixes.clone();
    kb.studies = studies;
    kb.outcomes = outcomes;
    kb.extra = extra;
    Ok(kb)
}

struct Builder<'g> {
    triples: &'g [&'g Triple],
    consumed: Vec<bool>,
    by_subject: HashMap<&'g Term, Vec<usize>>,
    by_object: HashMap<(&'g str, &'g Term), Vec<usize>>,
    taxonomy: Taxonomy,
    issues: Vec<MappingIssue>,
    phase_owner: HashMap<&'g Term, &'g Term>,
}

impl<'g> Builder<'g> {
    fn new(triples: &'g [&'g Triple], taxonomy: Taxonomy) -> Self {
        let mut by_subject: HashMap<&Term, Vec<usize>> = HashMap::new();
        let mut by_object: HashMap<(&str, &Term), Vec<usize>> = HashMap::new();
        for (i, t) in triples.iter().enumerate() {
            by_subject.entry(&t.subject).or_default().push(i);
            if let Term::Iri(p) = &t.predicate {
                by_object.entry((p.as_str(), &t.object)).or_default().push(i);
            }
        }
        Builder {
            triples,
            consumed: vec![false; triples.len()],
            by_subject,
            by_object,
            taxonomy,
            issues: Vec::new(),
            phase_owner: HashMap::new(),
        }
    }

    fn issue(&mut self, kind: IssueKind, subject: &Term, message: impl Into<String>) {
        self.issues.push(MappingIssue {
            kind,
            subject: subject.clone(),
            message: message.into(),
        });
    }

    /// `(triple index, object)` for `subject pred ?o`.
    fn values(&self, subject: &Term, pred: &str) -> Vec<(usize, &'g Term)> {
        let mut v: Vec<(usize, &'g Term)> = self
            .by_subject
            .get(subject)
            .into_iter()
            .flatten()
            .filter(|i| self.triples[**i].predicate.as_iri() == Some(pred))
            .map(|i| (*i, &self.triples[*i].object))
            .collect();
        v.sort_by(|a, b| a.1.cmp(b.1));
        v
    }

    fn subjects_with(&self, pred: &str) -> BTreeSet<&'g Term> {
        self.triples
            .iter()
            .filter(|t| t.predicate.as_iri() == Some(pred))
            .map(|t| &t.subject)
            .collect()
    }

    fn objects_of(&self, pred: &str) -> BTreeSet<&'g Term> {
        self.triples
            .iter()
            .filter(|t| t.predicate.as_iri() == Some(pred))
            .map(|t| &t.object)
            .collect()
    }

    fn types(&self, subject: &Term) -> Vec<(usize, &'g str)> {
        self.values(subject, RDF_TYPE)
            .into_iter()
            .filter_map(|(i, o)| o.as_iri().map(|c| (i, c)))
            .collect()
    }

    fn has_type_under(&self, subject: &Term, ancestor: &str) -> bool {
        self.types(subject)
            .iter()
            .any(|(_, c)| self.taxonomy.subsumed_by(c, ancestor))
    }

    /// Consumes the most specific type under `ancestor`, if any.
    fn take_specific_type(&mut self, subject: &Term, ancestor: &str) -> Option<String> {
        let under: Vec<(usize, &str)> = self
            .types(subject)
            .into_iter()
            .filter(|(_, c)| self.taxonomy.subsumed_by(c, ancestor))
            .collect();
        let minimal = under.iter().find(|(_, c)| {
            !under
                .iter()
                .any(|(_, d)| d != c && self.taxonomy.subsumed_by(d, c))
        })?;
        self.consumed[minimal.0] = true;
        Some(minimal.1.to_string())
    }

    fn consume_type(&mut self, subject: &Term, class: &str) {
        for (i, c) in self.types(subject) {
            if c == class {
                self.consumed[i] = true;
            }
        }
    }

    /// At most one value; consumes it.
    fn single(&mut self, subject: &Term, pred: &str) -> Option<&'g Term> {
        let vals = self.values(subject, pred);
        if vals.len() > 1 {
            self.issue(
                IssueKind::Conflict,
                subject,
                format!("{} has {} values, expected one", short(pred), vals.len()),
            );
        }
        let (i, o) = *vals.first()?;
        self.consumed[i] = true;
        Some(o)
    }

    fn all(&mut self, subject: &Term, pred: &str) -> Vec<&'g Term> {
        self.values(subject, pred)
            .into_iter()
            .map(|(i, o)| {
                self.consumed[i] = true;
                o
            })
            .collect()
    }

    fn integer(&mut self, subject: &Term, pred: &str, required: bool) -> Option<i64> {
        match self.single(subject, pred) {
            Some(o) => match o.as_integer() {
                Some(n) => Some(n),
                None => {
                    self.issue(
                        IssueKind::TypeClash,
                        subject,
                        format!("{} expects an integer, found {o}", short(pred)),
                    );
                    None
                }
            },
            None => {
                if required {
                    self.issue(
                        IssueKind::MissingProperty,
                        subject,
                        format!("missing {}", short(pred)),
                    );
                }
                None
            }
        }
    }

    fn node(&mut self, subject: &Term, pred: &str) -> Option<&'g Term> {
        let o = self.single(subject, pred)?;
        if o.is_literal() {
            self.issue(
                IssueKind::TypeClash,
                subject,
                format!("{} expects a resource, found literal {o}", short(pred)),
            );
            return None;
        }
        Some(o)
    }

    fn extend_taxonomy(&mut self) {
        let mut pending: Vec<(usize, String, String)> = self
            .triples
            .iter()
            .enumerate()
            .filter(|(_, t)| t.predicate.as_iri() == Some(RDFS_SUBCLASS_OF))
            .filter_map(|(i, t)| Some((i, t.subject.as_iri()?.to_string(), t.object.as_iri()?.to_string())))
            .collect();
        // Parents that are never declared anywhere become roots.
        let children: BTreeSet<String> = pending.iter().map(|(_, c, _)| c.clone()).collect();
        for (_, _, parent) in &pending {
            if !self.taxonomy.contains(parent) && !children.contains(parent) {
                let _ = self.taxonomy.add_class(parent, []);
            }
        }
        loop {
            let before = pending.len();
            let mut rest = Vec::new();
            for (i, child, parent) in pending {
                match self.taxonomy.add_class(&child, [parent.as_str()]) {
                    Ok(()) => {}
                    Err(TaxonomyError::UnknownParent(_)) => rest.push((i, child, parent)),
                    Err(e) => {
                        let subject = Term::Iri(child.clone());
                        self.issue(IssueKind::TaxonomyCycle, &subject, e.to_string());
                    }
                }
            }
            pending = rest;
            if pending.is_empty() || pending.len() == before {
                break;
            }
        }
        for (_, child, parent) in pending {
            let subject = Term::Iri(child);
            self.issue(
                IssueKind::TaxonomyCycle,
                &subject,
                format!("subclass chain through <{parent}> never reaches a known class"),
            );
        }
    }

    fn studies(&mut self) -> Vec<Study> {
        let items: BTreeSet<&Term> = self
            .objects_of(prop::HAS_MBD_ITEM)
            .into_iter()
            .chain(
                self.by_subject
                    .keys()
                    .copied()
                    .filter(|s| self.has_type_under(s, class::MBD_ITEM)),
            )
            .collect();
        let mut ids: BTreeSet<&Term> = self.subjects_with(prop::HAS_MBD_ITEM);
        ids.extend(
            self.subjects_with(prop::HAS_PHASE)
                .into_iter()
                .filter(|s| !items.contains(s)),
        );
        ids.extend(
            self.by_subject
                .keys()
                .copied()
                .filter(|s| self.has_type_under(s, class::SINGLE_SUBJECT_DESIGN)),
        );

        let mut studies: Vec<Study> = ids.into_iter().map(|id| self.study(id)).collect();
        let index: HashMap<Term, usize> = studies
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();

        let mut result_ids: BTreeSet<&Term> = self.subjects_with(prop::IS_RESULT_OF_PHASE);
        result_ids.extend(
            self.by_subject
                .keys()
                .copied()
                .filter(|s| self.has_type_under(s, class::RESULT)),
        );
        for id in result_ids {
            if let Some((owner, m)) = self.result(id) {
                studies[index[owner]].results.push(m);
            }
        }
        for s in &mut studies {
            s.results.sort_by(|a, b| a.id.cmp(&b.id));
        }
        studies
    }

    fn study(&mut self, id: &'g Term) -> Study {
        let mut s = Study::new(id.clone());
        s.asserted_class = self.take_specific_type(id, class::SINGLE_SUBJECT_DESIGN);
        for p in self.all(id, prop::HAS_PARTICIPANT) {
            s.participants.push(self.participant(p));
        }
        s.outcomes = self.all(id, prop::HAS_OUTCOME).into_iter().cloned().collect();
        for ph in self.all(id, prop::HAS_PHASE) {
            if let Some(phase) = self.phase(ph, id) {
                s.phases.push(phase);
            }
        }
        s.phases.sort_by(|a, b| a.position.cmp(&b.position).then_with(|| a.id.cmp(&b.id)));
        for item in self.all(id, prop::HAS_MBD_ITEM) {
            let it = self.mbd_item(item);
            s.mbd_items.push(it);
        }
        if let Some(t) = self.node(id, prop::HAS_MBD_ITEM_TYPE) {
            match t.as_iri() {
                Some(c) => s.mbd_item_type = Some(c.to_string()),
                None => self.issue(
                    IssueKind::TypeClash,
                    id,
                    "hasMBDItemType expects a class IRI",
                ),
            }
        }
        s
    }

    fn mbd_item(&mut self, id: &'g Term) -> MbdItem {
        let mut item = MbdItem::new(id.clone());
        item.asserted_class = self.take_specific_type(id, class::MBD_ITEM);
        item.subject = self.node(id, prop::HAS_PARTICIPANT).cloned();
        item.setting = self.node(id, prop::HAS_SETTING).cloned();
        item.outcome = self.node(id, prop::HAS_OUTCOME).cloned();
        for ph in self.all(id, prop::HAS_PHASE) {
            if let Some(phase) = self.phase(ph, id) {
                item.phases.push(phase);
            }
        }
        item.phases
            .sort_by(|a, b| a.position.cmp(&b.position).then_with(|| a.id.cmp(&b.id)));
        item
    }

    fn phase(&mut self, id: &'g Term, owner: &'g Term) -> Option<Phase> {
        if id.is_literal() {
            self.issue(IssueKind::TypeClash, owner, format!("hasPhase expects a resource, found {id}"));
            return None;
        }
        if let Some(prev) = self.phase_owner.insert(id, owner) {
            if prev != owner {
                self.issue(
                    IssueKind::Conflict,
                    id,
                    format!("phase belongs to both {prev} and {owner}"),
                );
                return None;
            }
        }
        let kinds: Vec<PhaseKind> = PhaseKind::ALL
            .into_iter()
            .filter(|k| self.has_type_under(id, k.class_iri()))
            .collect();
        let kind = match kinds.as_slice() {
            [k] => *k,
            [] => {
                self.issue(
                    IssueKind::MissingProperty,
                    id,
                    "phase has no BaselinePhase, SimpleInterventionPhase, AlternatingInterventionPhase or FollowUpPhase type",
                );
                return None;
            }
            many => {
                self.issue(
                    IssueKind::Conflict,
                    id,
                    format!("phase has {} kinds", many.len()),
                );
                return None;
            }
        };
        self.take_specific_type(id, kind.class_iri());
        let position = self.integer(id, prop::HAS_POSITION, true)?;
        let intervention_types = self
            .all(id, prop::HAS_INTERVENTION_TYPE)
            .into_iter()
            .cloned()
            .collect();
        Some(Phase {
            id: id.clone(),
            kind,
            position,
            intervention_types,
        })
    }

    fn participant(&mut self, id: &'g Term) -> Participant {
        self.consume_type(id, class::PARTICIPANT);
        let mut p = Participant::new(id.clone());
        p.condition = self.node(id, prop::HAS_CONDITION).cloned();
        p.gender = self.node(id, prop::HAS_GENDER).cloned();
        if let Some(a) = self.node(id, prop::HAS_AGE) {
            p.age = self.age(a);
        }
        if let Some(a) = self.node(id, prop::DIAGNOSED_AT_AGE) {
            p.diagnosed_at_age = self.age(a);
        }
        p
    }

    fn age(&mut self, id: &'g Term) -> Option<AgeNode> {
        self.consume_type(id, class::AGE_DESCRIPTION);
        let years = self.integer(id, prop::YEARS, true)?;
        let months = self.integer(id, prop::MONTHS, false);
        let to_u32 = |n: i64| u32::try_from(n).ok();
        match (to_u32(years), months.map(to_u32)) {
            (Some(years), None) => Some(AgeNode {
                id: id.clone(),
                age: AgeDescription::years(years),
            }),
            (Some(years), Some(Some(months))) => Some(AgeNode {
                id: id.clone(),
                age: AgeDescription::years_months(years, months),
            }),
            _ => {
                self.issue(IssueKind::TypeClash, id, "age fields must be non-negative integers");
                None
            }
        }
    }

    /// A result and the study that owns its phase.
    fn result(&mut self, id: &'g Term) -> Option<(&'g Term, Measurement)> {
        self.consume_type(id, class::RESULT);
        let Some(phase) = self.node(id, prop::IS_RESULT_OF_PHASE) else {
            self.issue(IssueKind::MissingProperty, id, "missing isResultOfPhase");
            return None;
        };
        let Some(owner) = self.phase_owner.get(phase).copied() else {
            self.issue(
                IssueKind::DanglingReference,
                id,
                format!("isResultOfPhase points at {phase}, which is not a phase of any study"),
            );
            return None;
        };
        // Phases of MBD items resolve to the item; walk up to its study.
        let owner = self
            .by_object
            .get(&(prop::HAS_MBD_ITEM, owner))
            .and_then(|v| v.first())
            .map(|i| &self.triples[*i].subject)
            .unwrap_or(owner);

        let value = match self.single(id, prop::HAS_VALUE) {
            Some(v) => match v.as_number() {
                Some(n) => n,
                None => {
                    self.issue(
                        IssueKind::TypeClash,
                        id,
                        format!("hasValue expects a number, found {v}"),
                    );
                    return None;
                }
            },
            None => {
                self.issue(IssueKind::MissingProperty, id, "missing hasValue");
                return None;
            }
        };
        let Some(instant) = self.node(id, prop::OCCURS_IN) else {
            self.issue(IssueKind::MissingProperty, id, "missing occursIn");
            return None;
        };
        self.consume_type(instant, class::INSTANT);
        let index = self.integer(instant, prop::HAS_VALUE, true)?;
        let intervention_type = self.node(id, prop::HAS_INTERVENTION_TYPE).cloned();
        Some((
            owner,
            Measurement {
                id: id.clone(),
                value,
                instant: InstantNode {
                    id: instant.clone(),
                    index,
                },
                phase: phase.clone(),
                intervention_type,
            },
        ))
    }

    fn outcomes(&mut self) -> Vec<Outcome> {
        let mut ids: BTreeSet<&Term> = self.objects_of(prop::HAS_OUTCOME);
        ids.extend(
            self.by_subject
                .keys()
                .copied()
                .filter(|s| self.has_type_under(s, class::OUTCOME)),
        );
        let mut out = Vec::new();
        for id in ids {
            if id.is_literal() {
                continue;
            }
            let class_iri = self.take_specific_type(id, class::OUTCOME);
            let form = match self.node(id, prop::IN_FORM_OF) {
                Some(f) => match f.as_iri().and_then(OutcomeForm::from_iri) {
                    Some(form) => Some(form),
                    None => {
                        self.issue(
                            IssueKind::TypeClash,
                            id,
                            format!(
                                "inFormOf expects percentage, magnitude, duration, frequency or interval, found {f}"
                            ),
                        );
                        None
                    }
                },
                None => None,
            };
            out.push(Outcome {
                id: id.clone(),
                class_iri,
                form,
            });
        }
        out
    }
}

fn short(iri: &str) -> &str {
    crate::vocab::local_name(iri)
}

/// The graph for `kb`: asserted triples, plus inferred types when the
/// knowledge base has been materialized.
pub fn kb_to_graph(kb: &KnowledgeBase) -> TripleGraph {
    let mut g = kb_to_graph_asserted(kb);
    if kb.is_materialized() {
        for s in &kb.studies {
            for c in &s.inferred_classes {
                g.insert(Triple::typed(s.id.clone(), c));
            }
        }
        for (t, c) in &kb.inferred_types {
            g.insert(Triple::typed(t.clone(), c));
        }
    }
    g
}

/// The graph for `kb` without any inferred assertions.
pub fn kb_to_graph_asserted(kb: &KnowledgeBase) -> TripleGraph {
    let mut g = TripleGraph {
        prefixes: kb.prefixes.clone(),
        triples: BTreeSet::new(),
    };
    let mut e = Emitter { g: &mut g };
    for s in &kb.studies {
        if let Some(c) = &s.asserted_class {
            e.typed(&s.id, c);
        }
        for p in &s.participants {
            e.link(&s.id, prop::HAS_PARTICIPANT, &p.id);
            e.participant(p);
        }
        for o in &s.outcomes {
            e.link(&s.id, prop::HAS_OUTCOME, o);
        }
        for ph in &s.phases {
            e.link(&s.id, prop::HAS_PHASE, &ph.id);
            e.phase(ph);
        }
        for item in &s.mbd_items {
            e.link(&s.id, prop::HAS_MBD_ITEM, &item.id);
            if let Some(c) = &item.asserted_class {
                e.typed(&item.id, c);
            }
            if let Some(t) = &item.subject {
                e.link(&item.id, prop::HAS_PARTICIPANT, t);
            }
            if let Some(t) = &item.setting {
                e.link(&item.id, prop::HAS_SETTING, t);
            }
            if let Some(t) = &item.outcome {
                e.link(&item.id, prop::HAS_OUTCOME, t);
            }
            for ph in &item.phases {
                e.link(&item.id, prop::HAS_PHASE, &ph.id);
                e.phase(ph);
            }
        }
        if let Some(c) = &s.mbd_item_type {
            e.link(&s.id, prop::HAS_MBD_ITEM_TYPE, &Term::iri(c.clone()));
        }
        for r in &s.results {
            e.typed(&r.id, class::RESULT);
            e.link(&r.id, prop::HAS_VALUE, &Term::decimal(r.value));
            e.link(&r.id, prop::OCCURS_IN, &r.instant.id);
            e.link(&r.id, prop::IS_RESULT_OF_PHASE, &r.phase);
            if let Some(t) = &r.intervention_type {
                e.link(&r.id, prop::HAS_INTERVENTION_TYPE, t);
            }
            e.typed(&r.instant.id, class::INSTANT);
            e.link(&r.instant.id, prop::HAS_VALUE, &Term::integer(r.instant.index));
        }
    }
    for o in &kb.outcomes {
        if let Some(c) = &o.class_iri {
            e.typed(&o.id, c);
        }
        if let Some(f) = o.form {
            e.link(&o.id, prop::IN_FORM_OF, &Term::iri(f.iri()));
        }
    }
    g.triples.extend(kb.extra.iter().cloned());
    g
}

struct Emitter<'a> {
    g: &'a mut TripleGraph,
}

impl Emitter<'_> {
    fn typed(&mut self, s: &Term, c: &str) {
        self.g.insert(Triple::typed(s.clone(), c));
    }

    fn link(&mut self, s: &Term, p: &str, o: &Term) {
        self.g
            .insert(Triple::new(s.clone(), Term::iri(p), o.clone()));
    }

    fn phase(&mut self, ph: &Phase) {
        self.typed(&ph.id, ph.kind.class_iri());
        self.link(&ph.id, prop::HAS_POSITION, &Term::integer(ph.position));
        for t in &ph.intervention_types {
            self.link(&ph.id, prop::HAS_INTERVENTION_TYPE, t);
        }
    }

    fn participant(&mut self, p: &Participant) {
        self.typed(&p.id, class::PARTICIPANT);
        if let Some(c) = &p.condition {
            self.link(&p.id, prop::HAS_CONDITION, c);
        }
        if let Some(g) = &p.gender {
            self.link(&p.id, prop::HAS_GENDER, g);
        }
        for (pred, age) in [(prop::HAS_AGE, &p.age), (prop::DIAGNOSED_AT_AGE, &p.diagnosed_at_age)] {
            if let Some(a) = age {
                self.link(&p.id, pred, &a.id);
                self.typed(&a.id, class::AGE_DESCRIPTION);
                self.link(&a.id, prop::YEARS, &Term::integer(a.age.years.into()));
                if let Some(m) = a.age.months {
                    self.link(&a.id, prop::MONTHS, &Term::integer(m.into()));
                }
            }
        }
    }
}

/// Groups `kb`'s opaque triples by subject, for callers that want to look
/// up annotations the typed model does not cover.
pub fn extra_by_subject(kb: &KnowledgeBase) -> BTreeMap<&Term, Vec<&Triple>> {
    let mut m: BTreeMap<&Term, Vec<&Triple>> = BTreeMap::new();
    for t in &kb.extra {
        m.entry(&t.subject).or_default().push(t);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turtle::parse_turtle;
    use crate::vocab::core;

    fn load(src: &str) -> Result<KnowledgeBase, MappingError> {
        graph_to_kb(&parse_turtle(src).unwrap(), &Taxonomy::core())
    }

    #[test]
    fn empty_graph_gives_empty_kb() {
        let kb = load("").unwrap();
        assert!(kb.is_empty());
        assert!(kb_to_graph(&kb).is_empty());
    }

    #[test]
    fn non_integer_position_is_a_type_clash() {
        let err = load(
            "ssd:s ssd:hasPhase ssd:ph01, ssd:ph02 .\nssd:ph01 a ssd:BaselinePhase ; ssd:hasPosition 1 .\nssd:ph02 a ssd:SimpleInterventionPhase ; ssd:hasPosition \"two\" .",
        )
        .unwrap_err();
        assert_eq!(err.issues.len(), 1);
        assert_eq!(err.issues[0].kind, IssueKind::TypeClash);
        assert_eq!(err.issues[0].subject, Term::iri(core("ph02")));
    }

    #[test]
    fn dangling_result_phase() {
        let err = load(
            "ssd:s ssd:hasPhase ssd:ph01 .\nssd:ph01 a ssd:BaselinePhase ; ssd:hasPosition 1 .\nssd:r a ssd:Result ; ssd:hasValue 1.0 ; ssd:occursIn _:i ; ssd:isResultOfPhase ssd:ph09 .\n_:i ssd:hasValue 1 .",
        )
        .unwrap_err();
        assert_eq!(err.issues[0].kind, IssueKind::DanglingReference);
        assert_eq!(err.issues[0].subject, Term::iri(core("r")));
    }

    #[test]
    fn unknown_predicates_survive() {
        let src = "ssd:s ssd:hasPhase ssd:ph01 ; ssd:hasPublication <http://doi.org/x> .\nssd:ph01 a ssd:BaselinePhase ; ssd:hasPosition 1 .";
        let g = parse_turtle(src).unwrap();
        let kb = graph_to_kb(&g, &Taxonomy::core()).unwrap();
        assert_eq!(kb.extra.len(), 1);
        assert_eq!(kb_to_graph(&kb).triples, g.triples);
    }

    #[test]
    fn subclass_triples_extend_taxonomy() {
        let kb = load(
            "aut:ScriptingIntervention rdfs:subClassOf ssd:InterventionType .\naut:script1 a aut:ScriptingIntervention .",
        )
        .unwrap();
        assert!(kb
            .taxonomy
            .is_subclass_of(&crate::vocab::autism("ScriptingIntervention"), class::INTERVENTION_TYPE)
            .unwrap());
        assert_eq!(kb.extra.len(), 2);
    }

    #[test]
    fn subclass_cycle_is_reported() {
        let err = load("ssd:X rdfs:subClassOf ssd:Y .\nssd:Y rdfs:subClassOf ssd:X .").unwrap_err();
        assert_eq!(err.issues[0].kind, IssueKind::TaxonomyCycle);
    }

    #[test]
    fn shared_phase_is_a_conflict() {
        let err = load(
            "ssd:s1 ssd:hasPhase ssd:ph . ssd:s2 ssd:hasPhase ssd:ph .\nssd:ph a ssd:BaselinePhase ; ssd:hasPosition 1 .",
        )
        .unwrap_err();
        assert_eq!(err.issues[0].kind, IssueKind::Conflict);
    }

    #[test]
    fn bad_outcome_form() {
        let err = load("ssd:s ssd:hasOutcome ssd:o .\nssd:o ssd:inFormOf ssd:litres .").unwrap_err();
        assert_eq!(err.issues[0].kind, IssueKind::TypeClash);
    }
}
