//! Typed model of single-subject design studies.

use std::collections::BTreeSet;
use std::fmt;

use crate::taxonomy::Taxonomy;
use crate::term::{Term, Triple};
use crate::vocab::{self, class, form, PrefixTable};

/// Age given in whole years plus optional extra months.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgeDescription {
    pub years: u32,
    pub months: Option<u32>,
}

impl AgeDescription {
    pub fn years(years: u32) -> Self {
        AgeDescription {
            years,
            months: None,
        }
    }

    pub fn years_months(years: u32, months: u32) -> Self {
        AgeDescription {
            years,
            months: Some(months),
        }
    }

    /// Total age in months; missing months count as zero.
    pub fn in_months(&self) -> u32 {
        self.years * 12 + self.months.unwrap_or(0)
    }
}

/// Free-function form of [`AgeDescription::in_months`].
pub fn age_in_months(age: &AgeDescription) -> u32 {
    age.in_months()
}

/// An age together with the graph node that carries it.
#[derive(Debug, Clone, PartialEq)]
pub struct AgeNode {
    pub id: Term,
    pub age: AgeDescription,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Participant {
    pub id: Term,
    pub condition: Option<Term>,
    pub gender: Option<Term>,
    pub age: Option<AgeNode>,
    pub diagnosed_at_age: Option<AgeNode>,
}

impl Participant {
    pub fn new(id: Term) -> Self {
        Participant {
            id,
            condition: None,
            gender: None,
            age: None,
            diagnosed_at_age: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhaseKind {
    Baseline,
    SimpleIntervention,
    AlternatingIntervention,
    FollowUp,
}

impl PhaseKind {
    pub const ALL: [PhaseKind; 4] = [
        PhaseKind::Baseline,
        PhaseKind::SimpleIntervention,
        PhaseKind::AlternatingIntervention,
        PhaseKind::FollowUp,
    ];

    pub fn class_iri(self) -> &'static str {
        match self {
            PhaseKind::Baseline => class::BASELINE_PHASE,
            PhaseKind::SimpleIntervention => class::SIMPLE_INTERVENTION_PHASE,
            PhaseKind::AlternatingIntervention => class::ALTERNATING_INTERVENTION_PHASE,
            PhaseKind::FollowUp => class::FOLLOW_UP_PHASE,
        }
    }

    /// Signature letter: B, I, A or F.
    pub fn symbol(self) -> char {
        match self {
            PhaseKind::Baseline => 'B',
            PhaseKind::SimpleIntervention => 'I',
            PhaseKind::AlternatingIntervention => 'A',
            PhaseKind::FollowUp => 'F',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        PhaseKind::ALL.into_iter().find(|k| k.symbol() == c)
    }

    pub fn is_intervention(self) -> bool {
        matches!(
            self,
            PhaseKind::SimpleIntervention | PhaseKind::AlternatingIntervention
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    pub id: Term,
    pub kind: PhaseKind,
    /// 1-based.
    pub position: i64,
    pub intervention_types: Vec<Term>,
}

impl Phase {
    pub fn new(id: Term, kind: PhaseKind, position: i64) -> Self {
        Phase {
            id,
            kind,
            position,
            intervention_types: Vec::new(),
        }
    }

    pub fn with_interventions(mut self, types: impl IntoIterator<Item = Term>) -> Self {
        self.intervention_types.extend(types);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeForm {
    Percentage,
    Magnitude,
    Duration,
    Frequency,
    Interval,
}

impl OutcomeForm {
    pub const ALL: [OutcomeForm; 5] = [
        OutcomeForm::Percentage,
        OutcomeForm::Magnitude,
        OutcomeForm::Duration,
        OutcomeForm::Frequency,
        OutcomeForm::Interval,
    ];

    pub fn iri(self) -> &'static str {
        match self {
            OutcomeForm::Percentage => form::PERCENTAGE,
            OutcomeForm::Magnitude => form::MAGNITUDE,
            OutcomeForm::Duration => form::DURATION,
            OutcomeForm::Frequency => form::FREQUENCY,
            OutcomeForm::Interval => form::INTERVAL,
        }
    }

    pub fn from_iri(iri: &str) -> Option<Self> {
        OutcomeForm::ALL.into_iter().find(|f| f.iri() == iri)
    }
}

/// The dependent variable of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: Term,
    /// Most specific asserted class, e.g. `aut:CommunicationOutcome`.
    pub class_iri: Option<String>,
    pub form: Option<OutcomeForm>,
}

/// Session index of a measurement plus the node that carries it.
#[derive(Debug, Clone, PartialEq)]
pub struct InstantNode {
    pub id: Term,
    pub index: i64,
}

/// One measurement taken during a study.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub id: Term,
    pub value: f64,
    pub instant: InstantNode,
    pub phase: Term,
    pub intervention_type: Option<Term>,
}

/// One parallel substudy of a multiple-baseline design.
#[derive(Debug, Clone, PartialEq)]
pub struct MbdItem {
    pub id: Term,
    pub asserted_class: Option<String>,
    pub subject: Option<Term>,
    pub setting: Option<Term>,
    pub outcome: Option<Term>,
    pub phases: Vec<Phase>,
}

impl MbdItem {
    pub fn new(id: Term) -> Self {
        MbdItem {
            id,
            asserted_class: None,
            subject: None,
            setting: None,
            outcome: None,
            phases: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub id: Term,
    pub participants: Vec<Participant>,
    pub outcomes: Vec<Term>,
    /// Empty for multiple-baseline studies.
    pub phases: Vec<Phase>,
    /// Empty for everything but multiple-baseline studies.
    pub mbd_items: Vec<MbdItem>,
    pub mbd_item_type: Option<String>,
    pub asserted_class: Option<String>,
    pub inferred_classes: BTreeSet<String>,
    pub results: Vec<Measurement>,
}

impl Study {
    pub fn new(id: Term) -> Self {
        Study {
            id,
            participants: Vec::new(),
            outcomes: Vec::new(),
            phases: Vec::new(),
            mbd_items: Vec::new(),
            mbd_item_type: None,
            asserted_class: None,
            inferred_classes: BTreeSet::new(),
            results: Vec::new(),
        }
    }

    pub fn is_mbd(&self) -> bool {
        !self.mbd_items.is_empty()
    }

    /// Phases of the study and of all of its substudies.
    pub fn all_phases(&self) -> impl Iterator<Item = &Phase> {
        self.phases
            .iter()
            .chain(self.mbd_items.iter().flat_map(|i| i.phases.iter()))
    }

    pub fn phase(&self, id: &Term) -> Option<&Phase> {
        self.all_phases().find(|p| &p.id == id)
    }

    /// Asserted plus inferred design classes.
    pub fn design_classes(&self) -> BTreeSet<String> {
        let mut out = self.inferred_classes.clone();
        out.extend(self.asserted_class.iter().cloned());
        out
    }
}

/// A collection of annotated studies over a taxonomy.
///
/// Triples that the typed model does not interpret are kept verbatim in
/// `extra` so they stay queryable and survive round trips.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase {
    pub taxonomy: Taxonomy,
    pub prefixes: PrefixTable,
    pub studies: Vec<Study>,
    pub outcomes: Vec<Outcome>,
    pub extra: Vec<Triple>,
    /// Inferred `rdf:type` assertions for individuals other than studies.
    pub inferred_types: BTreeSet<(Term, String)>,
    pub(crate) materialized: bool,
}

impl KnowledgeBase {
    pub fn new(taxonomy: Taxonomy) -> Self {
        KnowledgeBase {
            taxonomy,
            prefixes: vocab::default_prefixes(),
            studies: Vec::new(),
            outcomes: Vec::new(),
            extra: Vec::new(),
            inferred_types: BTreeSet::new(),
            materialized: false,
        }
    }

    pub fn is_materialized(&self) -> bool {
        self.materialized
    }

    pub fn is_empty(&self) -> bool {
        self.studies.is_empty() && self.outcomes.is_empty() && self.extra.is_empty()
    }

    pub fn study(&self, id: &Term) -> Option<&Study> {
        self.studies.iter().find(|s| &s.id == id)
    }

    /// Copy with blank nodes relabelled `_:c1, _:c2, …` in the order they are
    /// met while walking the typed content. Two knowledge bases that differ
    /// only in blank-node labels have equal canonical forms.
    pub fn with_canonical_blank_labels(&self) -> KnowledgeBase {
        let mut kb = self.clone();
        let mut relabel = BlankRelabeler::default();
        for study in &mut kb.studies {
            relabel.term(&mut study.id);
            for p in &mut study.participants {
                relabel.participant(p);
            }
            study.outcomes.iter_mut().for_each(|t| relabel.term(t));
            for phase in &mut study.phases {
                relabel.phase(phase);
            }
            for item in &mut study.mbd_items {
                relabel.term(&mut item.id);
                for t in [&mut item.subject, &mut item.setting, &mut item.outcome]
                    .into_iter()
                    .flatten()
                {
                    relabel.term(t);
                }
                for phase in &mut item.phases {
                    relabel.phase(phase);
                }
            }
            for r in &mut study.results {
                relabel.term(&mut r.id);
                relabel.term(&mut r.instant.id);
                relabel.term(&mut r.phase);
                if let Some(t) = &mut r.intervention_type {
                    relabel.term(t);
                }
            }
        }
        for o in &mut kb.outcomes {
            relabel.term(&mut o.id);
        }
        for t in &mut kb.extra {
            relabel.term(&mut t.subject);
            relabel.term(&mut t.object);
        }
        kb.extra.sort();
        kb.inferred_types = std::mem::take(&mut kb.inferred_types)
            .into_iter()
            .map(|(mut t, c)| {
                relabel.term(&mut t);
                (t, c)
            })
            .collect();
        kb
    }
}

#[derive(Default)]
struct BlankRelabeler {
    map: std::collections::HashMap<String, String>,
}

impl BlankRelabeler {
    fn term(&mut self, t: &mut Term) {
        if let Term::Blank(label) = t {
            let next = self.map.len() + 1;
            let new = self
                .map
                .entry(label.clone())
                .or_insert_with(|| format!("c{next}"))
                .clone();
            *label = new;
        }
    }

    fn phase(&mut self, p: &mut Phase) {
        self.term(&mut p.id);
        p.intervention_types.iter_mut().for_each(|t| self.term(t));
    }

    fn participant(&mut self, p: &mut Participant) {
        self.term(&mut p.id);
        for t in [&mut p.condition, &mut p.gender].into_iter().flatten() {
            self.term(t);
        }
        for a in [&mut p.age, &mut p.diagnosed_at_age].into_iter().flatten() {
            self.term(&mut a.id);
        }
    }
}

impl fmt::Display for PhaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(vocab::local_name(self.class_iri()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ages_in_months() {
        assert_eq!(age_in_months(&AgeDescription::years_months(7, 4)), 88);
        assert_eq!(age_in_months(&AgeDescription::years(3)), 36);
        assert_eq!(age_in_months(&AgeDescription::years_months(0, 0)), 0);
    }

    #[test]
    fn phase_symbols_round_trip() {
        for k in PhaseKind::ALL {
            assert_eq!(PhaseKind::from_symbol(k.symbol()), Some(k));
        }
        assert_eq!(PhaseKind::from_symbol('X'), None);
    }

    #[test]
    fn canonical_labels_ignore_original_names() {
        let mut a = KnowledgeBase::new(Taxonomy::core());
        let mut s = Study::new(Term::iri(vocab::core("s")));
        let mut p = Participant::new(Term::iri(vocab::core("p")));
        p.age = Some(AgeNode {
            id: Term::blank("zz"),
            age: AgeDescription::years(4),
        });
        s.participants.push(p);
        a.studies.push(s);
        let mut b = a.clone();
        b.studies[0].participants[0].age.as_mut().unwrap().id = Term::blank("q9");
        assert_ne!(a, b);
        assert_eq!(a.with_canonical_blank_labels(), b.with_canonical_blank_labels());
    }
}
