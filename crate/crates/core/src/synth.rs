//! Deterministic synthetic corpora and knowledge-base statistics.
//!
//! Every study is drawn from its own ChaCha8 stream, seeded with
//! `splitmix64(profile.seed ^ splitmix64(index))`, so a study's content
//! depends only on the profile seed and its index. Result values are drawn
//! uniformly and rounded to one decimal:
//!
//! | phase        | range        |
//! |--------------|--------------|
//! | baseline     | [5.0, 15.0)  |
//! | intervention | [15.0, 30.0) |
//! | follow-up    | [12.0, 25.0) |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    AgeDescription, AgeNode, InstantNode, KnowledgeBase, MbdItem, Measurement, Outcome,
    OutcomeForm, Participant, Phase, PhaseKind, Study,
};
use crate::taxonomy::Taxonomy;
use crate::term::{Term, Triple};
use crate::turtle::{kb_to_graph, TripleGraph};
use crate::vocab::{self, autism, class, core, RDFS_LABEL, RDFS_SUBCLASS_OF, RDF_TYPE};
pub const BASELINE_RANGE: (f64, f64) = (5.0, 15.0);
pub const INTERVENTION_RANGE: (f64, f64) = (15.0, 30.0);
pub const FOLLOW_UP_RANGE: (f64, f64) = (12.0, 25.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DesignKind {
    Ab,
    Abab,
    AbabFollowUp,
    AcrossSetting,
    AcrossSubject,
    AcrossOutcome,
    AlternatingTreatment,
}

impl DesignKind {
    pub const ALL: [DesignKind; 7] = [
        DesignKind::Ab,
        DesignKind::Abab,
        DesignKind::AbabFollowUp,
        DesignKind::AcrossSetting,
        DesignKind::AcrossSubject,
        DesignKind::AcrossOutcome,
        DesignKind::AlternatingTreatment,
    ];

    /// The most specific class a study of this kind belongs to.
    pub fn class_iri(self) -> &'static str {
        match self {
            DesignKind::Ab => class::AB_DESIGN,
            DesignKind::Abab | DesignKind::AbabFollowUp => class::ABAB_DESIGN,
            DesignKind::AcrossSetting => class::ACROSS_SETTING_MBD,
            DesignKind::AcrossSubject => class::ACROSS_SUBJECT_MBD,
            DesignKind::AcrossOutcome => class::ACROSS_OUTCOME_MBD,
            DesignKind::AlternatingTreatment => class::ALTERNATING_TREATMENT_DESIGN,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            DesignKind::Ab => "ab",
            DesignKind::Abab => "abab",
            DesignKind::AbabFollowUp => "abab_f",
            DesignKind::AcrossSetting => "across_setting",
            DesignKind::AcrossSubject => "across_subject",
            DesignKind::AcrossOutcome => "across_outcome",
            DesignKind::AlternatingTreatment => "alternating",
        }
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Relative weights of the design kinds. Zero disables a kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignMix {
    pub ab: f64,
    pub abab: f64,
    pub abab_f: f64,
    pub across_setting: f64,
    pub across_subject: f64,
    pub across_outcome: f64,
    pub alternating: f64,
}

impl Default for DesignMix {
    fn default() -> Self {
        DesignMix {
            ab: 3.0,
            abab: 2.0,
            abab_f: 1.0,
            across_setting: 1.0,
            across_subject: 1.0,
            across_outcome: 1.0,
            alternating: 1.0,
        }
    }
}

impl DesignMix {
    pub fn weight(&self, kind: DesignKind) -> f64 {
        match kind {
            DesignKind::Ab => self.ab,
            DesignKind::Abab => self.abab,
            DesignKind::AbabFollowUp => self.abab_f,
            DesignKind::AcrossSetting => self.across_setting,
            DesignKind::AcrossSubject => self.across_subject,
            DesignKind::AcrossOutcome => self.across_outcome,
            DesignKind::AlternatingTreatment => self.alternating,
        }
    }

    /// A mix with a single kind.
    pub fn only(kind: DesignKind) -> Self {
        let mut m = DesignMix {
            ab: 0.0,
            abab: 0.0,
            abab_f: 0.0,
            across_setting: 0.0,
            across_subject: 0.0,
            across_outcome: 0.0,
            alternating: 0.0,
        };
        match kind {
            DesignKind::Ab => m.ab = 1.0,
            DesignKind::Abab => m.abab = 1.0,
            DesignKind::AbabFollowUp => m.abab_f = 1.0,
            DesignKind::AcrossSetting => m.across_setting = 1.0,
            DesignKind::AcrossSubject => m.across_subject = 1.0,
            DesignKind::AcrossOutcome => m.across_outcome = 1.0,
            DesignKind::AlternatingTreatment => m.alternating = 1.0,
        }
        m
    }
}

/// Generator settings. Ranges are inclusive `[min, max]` pairs.
///
/// As a TOML file, every key is optional:
///
/// ```toml
/// seed = 7
/// results_per_phase = [4, 7]
/// participants_per_study = [1, 2]
/// mbd_items = [2, 3]
/// intervention_pool = 12
/// outcome_pool = 8
/// asserted_class_ratio = 0.5
/// labels = true
///
/// [design_mix]
/// ab = 3
/// across_subject = 0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenProfile {
    pub seed: u64,
    pub design_mix: DesignMix,
    pub results_per_phase: (u32, u32),
    pub participants_per_study: (u32, u32),
    pub mbd_items: (u32, u32),
    pub intervention_pool: u32,
    pub outcome_pool: u32,
    /// Share of studies that also carry an asserted design class; the rest
    /// are left for the classifier.
    pub asserted_class_ratio: f64,
    /// Give every named study, phase, item, participant and result an
    /// `rdfs:label`, as annotation tools do.
    pub labels: bool,
}

impl Default for GenProfile {
    fn default() -> Self {
        GenProfile {
            seed: 42,
            design_mix: DesignMix::default(),
            results_per_phase: (4, 7),
            participants_per_study: (1, 2),
            mbd_items: (2, 3),
            intervention_pool: 12,
            outcome_pool: 8,
            asserted_class_ratio: 0.5,
            labels: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("invalid profile: {0}")]
    Invalid(String),
    #[error("cannot read profile {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed profile: {0}")]
    Toml(#[from] toml::de::Error),
}

impl GenProfile {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn from_toml(text: &str) -> Result<Self, ProfileError> {
        let p: GenProfile = toml::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ProfileError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let bad = |m: String| Err(ProfileError::Invalid(m));
        let weights = DesignKind::ALL.map(|k| self.design_mix.weight(k));
        if let Some(k) = DesignKind::ALL
            .iter()
            .find(|k| !(self.design_mix.weight(**k) >= 0.0 && self.design_mix.weight(**k).is_finite()))
        {
            return bad(format!("weight for {k} must be a non-negative number"));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return bad("at least one design weight must be positive".into());
        }
        for (name, (lo, hi), min) in [
            ("results_per_phase", self.results_per_phase, 1),
            ("participants_per_study", self.participants_per_study, 1),
            ("mbd_items", self.mbd_items, 2),
        ] {
            if lo > hi {
                return bad(format!("{name} range [{lo}, {hi}] is empty"));
            }
            if lo < min {
                return bad(format!("{name} must start at {min} or more"));
            }
        }
        if self.intervention_pool < 2 {
            return bad("intervention_pool needs at least 2 entries".into());
        }
        if self.outcome_pool < 1 {
            return bad("outcome_pool needs at least 1 entry".into());
        }
        if self.outcome_pool < self.mbd_items.1 && self.design_mix.across_outcome > 0.0 {
            return bad(format!(
                "across-outcome studies need outcome_pool >= {} (the largest item count)",
                self.mbd_items.1
            ));
        }
        if self.mbd_items.1 as usize > SETTINGS.len() && self.design_mix.across_setting > 0.0 {
            return bad(format!("across-setting studies support at most {} items", SETTINGS.len()));
        }
        if !(0.0..=1.0).contains(&self.asserted_class_ratio) {
            return bad("asserted_class_ratio must lie in [0, 1]".into());
        }
        Ok(())
    }
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn study_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

const CONDITIONS: &[(&str, u32)] = &[("autism", 6), ("adhd", 2), ("downSyndrome", 1), ("intellectualDisability", 1)];
const GENDERS: &[&str] = &["female", "male"];
const SETTINGS: &[&str] = &["home", "school", "playground", "clinic", "classroom", "community"];

/// Intervention classes the pool cycles through; the autism-extension ones
/// that are not in the core taxonomy come with their superclass.
const INTERVENTION_CLASSES: &[(&str, &str)] = &[
    ("Peer-mediatedIntervention", ""),
    ("VideoModeling", class::INTERVENTION_TYPE),
    ("PeerTutoring", class::PEER_MEDIATED_INTERVENTION),
    ("Prompting", class::INTERVENTION_TYPE),
];

fn intervention(i: usize) -> (Term, String) {
    let id = if i == 0 {
        autism("weekendInterview")
    } else {
        autism(&format!("intervention{:02}", i + 1))
    };
    (Term::iri(id), autism(INTERVENTION_CLASSES[i % INTERVENTION_CLASSES.len()].0))
}

fn outcome(i: usize) -> Outcome {
    let id = if i == 0 {
        autism("correct_answers_wh")
    } else {
        autism(&format!("outcome{:02}", i + 1))
    };
    let class_iri = if i % 3 == 2 {
        class::OUTCOME.to_string()
    } else {
        class::COMMUNICATION_OUTCOME.to_string()
    };
    Outcome {
        id: Term::iri(id),
        class_iri: Some(class_iri),
        form: Some(OutcomeForm::ALL[i % OutcomeForm::ALL.len()]),
    }
}

/// `n` studies drawn from `profile`.
pub fn generate_studies(n: usize, profile: &GenProfile) -> Result<KnowledgeBase, ProfileError> {
    generate_labelled(n, profile).map(|(kb, _)| kb)
}

/// Like [`generate_studies`], also returning the kind sampled for each
/// study, in study order.
pub fn generate_labelled(
    n: usize,
    profile: &GenProfile,
) -> Result<(KnowledgeBase, Vec<DesignKind>), ProfileError> {
    profile.validate()?;
    let weights: Vec<f64> = DesignKind::ALL.iter().map(|k| profile.design_mix.weight(*k)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| ProfileError::Invalid(e.to_string()))?;
    let width = n.to_string().len().max(4);

    let mut kb = KnowledgeBase::new(Taxonomy::core());
    let mut used_interventions = BTreeSet::new();
    let mut used_outcomes = BTreeSet::new();
    let mut kinds = Vec::with_capacity(n);
    let mut labels = Vec::new();
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(study_seed(profile.seed, i));
        let kind = DesignKind::ALL[dist.sample(&mut rng)];
        let mut g = StudyGen {
            rng,
            profile,
            prefix: format!("ssd{:0width$}", i + 1),
            used_interventions: &mut used_interventions,
            used_outcomes: &mut used_outcomes,
        };
        let study = g.study(kind);
        if profile.labels {
            labels.extend(label_triples(&study));
        }
        kb.studies.push(study);
        kinds.push(kind);
    }

    let mut extra: BTreeSet<Triple> = labels.into_iter().collect();
    let mut subclass_added = BTreeSet::new();
    for i in used_interventions {
        let (id, cls) = intervention(i);
        let (local, parent) = INTERVENTION_CLASSES[i % INTERVENTION_CLASSES.len()];
        if !parent.is_empty() && subclass_added.insert(local) {
            kb.taxonomy
                .add_class(&cls, [parent])
                .expect("generator classes form a tree under the core taxonomy");
            extra.insert(Triple::new(
                Term::iri(cls.clone()),
                Term::iri(RDFS_SUBCLASS_OF),
                Term::iri(parent),
            ));
        }
        extra.insert(Triple::typed(id, &cls));
    }
    kb.extra = extra.into_iter().collect();
    kb.outcomes = used_outcomes.into_iter().map(outcome).collect();
    Ok((kb, kinds))
}

fn label_triples(s: &Study) -> Vec<Triple> {
    let ids = std::iter::once(&s.id)
        .chain(s.participants.iter().map(|p| &p.id))
        .chain(s.mbd_items.iter().map(|i| &i.id))
        .chain(s.all_phases().map(|p| &p.id))
        .chain(s.results.iter().map(|r| &r.id));
    ids.map(|id| Triple::new(id.clone(), Term::iri(RDFS_LABEL), Term::string(id.label())))
        .collect()
}

struct StudyGen<'a> {
    rng: ChaCha8Rng,
    profile: &'a GenProfile,
    prefix: String,
    used_interventions: &'a mut BTreeSet<usize>,
    used_outcomes: &'a mut BTreeSet<usize>,
}

impl StudyGen<'_> {
    fn id(&self, suffix: &str) -> Term {
        Term::iri(core(&format!("{}_{suffix}", self.prefix)))
    }

    fn range(&mut self, (lo, hi): (u32, u32)) -> u32 {
        self.rng.gen_range(lo..=hi)
    }

    fn pick_intervention(&mut self) -> Term {
        let i = self.rng.gen_range(0..self.profile.intervention_pool as usize);
        self.used_interventions.insert(i);
        intervention(i).0
    }

    fn pick_outcomes(&mut self, k: usize) -> Vec<Term> {
        let pool: Vec<usize> = (0..self.profile.outcome_pool as usize).collect();
        let mut chosen: Vec<usize> = pool.choose_multiple(&mut self.rng, k).copied().collect();
        chosen.sort_unstable();
        self.used_outcomes.extend(chosen.iter().copied());
        chosen.into_iter().map(|i| outcome(i).id).collect()
    }

    fn participant(&mut self, n: usize) -> Participant {
        let mut p = Participant::new(self.id(&format!("p{n}")));
        let weights: Vec<u32> = CONDITIONS.iter().map(|c| c.1).collect();
        let c = WeightedIndex::new(&weights).unwrap().sample(&mut self.rng);
        p.condition = Some(Term::iri(core(CONDITIONS[c].0)));
        p.gender = Some(Term::iri(core(GENDERS.choose(&mut self.rng).unwrap())));
        let years = self.rng.gen_range(2..=16);
        let age = if self.rng.gen_bool(0.5) {
            AgeDescription::years_months(years, self.rng.gen_range(0..=11))
        } else {
            AgeDescription::years(years)
        };
        p.age = Some(AgeNode {
            id: Term::blank(format!("{}_p{n}_age", self.prefix)),
            age,
        });
        if self.rng.gen_bool(0.5) {
            p.diagnosed_at_age = Some(AgeNode {
                id: Term::blank(format!("{}_p{n}_diag", self.prefix)),
                age: AgeDescription::years(self.rng.gen_range(1..=years)),
            });
        }
        p
    }

    /// Phases for `kinds` under `owner`, with their measurements appended
    /// to `results`. `extra_baseline` staggers the baseline of MBD items.
    fn phases(
        &mut self,
        owner: &str,
        kinds: &[PhaseKind],
        extra_baseline: u32,
        results: &mut Vec<Measurement>,
    ) -> Vec<Phase> {
        let treatment = self.pick_intervention();
        let mut instant = 0;
        let mut phases = Vec::new();
        for (i, kind) in kinds.iter().enumerate() {
            let id = self.id(&format!("{owner}ph{:02}", i + 1));
            let types = match kind {
                PhaseKind::SimpleIntervention => vec![treatment.clone()],
                PhaseKind::AlternatingIntervention => {
                    let mut ts = vec![treatment.clone()];
                    while ts.len() < 2 || (ts.len() < 3 && self.rng.gen_bool(0.3)) {
                        let t = self.pick_intervention();
                        if !ts.contains(&t) {
                            ts.push(t);
                        }
                    }
                    ts.sort();
                    ts
                }
                _ => Vec::new(),
            };
            let mut count = self.range(self.profile.results_per_phase);
            if *kind == PhaseKind::Baseline {
                count += extra_baseline;
            }
            let (lo, hi) = match kind {
                PhaseKind::Baseline => BASELINE_RANGE,
                PhaseKind::FollowUp => FOLLOW_UP_RANGE,
                _ => INTERVENTION_RANGE,
            };
            for k in 0..count {
                instant += 1;
                let n = results.len() + 1;
                let value = (self.rng.gen_range(lo..hi) * 10.0).round() / 10.0;
                results.push(Measurement {
                    id: self.id(&format!("res{n:03}")),
                    value,
                    instant: InstantNode {
                        id: Term::blank(format!("{}_i{n:03}", self.prefix)),
                        index: instant,
                    },
                    phase: id.clone(),
                    intervention_type: (!types.is_empty())
                        .then(|| types[k as usize % types.len()].clone()),
                });
            }
            phases.push(Phase::new(id, *kind, i as i64 + 1).with_interventions(types));
        }
        phases
    }

    fn study(&mut self, kind: DesignKind) -> Study {
        use PhaseKind::{AlternatingIntervention as A, Baseline as B, FollowUp as F, SimpleIntervention as I};
        let mut s = Study::new(Term::iri(core(&self.prefix)));
        let mut results = Vec::new();
        let n_participants = self.range(self.profile.participants_per_study) as usize;
        let n_items = self.range(self.profile.mbd_items) as usize;

        let signature: Option<&[PhaseKind]> = match kind {
            DesignKind::Ab => Some(&[B, I]),
            DesignKind::Abab => Some(&[B, I, B, I]),
            DesignKind::AbabFollowUp => Some(&[B, I, B, I, F]),
            DesignKind::AlternatingTreatment => Some(&[B, A]),
            _ => None,
        };
        match signature {
            Some(sig) => {
                s.participants = (1..=n_participants).map(|n| self.participant(n)).collect();
                s.outcomes = self.pick_outcomes(1);
                s.phases = self.phases("", sig, 0, &mut results);
            }
            None => {
                let subjects = if kind == DesignKind::AcrossSubject {
                    n_items.max(n_participants)
                } else {
                    n_participants
                };
                s.participants = (1..=subjects).map(|n| self.participant(n)).collect();
                s.outcomes = self.pick_outcomes(if kind == DesignKind::AcrossOutcome { n_items } else { 1 });
                let mut settings = SETTINGS.choose_multiple(&mut self.rng, n_items).copied().collect::<Vec<_>>().into_iter();
                s.mbd_item_type = Some(class::SIMPLE_DESIGN.to_string());
                for k in 0..n_items {
                    let mut item = MbdItem::new(self.id(&format!("it{}", k + 1)));
                    match kind {
                        DesignKind::AcrossSetting => item.setting = settings.next().map(|name| Term::iri(core(name))),
                        DesignKind::AcrossSubject => item.subject = Some(s.participants[k].id.clone()),
                        _ => item.outcome = Some(s.outcomes[k].clone()),
                    }
                    item.phases = self.phases(&format!("it{}_", k + 1), &[B, I], 2 * k as u32, &mut results);
                    s.mbd_items.push(item);
                }
            }
        }
        s.results = results;
        if self.rng.gen_bool(self.profile.asserted_class_ratio) {
            s.asserted_class = Some(kind.class_iri().to_string());
        }
        s
    }
}

/// Size figures for a knowledge base.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KbStats {
    pub study_count: usize,
    pub triple_count: usize,
    pub individual_count: usize,
    /// Individuals per asserted `rdf:type`, keyed by class IRI.
    pub per_class_counts: BTreeMap<String, usize>,
}

impl KbStats {
    pub fn add(&self, other: &KbStats) -> KbStats {
        let mut per_class = self.per_class_counts.clone();
        for (c, n) in &other.per_class_counts {
            *per_class.entry(c.clone()).or_default() += n;
        }
        KbStats {
            study_count: self.study_count + other.study_count,
            triple_count: self.triple_count + other.triple_count,
            individual_count: self.individual_count + other.individual_count,
            per_class_counts: per_class,
        }
    }
}

impl fmt::Display for KbStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "studies\t{}", self.study_count)?;
        writeln!(f, "triples\t{}", self.triple_count)?;
        writeln!(f, "individuals\t{}", self.individual_count)?;
        for (c, n) in &self.per_class_counts {
            let name = vocab::compact(c, &vocab::default_prefixes()).unwrap_or_else(|| format!("<{c}>"));
            writeln!(f, "class {name}\t{n}")?;
        }
        Ok(())
    }
}

/// Counts over the graph of `kb` (see [`kb_to_graph`]).
///
/// Triples stand in for axioms. Individuals are the IRIs and blank nodes in
/// subject or object position that are not classes, where a class is
/// anything in the taxonomy, any `rdf:type` object, and anything related by
/// `rdfs:subClassOf`.
pub fn kb_stats(kb: &KnowledgeBase) -> KbStats {
    let graph = kb_to_graph(kb);
    let mut stats = graph_stats(&graph, &kb.taxonomy);
    stats.study_count = kb.studies.len();
    stats
}

/// [`kb_stats`] without the study count, for raw graphs.
pub fn graph_stats(graph: &TripleGraph, taxonomy: &Taxonomy) -> KbStats {
    let mut classes: BTreeSet<&Term> = BTreeSet::new();
    for t in &graph.triples {
        match t.predicate.as_iri() {
            Some(RDF_TYPE) => {
                classes.insert(&t.object);
            }
            Some(RDFS_SUBCLASS_OF) => {
                classes.insert(&t.subject);
                classes.insert(&t.object);
            }
            _ => {}
        }
    }
    let is_class = |t: &Term| classes.contains(t) || t.as_iri().is_some_and(|i| taxonomy.contains(i));
    let mut individuals: BTreeSet<&Term> = BTreeSet::new();
    for t in &graph.triples {
        for term in [&t.subject, &t.object] {
            if !term.is_literal() && !is_class(term) {
                individuals.insert(term);
            }
        }
    }
    let mut per_class: BTreeMap<String, usize> = BTreeMap::new();
    for t in &graph.triples {
        if t.predicate.as_iri() == Some(RDF_TYPE) && individuals.contains(&t.subject) {
            if let Some(c) = t.object.as_iri() {
                *per_class.entry(c.to_string()).or_default() += 1;
            }
        }
    }
    KbStats {
        study_count: 0,
        triple_count: graph.len(),
        individual_count: individuals.len(),
        per_class_counts: per_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify_design;
    use crate::validate::validate_study;

    #[test]
    fn zero_studies_is_empty() {
        let kb = generate_studies(0, &GenProfile::default()).unwrap();
        assert!(kb.is_empty());
        assert_eq!(kb_stats(&kb), KbStats::default());
    }

    #[test]
    fn same_seed_same_kb() {
        let p = GenProfile::default().with_seed(9);
        assert_eq!(generate_studies(20, &p).unwrap(), generate_studies(20, &p).unwrap());
        assert_ne!(
            generate_studies(20, &p).unwrap(),
            generate_studies(20, &p.clone().with_seed(10)).unwrap()
        );
    }

    #[test]
    fn prefix_of_larger_run_is_stable() {
        let p = GenProfile::default();
        let small = generate_studies(5, &p).unwrap();
        let large = generate_studies(50, &p).unwrap();
        assert_eq!(small.studies[..], large.studies[..5]);
    }

    #[test]
    fn every_kind_is_valid_and_classifies() {
        for kind in DesignKind::ALL {
            let p = GenProfile {
                design_mix: DesignMix::only(kind),
                ..GenProfile::default()
            };
            let (kb, kinds) = generate_labelled(25, &p).unwrap();
            assert!(kinds.iter().all(|k| *k == kind));
            for s in &kb.studies {
                assert_eq!(validate_study(s, &kb.taxonomy), [], "{kind} {}", s.id);
                let c = classify_design(s, &kb.taxonomy).unwrap();
                assert_eq!(c.classes, kb.taxonomy.ancestors(kind.class_iri()), "{kind}");
            }
        }
    }

    #[test]
    fn profile_validation() {
        let mut p = GenProfile {
            design_mix: DesignMix::only(DesignKind::Ab),
            ..GenProfile::default()
        };
        p.design_mix.ab = 0.0;
        assert!(p.validate().is_err());
        let p = GenProfile {
            results_per_phase: (5, 4),
            ..GenProfile::default()
        };
        assert!(p.validate().is_err());
        let p = GenProfile {
            outcome_pool: 1,
            ..GenProfile::default()
        };
        assert!(p.validate().is_err());
        let mut p = GenProfile::default();
        p.design_mix.alternating = -1.0;
        assert!(p.validate().is_err());
        let p = GenProfile {
            mbd_items: (2, 7),
            outcome_pool: 12,
            ..GenProfile::default()
        };
        assert!(p.validate().is_err());
        let p = GenProfile {
            design_mix: DesignMix::only(DesignKind::AcrossSubject),
            ..p
        };
        assert!(p.validate().is_ok());
    }

    #[test]
    fn toml_profile() {
        let p = GenProfile::from_toml("seed = 3\nresults_per_phase = [2, 2]\n[design_mix]\nab = 0\n").unwrap();
        assert_eq!(p.seed, 3);
        assert_eq!(p.results_per_phase, (2, 2));
        assert_eq!(p.design_mix.ab, 0.0);
        assert_eq!(p.design_mix.abab, 2.0);
        assert!(GenProfile::from_toml("sede = 3").is_err());
        assert!(GenProfile::from_toml("[design_mix]\nab = 0\nabab = 0\nabab_f = 0\nacross_setting = 0\nacross_subject = 0\nacross_outcome = 0\nalternating = 0").is_err());
    }

    #[test]
    fn values_follow_phase_ranges() {
        let kb = generate_studies(30, &GenProfile::default()).unwrap();
        for s in &kb.studies {
            for r in &s.results {
                let kind = s.phase(&r.phase).unwrap().kind;
                let (lo, hi) = match kind {
                    PhaseKind::Baseline => BASELINE_RANGE,
                    PhaseKind::FollowUp => FOLLOW_UP_RANGE,
                    _ => INTERVENTION_RANGE,
                };
                assert!(r.value >= lo && r.value <= hi, "{} {}", r.id, r.value);
            }
        }
    }
}
