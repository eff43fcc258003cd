//! Structural classification of studies into design classes.
//!
//! A non-MBD study is reduced to its phase signature, a word over
//! `{B, I, A, F}` in position order, which is then matched against the
//! design pattern table. Multiple-baseline studies are classified by the one
//! dimension (outcome, setting or subject) in which their substudies differ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{KnowledgeBase, Phase, PhaseKind, Study};
use crate::taxonomy::Taxonomy;
use crate::term::{Term, Triple};
use crate::turtle::mapping;
use crate::validate::{validate_study, Violation, ViolationCode};
use crate::vocab::{self, class};

use PhaseKind::{AlternatingIntervention as A, Baseline as B, FollowUp as F, SimpleIntervention as I};

/// Phase kinds in position order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PhaseSignature(Vec<PhaseKind>);

impl PhaseSignature {
    pub fn new(kinds: Vec<PhaseKind>) -> Self {
        PhaseSignature(kinds)
    }

    pub fn of_phases(phases: &[Phase]) -> Self {
        let mut ordered: Vec<&Phase> = phases.iter().collect();
        ordered.sort_by(|a, b| a.position.cmp(&b.position).then_with(|| a.id.cmp(&b.id)));
        PhaseSignature(ordered.into_iter().map(|p| p.kind).collect())
    }

    pub fn kinds(&self) -> &[PhaseKind] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The signature without one trailing follow-up phase.
    fn core(&self) -> &[PhaseKind] {
        match self.0.split_last() {
            Some((F, rest)) => rest,
            _ => &self.0,
        }
    }

    /// True when the follow-up symbol appears only as the last letter.
    pub fn follow_up_only_final(&self) -> bool {
        !self.core().contains(&F)
    }
}

impl fmt::Display for PhaseSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|k| write!(f, "{}", k.symbol()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid phase symbol {0:?}, expected one of B, I, A, F")]
pub struct SignatureParseError(pub char);

impl FromStr for PhaseSignature {
    type Err = SignatureParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| PhaseKind::from_symbol(c).ok_or(SignatureParseError(c)))
            .collect::<Result<_, _>>()
            .map(PhaseSignature)
    }
}

/// Predicate over a phase signature.
pub type SignaturePredicate = fn(&PhaseSignature) -> bool;

/// Design class to the signature predicate that defines it.
pub const DESIGN_PATTERNS: &[(&str, SignaturePredicate)] = &[
    (class::AB_DESIGN, is_ab),
    (class::ABAB_DESIGN, is_abab),
    (class::SIMPLE_DESIGN, is_simple),
    (class::WITHDRAWAL_DESIGN, is_withdrawal),
    (class::ALTERNATING_TREATMENT_DESIGN, is_alternating_treatment),
];

fn valid(sig: &PhaseSignature) -> bool {
    sig.follow_up_only_final()
}

/// `B I`, optionally followed by `F`.
pub fn is_ab(sig: &PhaseSignature) -> bool {
    valid(sig) && sig.core() == [B, I]
}

/// `B I B I`, optionally followed by `F`.
pub fn is_abab(sig: &PhaseSignature) -> bool {
    valid(sig) && sig.core() == [B, I, B, I]
}

/// `B` then one uninterrupted run of simple intervention phases.
pub fn is_simple(sig: &PhaseSignature) -> bool {
    let core = sig.core();
    valid(sig) && core.len() >= 2 && core[0] == B && core[1..].iter().all(|k| *k == I)
}

/// `B (I B)+ I?`, optionally followed by `F`: treatment is withdrawn at
/// least once.
pub fn is_withdrawal(sig: &PhaseSignature) -> bool {
    let core = sig.core();
    valid(sig)
        && core.len() >= 3
        && core
            .iter()
            .enumerate()
            .all(|(i, k)| *k == if i % 2 == 0 { B } else { I })
}

/// `B A`, optionally followed by `F`.
pub fn is_alternating_treatment(sig: &PhaseSignature) -> bool {
    valid(sig) && sig.core() == [B, A]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("study {study} fails validation: {}", first_violation(.violations))]
    Invalid { study: Term, violations: Vec<Violation> },
    #[error("study {0} is a multiple-baseline design; signatures apply per item")]
    MultipleBaseline(Term),
}

fn first_violation(v: &[Violation]) -> String {
    v.first().map(Violation::to_string).unwrap_or_default()
}

/// Signature of a non-MBD study.
pub fn phase_signature(study: &Study) -> Result<PhaseSignature, ClassifyError> {
    if study.is_mbd() {
        return Err(ClassifyError::MultipleBaseline(study.id.clone()));
    }
    Ok(PhaseSignature::of_phases(&study.phases))
}

/// Outcome of classifying one study.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// Satisfied design classes, closed under superclasses.
    pub classes: BTreeSet<String>,
    /// Non-fatal findings such as [`ViolationCode::NoDesignPattern`].
    pub warnings: Vec<Violation>,
}

/// Design classes a valid study satisfies, closed upward in `taxonomy`.
pub fn classify_design(study: &Study, taxonomy: &Taxonomy) -> Result<Classification, ClassifyError> {
    let violations = validate_study(study, taxonomy);
    if !violations.is_empty() {
        return Err(ClassifyError::Invalid {
            study: study.id.clone(),
            violations,
        });
    }
    let classes = structural_classes(study, taxonomy);
    let mut warnings = Vec::new();
    if classes.len() == 1 && classes.contains(class::SINGLE_SUBJECT_DESIGN) {
        let sig = PhaseSignature::of_phases(&study.phases);
        warnings.push(Violation::new(
            ViolationCode::NoDesignPattern,
            &study.id,
            format!("signature {sig} matches no design pattern"),
        ));
    }
    Ok(Classification { classes, warnings })
}

/// Pattern-derived classes without the validation step. Always contains
/// `SingleSubjectDesign`.
pub(crate) fn structural_classes(study: &Study, taxonomy: &Taxonomy) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    out.insert(class::SINGLE_SUBJECT_DESIGN.to_string());
    if study.is_mbd() {
        if let Ok(c) = classify_mbd(study) {
            out.extend(taxonomy.ancestors(c));
        }
        return out;
    }
    let sig = PhaseSignature::of_phases(&study.phases);
    for (name, matches) in DESIGN_PATTERNS {
        if matches(&sig) {
            out.extend(taxonomy.ancestors(name));
        }
    }
    out
}

/// The across-dimension class of a multiple-baseline study.
pub fn classify_mbd(study: &Study) -> Result<&'static str, Violation> {
    if study.mbd_items.len() < 2 {
        return Err(Violation::new(
            ViolationCode::MbdNeedsTwoItems,
            &study.id,
            format!(
                "multiple-baseline design has {} item(s), needs at least 2",
                study.mbd_items.len()
            ),
        ));
    }
    let Some(item_type) = &study.mbd_item_type else {
        return Err(Violation::new(
            ViolationCode::MbdMissingItemType,
            &study.id,
            "multiple-baseline design does not declare hasMBDItemType",
        ));
    };
    let family: SignaturePredicate = match item_type.as_str() {
        class::WITHDRAWAL_DESIGN => is_withdrawal,
        class::ALTERNATING_TREATMENT_DESIGN => is_alternating_treatment,
        class::SIMPLE_DESIGN => is_simple,
        other => {
            return Err(Violation::new(
                ViolationCode::MbdInvalidItemType,
                &study.id,
                format!(
                    "item type <{other}> is not WithdrawalDesign, AlternatingTreatmentDesign or SimpleDesign"
                ),
            ))
        }
    };
    for item in &study.mbd_items {
        let sig = PhaseSignature::of_phases(&item.phases);
        if !family(&sig) {
            return Err(Violation::new(
                ViolationCode::MbdItemSignatureMismatch,
                &item.id,
                format!(
                    "signature {sig} does not follow {}",
                    vocab::local_name(item_type)
                ),
            ));
        }
    }

    let varies = |f: fn(&crate::model::MbdItem) -> &Option<Term>| {
        let first = f(&study.mbd_items[0]);
        study.mbd_items.iter().any(|i| f(i) != first)
    };
    let dims: Vec<&'static str> = [
        (varies(|i| &i.outcome), class::ACROSS_OUTCOME_MBD),
        (varies(|i| &i.setting), class::ACROSS_SETTING_MBD),
        (varies(|i| &i.subject), class::ACROSS_SUBJECT_MBD),
    ]
    .into_iter()
    .filter_map(|(v, c)| v.then_some(c))
    .collect();

    match dims.as_slice() {
        [one] => Ok(one),
        [] => Err(Violation::new(
            ViolationCode::MbdNoVaryingDimension,
            &study.id,
            "items share outcome, setting and subject",
        )),
        many => Err(Violation::new(
            ViolationCode::MbdMultipleDimensions,
            &study.id,
            format!(
                "items vary in {} dimensions: {}",
                many.len(),
                many.iter()
                    .map(|c| vocab::local_name(c))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        )),
    }
}

/// Item class matching an across-dimension study class.
pub fn item_class_for(study_class: &str) -> &'static str {
    match study_class {
        class::ACROSS_OUTCOME_MBD => class::ACROSS_OUTCOME_MBD_ITEM,
        class::ACROSS_SETTING_MBD => class::ACROSS_SETTING_MBD_ITEM,
        class::ACROSS_SUBJECT_MBD => class::ACROSS_SUBJECT_MBD_ITEM,
        _ => class::MBD_ITEM,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} stud{} failed validation; first: {}", .failures.len(), if .failures.len() == 1 { "y" } else { "ies" }, first_failure(.failures))]
pub struct MaterializeError {
    pub failures: Vec<(Term, Vec<Violation>)>,
}

fn first_failure(f: &[(Term, Vec<Violation>)]) -> String {
    f.first()
        .map(|(id, v)| format!("{id}: {}", first_violation(v)))
        .unwrap_or_default()
}

/// Adds every inferred type assertion: design classes for studies, item
/// classes for multiple-baseline substudies, and superclass closure for
/// every typed individual.
///
/// Inference is recomputed from the asserted content, so applying this to
/// its own output changes nothing.
pub fn materialize_types(kb: &KnowledgeBase) -> Result<KnowledgeBase, MaterializeError> {
    let mut out = kb.clone();
    out.inferred_types.clear();
    for s in &mut out.studies {
        s.inferred_classes.clear();
    }

    let taxonomy = &kb.taxonomy;
    let closure: BTreeMap<String, BTreeSet<String>> = taxonomy.closure();
    let ancestors = |c: &str| -> BTreeSet<String> {
        closure
            .get(c)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([c.to_string()]))
    };

    let mut failures = Vec::new();
    let mut item_types = Vec::new();
    for study in &mut out.studies {
        match classify_design(study, taxonomy) {
            Ok(c) => {
                let mut classes = c.classes;
                if let Some(a) = &study.asserted_class {
                    classes.extend(ancestors(a));
                }
                if let Ok(mbd_class) = classify_mbd(study) {
                    let item_class = item_class_for(mbd_class);
                    for item in &study.mbd_items {
                        item_types.push((item.id.clone(), item_class));
                    }
                }
                study.inferred_classes = classes;
            }
            Err(ClassifyError::Invalid { study: id, violations }) => {
                failures.push((id, violations))
            }
            Err(ClassifyError::MultipleBaseline(_)) => unreachable!("classify_design handles MBD"),
        }
    }
    if !failures.is_empty() {
        return Err(MaterializeError { failures });
    }

    let asserted = mapping::kb_to_graph_asserted(kb).triples;
    let rdf_type = Term::iri(vocab::RDF_TYPE);
    let mut inferred = BTreeSet::new();
    for t in &asserted {
        if t.predicate == rdf_type {
            if let Term::Iri(c) = &t.object {
                for anc in ancestors(c) {
                    inferred.insert((t.subject.clone(), anc));
                }
            }
        }
    }
    for (item, c) in item_types {
        for anc in ancestors(c) {
            inferred.insert((item.clone(), anc));
        }
    }
    let study_classes: BTreeMap<&Term, &BTreeSet<String>> = out
        .studies
        .iter()
        .map(|s| (&s.id, &s.inferred_classes))
        .collect();
    inferred.retain(|(s, c)| {
        !asserted.contains(&Triple::typed(s.clone(), c))
            && !study_classes.get(s).is_some_and(|cs| cs.contains(c))
    });
    out.inferred_types = inferred;
    out.materialized = true;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MbdItem;
    use crate::vocab::core;

    fn iri(local: &str) -> Term {
        Term::iri(core(local))
    }

    pub(crate) fn study_from_signature(sig: &str) -> Study {
        let mut s = Study::new(iri("s"));
        for (i, c) in sig.chars().enumerate() {
            let kind = PhaseKind::from_symbol(c).unwrap();
            let mut p = Phase::new(iri(&format!("p{i}")), kind, i as i64 + 1);
            match kind {
                I => p.intervention_types.push(iri("t1")),
                A => p.intervention_types.extend([iri("t1"), iri("t2")]),
                _ => {}
            }
            s.phases.push(p);
        }
        s
    }

    fn names(c: &Classification) -> BTreeSet<&str> {
        c.classes.iter().map(|s| vocab::local_name(s)).collect()
    }

    #[test]
    fn signatures() {
        let sig = |s: &str| phase_signature(&study_from_signature(s)).unwrap().to_string();
        assert_eq!(sig("BIBI"), "BIBI");
        assert_eq!(sig("BA"), "BA");
        assert_eq!(sig("B"), "B");
    }

    #[test]
    fn signature_follows_positions_not_insertion_order() {
        let mut s = study_from_signature("BIBI");
        s.phases.reverse();
        assert_eq!(phase_signature(&s).unwrap().to_string(), "BIBI");
    }

    #[test]
    fn mbd_has_no_signature() {
        let mut s = Study::new(iri("s"));
        s.mbd_items.push(MbdItem::new(iri("i")));
        assert!(matches!(phase_signature(&s), Err(ClassifyError::MultipleBaseline(_))));
    }

    #[test]
    fn classify_examples() {
        let t = Taxonomy::core();
        let c = |s: &str| classify_design(&study_from_signature(s), &t).unwrap();
        assert_eq!(
            names(&c("BIBI")),
            BTreeSet::from(["ABAB_Design", "WithdrawalDesign", "SingleSubjectDesign"])
        );
        assert_eq!(
            names(&c("BIBIF")),
            BTreeSet::from(["ABAB_Design", "WithdrawalDesign", "SingleSubjectDesign"])
        );
        assert_eq!(
            names(&c("BI")),
            BTreeSet::from(["AB_Design", "SimpleDesign", "SingleSubjectDesign"])
        );
        assert_eq!(
            names(&c("BA")),
            BTreeSet::from(["AlternatingTreatmentDesign", "SingleSubjectDesign"])
        );
        assert_eq!(
            names(&c("BIB")),
            BTreeSet::from(["WithdrawalDesign", "SingleSubjectDesign"])
        );
        assert_eq!(names(&c("BII")), BTreeSet::from(["SimpleDesign", "SingleSubjectDesign"]));
    }

    #[test]
    fn unmatched_study_warns() {
        let c = classify_design(&study_from_signature("B"), &Taxonomy::core()).unwrap();
        assert_eq!(names(&c), BTreeSet::from(["SingleSubjectDesign"]));
        assert_eq!(c.warnings[0].code, ViolationCode::NoDesignPattern);
    }

    #[test]
    fn invalid_study_is_rejected() {
        let mut s = study_from_signature("BA");
        s.phases[1].intervention_types.pop();
        assert!(matches!(
            classify_design(&s, &Taxonomy::core()),
            Err(ClassifyError::Invalid { .. })
        ));
    }

    fn mbd(items: &[(&str, &str, &str)]) -> Study {
        let mut s = Study::new(iri("mbd"));
        s.mbd_item_type = Some(class::SIMPLE_DESIGN.into());
        for (n, (subject, setting, outcome)) in items.iter().enumerate() {
            let mut item = MbdItem::new(iri(&format!("item{n}")));
            item.subject = Some(iri(subject));
            item.setting = Some(iri(setting));
            item.outcome = Some(iri(outcome));
            item.phases = study_from_signature("BI").phases;
            for p in &mut item.phases {
                p.id = iri(&format!("item{n}_{}", p.id.label()));
            }
            s.mbd_items.push(item);
        }
        s
    }

    #[test]
    fn across_setting() {
        let s = mbd(&[
            ("paul", "home", "wh"),
            ("paul", "school", "wh"),
            ("paul", "playground", "wh"),
        ]);
        assert_eq!(classify_mbd(&s), Ok(class::ACROSS_SETTING_MBD));
        let c = classify_design(&s, &Taxonomy::core()).unwrap();
        assert_eq!(
            names(&c),
            BTreeSet::from(["AcrossSettingMBD", "MultipleBaselineDesign", "SingleSubjectDesign"])
        );
    }

    #[test]
    fn across_subject_and_outcome() {
        let s = mbd(&[("paul", "home", "wh"), ("mary", "home", "wh")]);
        assert_eq!(classify_mbd(&s), Ok(class::ACROSS_SUBJECT_MBD));
        let s = mbd(&[("paul", "home", "wh"), ("paul", "home", "tantrums")]);
        assert_eq!(classify_mbd(&s), Ok(class::ACROSS_OUTCOME_MBD));
    }

    #[test]
    fn two_dimensions_vary() {
        let s = mbd(&[("paul", "home", "wh"), ("mary", "school", "wh")]);
        assert_eq!(
            classify_mbd(&s).unwrap_err().code,
            ViolationCode::MbdMultipleDimensions
        );
        let s = mbd(&[("paul", "home", "wh"), ("paul", "home", "wh")]);
        assert_eq!(
            classify_mbd(&s).unwrap_err().code,
            ViolationCode::MbdNoVaryingDimension
        );
    }

    #[test]
    fn item_signature_must_follow_item_type() {
        let mut s = mbd(&[("paul", "home", "wh"), ("paul", "school", "wh")]);
        s.mbd_item_type = Some(class::WITHDRAWAL_DESIGN.into());
        assert_eq!(
            classify_mbd(&s).unwrap_err().code,
            ViolationCode::MbdItemSignatureMismatch
        );
        s.mbd_item_type = Some(class::AB_DESIGN.into());
        assert_eq!(classify_mbd(&s).unwrap_err().code, ViolationCode::MbdInvalidItemType);
    }

    #[test]
    fn baseline_lengths_may_differ() {
        let mut s = mbd(&[("paul", "home", "wh"), ("paul", "school", "wh")]);
        // Withdrawal items of different length still share the family.
        s.mbd_item_type = Some(class::WITHDRAWAL_DESIGN.into());
        s.mbd_items[0].phases = study_from_signature("BIB").phases;
        s.mbd_items[1].phases = study_from_signature("BIBIB").phases;
        for (n, item) in s.mbd_items.iter_mut().enumerate() {
            for p in &mut item.phases {
                p.id = iri(&format!("i{n}_{}", p.id.label()));
            }
        }
        assert_eq!(classify_mbd(&s), Ok(class::ACROSS_SETTING_MBD));
    }
}
