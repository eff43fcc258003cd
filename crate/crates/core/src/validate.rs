//! Structural checks on studies.
//!
//! Violations are data: [`validate_study`] never fails, it reports every
//! broken invariant with a code from the closed list in [`ViolationCode`].

use std::collections::BTreeSet;
use std::fmt;

use crate::classifier::{self, PhaseSignature};
use crate::model::{Phase, PhaseKind, Study};
use crate::taxonomy::Taxonomy;
use crate::term::Term;
use crate::vocab::class;

/// Closed list of violation codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationCode {
    /// Neither phases nor substudies.
    EmptyStudy,
    /// Both top-level phases and substudies.
    MixedStructure,
    /// Phase positions are not exactly 1..n.
    PhasePositionsNotContiguous,
    /// A follow-up phase is followed by another phase.
    FollowUpNotLast,
    /// A baseline or follow-up phase names an intervention type.
    TreatmentInNonInterventionPhase,
    /// A simple intervention phase without exactly one intervention type.
    SimpleNeedsOneTreatment,
    /// An alternating phase with fewer than two distinct intervention types.
    AlternatingNeedsTwoTreatments,
    MbdNeedsTwoItems,
    MbdMissingItemType,
    /// Item type outside {WithdrawalDesign, AlternatingTreatmentDesign, SimpleDesign}.
    MbdInvalidItemType,
    /// A substudy's phases do not follow the declared item type.
    MbdItemSignatureMismatch,
    /// Substudies differ in more than one of outcome, setting and subject.
    MbdMultipleDimensions,
    /// Substudies differ in none of outcome, setting and subject.
    MbdNoVaryingDimension,
    /// A result points at a phase the study does not have.
    ResultPhaseUnknown,
    /// A result's intervention type is incompatible with its phase.
    ResultTreatmentMismatch,
    InstantNotPositive,
    AgeMonthsOutOfRange,
    DiagnosedAfterAge,
    /// Asserted class is missing from the taxonomy.
    UnknownClass,
    /// Asserted class is not a kind of single-subject design.
    NotADesignClass,
    /// Asserted class contradicts the structure of the study.
    AssertedClassConflict,
    /// Warning: structurally valid but matches no known design pattern.
    NoDesignPattern,
}

impl ViolationCode {
    pub const ALL: [ViolationCode; 22] = [
        ViolationCode::EmptyStudy,
        ViolationCode::MixedStructure,
        ViolationCode::PhasePositionsNotContiguous,
        ViolationCode::FollowUpNotLast,
        ViolationCode::TreatmentInNonInterventionPhase,
        ViolationCode::SimpleNeedsOneTreatment,
        ViolationCode::AlternatingNeedsTwoTreatments,
        ViolationCode::MbdNeedsTwoItems,
        ViolationCode::MbdMissingItemType,
        ViolationCode::MbdInvalidItemType,
        ViolationCode::MbdItemSignatureMismatch,
        ViolationCode::MbdMultipleDimensions,
        ViolationCode::MbdNoVaryingDimension,
        ViolationCode::ResultPhaseUnknown,
        ViolationCode::ResultTreatmentMismatch,
        ViolationCode::InstantNotPositive,
        ViolationCode::AgeMonthsOutOfRange,
        ViolationCode::DiagnosedAfterAge,
        ViolationCode::UnknownClass,
        ViolationCode::NotADesignClass,
        ViolationCode::AssertedClassConflict,
        ViolationCode::NoDesignPattern,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::EmptyStudy => "EmptyStudy",
            ViolationCode::MixedStructure => "MixedStructure",
            ViolationCode::PhasePositionsNotContiguous => "PhasePositionsNotContiguous",
            ViolationCode::FollowUpNotLast => "FollowUpNotLast",
            ViolationCode::TreatmentInNonInterventionPhase => "TreatmentInNonInterventionPhase",
            ViolationCode::SimpleNeedsOneTreatment => "SimpleNeedsOneTreatment",
            ViolationCode::AlternatingNeedsTwoTreatments => "AlternatingNeedsTwoTreatments",
            ViolationCode::MbdNeedsTwoItems => "MBDNeedsTwoItems",
            ViolationCode::MbdMissingItemType => "MBDMissingItemType",
            ViolationCode::MbdInvalidItemType => "MBDInvalidItemType",
            ViolationCode::MbdItemSignatureMismatch => "MBDItemSignatureMismatch",
            ViolationCode::MbdMultipleDimensions => "MBDMultipleDimensions",
            ViolationCode::MbdNoVaryingDimension => "MBDNoVaryingDimension",
            ViolationCode::ResultPhaseUnknown => "ResultPhaseUnknown",
            ViolationCode::ResultTreatmentMismatch => "ResultTreatmentMismatch",
            ViolationCode::InstantNotPositive => "InstantNotPositive",
            ViolationCode::AgeMonthsOutOfRange => "AgeMonthsOutOfRange",
            ViolationCode::DiagnosedAfterAge => "DiagnosedAfterAge",
            ViolationCode::UnknownClass => "UnknownClass",
            ViolationCode::NotADesignClass => "NotADesignClass",
            ViolationCode::AssertedClassConflict => "AssertedClassConflict",
            ViolationCode::NoDesignPattern => "NoDesignPattern",
        }
    }

    pub fn is_warning(self) -> bool {
        self == ViolationCode::NoDesignPattern
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub code: ViolationCode,
    pub subject: Term,
    pub message: String,
}

impl Violation {
    pub fn new(code: ViolationCode, subject: &Term, message: impl Into<String>) -> Self {
        Violation {
            code,
            subject: subject.clone(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.code, self.subject, self.message)
    }
}

/// Design classes whose membership is decided by structure alone.
const STRUCTURAL_CLASSES: &[&str] = &[
    class::AB_DESIGN,
    class::ABAB_DESIGN,
    class::SIMPLE_DESIGN,
    class::WITHDRAWAL_DESIGN,
    class::ALTERNATING_TREATMENT_DESIGN,
    class::MULTIPLE_BASELINE_DESIGN,
    class::ACROSS_OUTCOME_MBD,
    class::ACROSS_SETTING_MBD,
    class::ACROSS_SUBJECT_MBD,
];

/// Checks every study, phase, result and substudy invariant.
///
/// The returned list is sorted, so it does not depend on the order in which
/// phases or results were inserted. Warnings are not included; see
/// [`classifier::classify_design`].
pub fn validate_study(study: &Study, taxonomy: &Taxonomy) -> Vec<Violation> {
    let mut out = Vec::new();

    match (study.phases.is_empty(), study.mbd_items.is_empty()) {
        (true, true) => out.push(Violation::new(
            ViolationCode::EmptyStudy,
            &study.id,
            "study has neither phases nor multiple-baseline items",
        )),
        (false, false) => out.push(Violation::new(
            ViolationCode::MixedStructure,
            &study.id,
            "study has both phases and multiple-baseline items",
        )),
        _ => {}
    }

    check_phase_sequence(&study.id, &study.phases, &mut out);
    for item in &study.mbd_items {
        check_phase_sequence(&item.id, &item.phases, &mut out);
    }

    if study.is_mbd() {
        if study.mbd_items.len() < 2 {
            out.push(Violation::new(
                ViolationCode::MbdNeedsTwoItems,
                &study.id,
                format!(
                    "multiple-baseline design has {} item(s), needs at least 2",
                    study.mbd_items.len()
                ),
            ));
        } else if study.mbd_item_type.is_none() {
            out.push(Violation::new(
                ViolationCode::MbdMissingItemType,
                &study.id,
                "multiple-baseline design does not declare hasMBDItemType",
            ));
        } else if let Err(v) = classifier::classify_mbd(study) {
            out.push(v);
        }
    }

    check_results(study, &mut out);

    for p in &study.participants {
        for age in [&p.age, &p.diagnosed_at_age].into_iter().flatten() {
            if let Some(m) = age.age.months {
                if m > 11 {
                    out.push(Violation::new(
                        ViolationCode::AgeMonthsOutOfRange,
                        &age.id,
                        format!("months = {m}, expected 0..=11"),
                    ));
                }
            }
        }
        if let (Some(age), Some(diag)) = (&p.age, &p.diagnosed_at_age) {
            if diag.age.in_months() > age.age.in_months() {
                out.push(Violation::new(
                    ViolationCode::DiagnosedAfterAge,
                    &p.id,
                    format!(
                        "diagnosed at {} months but aged {} months",
                        diag.age.in_months(),
                        age.age.in_months()
                    ),
                ));
            }
        }
    }

    check_asserted_class(study, taxonomy, out.is_empty(), &mut out);

    out.sort();
    out.dedup();
    out
}

fn check_phase_sequence(owner: &Term, phases: &[Phase], out: &mut Vec<Violation>) {
    let mut positions: Vec<i64> = phases.iter().map(|p| p.position).collect();
    positions.sort_unstable();
    if positions.iter().zip(1..).any(|(p, expected)| *p != expected) {
        out.push(Violation::new(
            ViolationCode::PhasePositionsNotContiguous,
            owner,
            format!("phase positions {positions:?} are not 1..{}", phases.len()),
        ));
    }

    let sig = PhaseSignature::of_phases(phases);
    let kinds = sig.kinds();
    if let Some(i) = kinds.iter().position(|k| *k == PhaseKind::FollowUp) {
        if i + 1 != kinds.len() {
            let mut ordered: Vec<&Phase> = phases.iter().collect();
            ordered.sort_by_key(|p| p.position);
            out.push(Violation::new(
                ViolationCode::FollowUpNotLast,
                &ordered[i].id,
                format!("follow-up phase is not the last phase (signature {sig})"),
            ));
        }
    }

    for phase in phases {
        let n = phase.intervention_types.len();
        let distinct: BTreeSet<&Term> = phase.intervention_types.iter().collect();
        match phase.kind {
            PhaseKind::Baseline | PhaseKind::FollowUp if n > 0 => out.push(Violation::new(
                ViolationCode::TreatmentInNonInterventionPhase,
                &phase.id,
                format!("{} phase has {n} intervention type(s)", phase.kind),
            )),
            PhaseKind::SimpleIntervention if distinct.len() != 1 || n != 1 => {
                out.push(Violation::new(
                    ViolationCode::SimpleNeedsOneTreatment,
                    &phase.id,
                    format!("simple intervention phase has {n} intervention type(s)"),
                ))
            }
            PhaseKind::AlternatingIntervention if distinct.len() < 2 => out.push(Violation::new(
                ViolationCode::AlternatingNeedsTwoTreatments,
                &phase.id,
                format!(
                    "alternating intervention phase has {} distinct intervention type(s)",
                    distinct.len()
                ),
            )),
            _ => {}
        }
    }
}

fn check_results(study: &Study, out: &mut Vec<Violation>) {
    for r in &study.results {
        if r.instant.index < 1 {
            out.push(Violation::new(
                ViolationCode::InstantNotPositive,
                &r.id,
                format!("instant {} is not a positive session index", r.instant.index),
            ));
        }
        let Some(phase) = study.phase(&r.phase) else {
            out.push(Violation::new(
                ViolationCode::ResultPhaseUnknown,
                &r.id,
                format!("phase {} is not part of study {}", r.phase, study.id),
            ));
            continue;
        };
        let ok = match (phase.kind, &r.intervention_type) {
            (_, None) => true,
            (PhaseKind::Baseline | PhaseKind::FollowUp, Some(_)) => false,
            (PhaseKind::SimpleIntervention, Some(t)) => phase.intervention_types.first() == Some(t),
            (PhaseKind::AlternatingIntervention, Some(t)) => phase.intervention_types.contains(t),
        };
        if !ok {
            out.push(Violation::new(
                ViolationCode::ResultTreatmentMismatch,
                &r.id,
                format!(
                    "intervention type {} does not fit {} phase {}",
                    r.intervention_type.as_ref().map(Term::to_string).unwrap_or_default(),
                    phase.kind,
                    phase.id
                ),
            ));
        }
    }
}

fn check_asserted_class(
    study: &Study,
    taxonomy: &Taxonomy,
    structure_ok: bool,
    out: &mut Vec<Violation>,
) {
    let Some(asserted) = &study.asserted_class else {
        return;
    };
    if !taxonomy.contains(asserted) {
        out.push(Violation::new(
            ViolationCode::UnknownClass,
            &study.id,
            format!("class <{asserted}> is not in the taxonomy"),
        ));
        return;
    }
    if !taxonomy.subsumed_by(asserted, class::SINGLE_SUBJECT_DESIGN) {
        out.push(Violation::new(
            ViolationCode::NotADesignClass,
            &study.id,
            format!("class <{asserted}> is not a single-subject design"),
        ));
        return;
    }
    if !structure_ok {
        return;
    }
    let inferred = classifier::structural_classes(study, taxonomy);
    for c in taxonomy.ancestors(asserted) {
        if STRUCTURAL_CLASSES.contains(&c.as_str()) && !inferred.contains(&c) {
            out.push(Violation::new(
                ViolationCode::AssertedClassConflict,
                &study.id,
                format!(
                    "asserted <{asserted}> implies <{c}>, which the phase structure does not satisfy"
                ),
            ));
        }
    }
    if let Some(item_class) = classifier::classify_mbd(study)
        .ok()
        .map(classifier::item_class_for)
    {
        for item in &study.mbd_items {
            if let Some(a) = &item.asserted_class {
                let specific = [
                    class::ACROSS_OUTCOME_MBD_ITEM,
                    class::ACROSS_SETTING_MBD_ITEM,
                    class::ACROSS_SUBJECT_MBD_ITEM,
                ];
                if specific.contains(&a.as_str()) && a != item_class {
                    out.push(Violation::new(
                        ViolationCode::AssertedClassConflict,
                        &item.id,
                        format!("item asserted as <{a}> but the study varies as <{item_class}>"),
                    ));
                }
            }
        }
    }
}
