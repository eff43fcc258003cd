//! Namespaces, class names and property names of the SSD vocabulary.

use std::collections::BTreeMap;

pub const CORE_NS: &str = "http://bdi.si.ehu.es/bdi/ontologies/SSDOnt/SSDOnt#";
pub const AUTISM_NS: &str = "http://bdi.si.ehu.es/bdi/ontologies/SSDOnt/SSDOntAutism#";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";

macro_rules! core_iri {
    ($local:literal) => {
        concat!("http://bdi.si.ehu.es/bdi/ontologies/SSDOnt/SSDOnt#", $local)
    };
}

macro_rules! autism_iri {
    ($local:literal) => {
        concat!("http://bdi.si.ehu.es/bdi/ontologies/SSDOnt/SSDOntAutism#", $local)
    };
}

/// Class IRIs shipped with the core taxonomy.
pub mod class {
    pub const SINGLE_SUBJECT_DESIGN: &str = core_iri!("SingleSubjectDesign");
    pub const SIMPLE_DESIGN: &str = core_iri!("SimpleDesign");
    pub const WITHDRAWAL_DESIGN: &str = core_iri!("WithdrawalDesign");
    pub const MULTIPLE_BASELINE_DESIGN: &str = core_iri!("MultipleBaselineDesign");
    pub const ALTERNATING_TREATMENT_DESIGN: &str = core_iri!("AlternatingTreatmentDesign");
    pub const AB_DESIGN: &str = core_iri!("AB_Design");
    pub const ABAB_DESIGN: &str = core_iri!("ABAB_Design");
    pub const ACROSS_OUTCOME_MBD: &str = core_iri!("AcrossOutcomeMBD");
    pub const ACROSS_SETTING_MBD: &str = core_iri!("AcrossSettingMBD");
    pub const ACROSS_SUBJECT_MBD: &str = core_iri!("AcrossSubjectMBD");

    pub const PHASE: &str = core_iri!("Phase");
    pub const BASELINE_PHASE: &str = core_iri!("BaselinePhase");
    pub const INTERVENTION_PHASE: &str = core_iri!("InterventionPhase");
    pub const SIMPLE_INTERVENTION_PHASE: &str = core_iri!("SimpleInterventionPhase");
    pub const ALTERNATING_INTERVENTION_PHASE: &str = core_iri!("AlternatingInterventionPhase");
    pub const FOLLOW_UP_PHASE: &str = core_iri!("FollowUpPhase");

    pub const MBD_ITEM: &str = core_iri!("MBDItem");
    pub const ACROSS_OUTCOME_MBD_ITEM: &str = core_iri!("AcrossOutcomeMBDItem");
    pub const ACROSS_SETTING_MBD_ITEM: &str = core_iri!("AcrossSettingMBDItem");
    pub const ACROSS_SUBJECT_MBD_ITEM: &str = core_iri!("AcrossSubjectMBDItem");

    pub const PARTICIPANT: &str = core_iri!("Participant");
    pub const AGE_DESCRIPTION: &str = core_iri!("AgeDescription");
    pub const RESULT: &str = core_iri!("Result");
    pub const INSTANT: &str = core_iri!("Instant");
    pub const INTERVENTION_TYPE: &str = core_iri!("InterventionType");
    pub const OUTCOME: &str = core_iri!("Outcome");

    pub const PEER_MEDIATED_INTERVENTION: &str = autism_iri!("Peer-mediatedIntervention");
    pub const COMMUNICATION_OUTCOME: &str = autism_iri!("CommunicationOutcome");
}

/// Annotation properties understood by the typed model.
pub mod prop {
    pub const HAS_PARTICIPANT: &str = core_iri!("hasParticipant");
    pub const HAS_OUTCOME: &str = core_iri!("hasOutcome");
    pub const HAS_PHASE: &str = core_iri!("hasPhase");
    pub const HAS_POSITION: &str = core_iri!("hasPosition");
    pub const HAS_INTERVENTION_TYPE: &str = core_iri!("hasInterventionType");
    pub const HAS_VALUE: &str = core_iri!("hasValue");
    pub const OCCURS_IN: &str = core_iri!("occursIn");
    pub const IS_RESULT_OF_PHASE: &str = core_iri!("isResultOfPhase");
    pub const HAS_CONDITION: &str = core_iri!("hasCondition");
    pub const HAS_GENDER: &str = core_iri!("hasGender");
    pub const HAS_AGE: &str = core_iri!("hasAge");
    pub const DIAGNOSED_AT_AGE: &str = core_iri!("diagnosedAtAge");
    pub const YEARS: &str = core_iri!("years");
    pub const MONTHS: &str = core_iri!("months");
    pub const IN_FORM_OF: &str = core_iri!("inFormOf");
    pub const HAS_SETTING: &str = core_iri!("hasSetting");
    pub const HAS_MBD_ITEM: &str = core_iri!("hasMBDItem");
    pub const HAS_MBD_ITEM_TYPE: &str = core_iri!("hasMBDItemType");

    pub const ALL: &[&str] = &[
        HAS_PARTICIPANT,
        HAS_OUTCOME,
        HAS_PHASE,
        HAS_POSITION,
        HAS_INTERVENTION_TYPE,
        HAS_VALUE,
        OCCURS_IN,
        IS_RESULT_OF_PHASE,
        HAS_CONDITION,
        HAS_GENDER,
        HAS_AGE,
        DIAGNOSED_AT_AGE,
        YEARS,
        MONTHS,
        IN_FORM_OF,
        HAS_SETTING,
        HAS_MBD_ITEM,
        HAS_MBD_ITEM_TYPE,
    ];
}

/// Individuals naming the measurement form of an outcome.
pub mod form {
    pub const PERCENTAGE: &str = core_iri!("percentage");
    pub const MAGNITUDE: &str = core_iri!("magnitude");
    pub const DURATION: &str = core_iri!("duration");
    pub const FREQUENCY: &str = core_iri!("frequency");
    pub const INTERVAL: &str = core_iri!("interval");
}

/// Builds a core-namespace IRI from a local name.
pub fn core(local: &str) -> String {
    format!("{CORE_NS}{local}")
}

/// Builds an autism-extension IRI from a local name.
pub fn autism(local: &str) -> String {
    format!("{AUTISM_NS}{local}")
}

/// The part of an IRI after the last `#` or `/`.
pub fn local_name(iri: &str) -> &str {
    iri.rfind(['#', '/']).map_or(iri, |i| &iri[i + 1..])
}

/// Prefix label to namespace IRI.
pub type PrefixTable = BTreeMap<String, String>;

/// Prefixes every document and query may use without declaring them.
/// `ssd:` and `ssid:` both name the core namespace.
pub fn default_prefixes() -> PrefixTable {
    [
        ("ssd", CORE_NS),
        ("ssid", CORE_NS),
        ("aut", AUTISM_NS),
        ("rdf", RDF_NS),
        ("rdfs", RDFS_NS),
        ("xsd", XSD_NS),
        ("owl", OWL_NS),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Shortest prefixed form of `iri` under `prefixes`, if its local part is a
/// plain name.
pub fn compact(iri: &str, prefixes: &PrefixTable) -> Option<String> {
    let mut best: Option<(&str, &str)> = None;
    for (label, ns) in prefixes {
        if let Some(local) = iri.strip_prefix(ns.as_str()) {
            if !is_plain_local(local) {
                continue;
            }
            let better = match best {
                None => true,
                Some((b_label, b_local)) => {
                    local.len() < b_local.len()
                        || (local.len() == b_local.len()
                            && (label.len(), label.as_str()) < (b_label.len(), b_label))
                }
            };
            if better {
                best = Some((label, local));
            }
        }
    }
    best.map(|(label, local)| format!("{label}:{local}"))
}

/// Local names the Turtle subset can write unescaped.
pub fn is_plain_local(local: &str) -> bool {
    let Some(first) = local.chars().next() else {
        return false;
    };
    (first.is_alphanumeric() || first == '_')
        && local
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !local.ends_with('.')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_prefers_ssd_over_ssid() {
        let p = default_prefixes();
        assert_eq!(compact(class::ABAB_DESIGN, &p).as_deref(), Some("ssd:ABAB_Design"));
        assert_eq!(
            compact(class::PEER_MEDIATED_INTERVENTION, &p).as_deref(),
            Some("aut:Peer-mediatedIntervention")
        );
        assert_eq!(compact("http://example.org/x/", &p), None);
    }

    #[test]
    fn local_names() {
        assert_eq!(local_name(class::AB_DESIGN), "AB_Design");
        assert_eq!(local_name("http://example.org/a/b"), "b");
        assert_eq!(local_name("plain"), "plain");
    }
}
