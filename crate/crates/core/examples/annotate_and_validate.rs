//! Annotate a study in Turtle, then validate it and a broken variant.
//!
//!     cargo run --example annotate_and_validate

use ssdont::model::age_in_months;
use ssdont::{load_kb_file, load_kb_str, validate_study, PhaseSignature};

const ABAB_STUDY: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ssd01_abab.ttl");

// An alternating-treatment study whose alternating phase names only one
// treatment.
const BROKEN: &str = r#"
ssd:at01 ssd:hasPhase ssd:at01_ph01 , ssd:at01_ph02 .
ssd:at01_ph01 a ssd:BaselinePhase ; ssd:hasPosition 1 .
ssd:at01_ph02 a ssd:AlternatingInterventionPhase ; ssd:hasPosition 2 ;
    ssd:hasInterventionType aut:weekendInterview .
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = load_kb_file(ABAB_STUDY)?;
    for study in &kb.studies {
        let violations = validate_study(study, &kb.taxonomy);
        println!("{}: {} violation(s)", study.id.label(), violations.len());
        for p in &study.participants {
            if let Some(age) = &p.age {
                println!("  participant {} is {} months old", p.id.label(), age_in_months(&age.age));
            }
        }
        println!("  phases: {}", PhaseSignature::of_phases(&study.phases));
        println!("  results: {}", study.results.len());
    }

    let kb = load_kb_str(BROKEN)?;
    for study in &kb.studies {
        for v in validate_study(study, &kb.taxonomy) {
            println!("{}: {} {}", study.id.label(), v.code, v.message);
        }
    }

    // Malformed input is rejected before validation, with a position.
    if let Err(e) = load_kb_str("ssd:x a ssd:BaselinePhase ;\n    ssd:hasPosition 1 ,, 2 .") {
        println!("parse error: {e}");
    }
    Ok(())
}
