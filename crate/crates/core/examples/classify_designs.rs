//! Classify each study of the cookbook fixture from its phase structure.
//!
//!     cargo run --example classify_designs

use ssdont::classifier::{classify_design, phase_signature, DESIGN_PATTERNS};
use ssdont::load_kb_file;
use ssdont::vocab::local_name;

const COOKBOOK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/cookbook.ttl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = load_kb_file(COOKBOOK)?;
    for study in &kb.studies {
        let shape = if study.is_mbd() {
            let items: Vec<String> = study
                .mbd_items
                .iter()
                .map(|i| ssdont::PhaseSignature::of_phases(&i.phases).to_string())
                .collect();
            format!("items [{}]", items.join(" | "))
        } else {
            phase_signature(study)?.to_string()
        };
        let c = classify_design(study, &kb.taxonomy)?;
        let names: Vec<&str> = kb
            .taxonomy
            .sort_specific_first(&c.classes)
            .into_iter()
            .map(|c| local_name(c))
            .collect();
        println!("{:5} {:24} {}", study.id.label(), shape, names.join(", "));
    }

    // Signatures can also be classified directly.
    for sig in ["BI", "BIBI", "BIBIF", "BIII", "BIB", "BA", "IB"] {
        let sig: ssdont::PhaseSignature = sig.parse()?;
        let matched: Vec<&str> = DESIGN_PATTERNS
            .iter()
            .filter(|(_, test)| test(&sig))
            .map(|(name, _)| local_name(name))
            .collect();
        println!("{sig:6} -> {}", if matched.is_empty() { "no pattern".to_string() } else { matched.join(", ") });
    }
    Ok(())
}
