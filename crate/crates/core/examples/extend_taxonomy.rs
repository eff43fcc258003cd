//! Extend the class hierarchy, both in code and from Turtle.
//!
//!     cargo run --example extend_taxonomy

use ssdont::classifier::materialize_types;
use ssdont::query::{parse_dl_query, QueryEngine};
use ssdont::vocab::{autism, class, core};
use ssdont::{load_kb_str, Taxonomy};

const EXTENDED: &str = r#"
ssd:ABABABAB_Design rdfs:subClassOf ssd:WithdrawalDesign .
aut:ScriptingIntervention rdfs:subClassOf ssd:InterventionType .
aut:script01 a aut:ScriptingIntervention .

ssd:long01 a ssd:ABABABAB_Design ;
    ssd:hasPhase ssd:long01_ph1 , ssd:long01_ph2 , ssd:long01_ph3 , ssd:long01_ph4 ,
        ssd:long01_ph5 , ssd:long01_ph6 , ssd:long01_ph7 , ssd:long01_ph8 .
ssd:long01_ph1 a ssd:BaselinePhase ; ssd:hasPosition 1 .
ssd:long01_ph2 a ssd:SimpleInterventionPhase ; ssd:hasPosition 2 ; ssd:hasInterventionType aut:script01 .
ssd:long01_ph3 a ssd:BaselinePhase ; ssd:hasPosition 3 .
ssd:long01_ph4 a ssd:SimpleInterventionPhase ; ssd:hasPosition 4 ; ssd:hasInterventionType aut:script01 .
ssd:long01_ph5 a ssd:BaselinePhase ; ssd:hasPosition 5 .
ssd:long01_ph6 a ssd:SimpleInterventionPhase ; ssd:hasPosition 6 ; ssd:hasInterventionType aut:script01 .
ssd:long01_ph7 a ssd:BaselinePhase ; ssd:hasPosition 7 .
ssd:long01_ph8 a ssd:SimpleInterventionPhase ; ssd:hasPosition 8 ; ssd:hasInterventionType aut:script01 .
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = Taxonomy::core().register_class(&core("ABABABAB_Design"), [class::WITHDRAWAL_DESIGN])?;
    println!(
        "ABABABAB_Design under WithdrawalDesign: {}",
        t.is_subclass_of(&core("ABABABAB_Design"), class::WITHDRAWAL_DESIGN)?
    );
    println!(
        "ABABABAB_Design under ABAB_Design: {}",
        t.is_subclass_of(&core("ABABABAB_Design"), class::ABAB_DESIGN)?
    );
    let t = t.register_class(&autism("ScriptingIntervention"), [class::INTERVENTION_TYPE])?;
    println!("classes: {}", t.len());

    match t.register_class(class::WITHDRAWAL_DESIGN, [core("ABABABAB_Design").as_str()]) {
        Ok(_) => println!("unexpected: cycle accepted"),
        Err(e) => println!("rejected: {e}"),
    }

    // Subclass triples in a data file extend the taxonomy on load.
    let kb = materialize_types(&load_kb_str(EXTENDED)?)?;
    let engine = QueryEngine::new(&kb);
    for q in [
        "WithdrawalDesign",
        "ABAB_Design",
        "hasPhase some (hasInterventionType some ScriptingIntervention)",
    ] {
        let hits: Vec<String> = engine.dl(&parse_dl_query(q)?)?.iter().map(|t| t.label().to_string()).collect();
        println!("{q}: {hits:?}");
    }
    Ok(())
}
