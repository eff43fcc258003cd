//! DL-style class expression queries over materialized fixtures.
//!
//!     cargo run --example dl_queries

use ssdont::classifier::materialize_types;
use ssdont::query::{parse_dl_query, QueryEngine};
use ssdont::load_kb_file;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(engine: &QueryEngine, text: &str) -> Result<(), Box<dyn std::error::Error>> {
    let expr = parse_dl_query(text)?;
    let hits = engine.dl(&expr)?;
    let names: Vec<String> = hits.iter().map(|t| t.display_with(engine.prefixes()).to_string()).collect();
    println!("{expr}\n  => {}", names.join(" "));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = materialize_types(&load_kb_file(fixture("ssd01_abab.ttl"))?)?;
    let engine = QueryEngine::new(&kb);
    run(&engine, "Result and isResultOfPhase some {ph01}")?;
    run(&engine, "ABAB_Design")?;
    run(&engine, "Phase and hasInterventionType some Peer-mediatedIntervention")?;

    let kb = materialize_types(&load_kb_file(fixture("across_setting.ttl"))?)?;
    let engine = QueryEngine::new(&kb);
    run(
        &engine,
        "AcrossSettingMBD and hasParticipant some (Participant and hasAge some (years some xsd:int[<10])) \
         and hasMBDItem some (AcrossSettingMBDItem and hasSetting value school)",
    )?;

    // Errors carry a line and column.
    for bad in ["Result and", "Result and NoSuchClass", "hasAge some (years some xsd:string[<3])"] {
        match parse_dl_query(bad).map(|e| engine.dl(&e)) {
            Ok(Ok(_)) => println!("{bad}: accepted"),
            Ok(Err(e)) | Err(e) => println!("{bad}: {e}"),
        }
    }
    Ok(())
}
