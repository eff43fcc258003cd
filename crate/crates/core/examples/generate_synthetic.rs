//! Generate a synthetic corpus, check it classifies as labelled, and
//! write it as Turtle.
//!
//!     cargo run --example generate_synthetic -- [count] [out.ttl]

use ssdont::classifier::classify_design;
use ssdont::synth::{generate_labelled, kb_stats, DesignMix, GenProfile};
use ssdont::turtle::{kb_to_graph, serialize_turtle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(50);
    let out = args.next();

    let profile = GenProfile::from_toml(
        r#"
        seed = 7
        [design_mix]
        ab = 2
        abab = 1
        abab_f = 1
        across_setting = 2
        across_subject = 1
        across_outcome = 1
        alternating = 1
        "#,
    )?;
    let (kb, labels) = generate_labelled(n, &profile)?;
    let mut mismatches = 0;
    for (study, kind) in kb.studies.iter().zip(&labels) {
        let c = classify_design(study, &kb.taxonomy)?;
        if !c.classes.contains(kind.class_iri()) {
            mismatches += 1;
        }
    }
    println!("{n} studies generated, {mismatches} classified differently from their label");
    print!("{}", kb_stats(&kb));

    let only_ab = generate_labelled(5, &GenProfile { design_mix: DesignMix::only(ssdont::synth::DesignKind::Ab), ..GenProfile::default() })?;
    println!("AB-only corpus: {:?}", only_ab.1);

    let text = serialize_turtle(&kb_to_graph(&kb));
    match out {
        Some(path) => std::fs::write(&path, text)?,
        None => println!("{} bytes of Turtle", text.len()),
    }
    Ok(())
}
