//! Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
//! any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Duration;

use common::{all_signatures, fixture, oracle_classes, run_cookbook_entry, study_from_signature, COOKBOOK};
use ssdont::bench::{run_bench, BEST_RESULT_QUERY, YOUNG_AT_SCHOOL_QUERY};
use ssdont::classifier::{classify_design, materialize_types};
use ssdont::query::{parse_dl_query, parse_sparql, QueryEngine};
use ssdont::synth::{generate_studies, kb_stats, GenProfile};
use ssdont::turtle::{graph_to_kb, isomorphic, kb_to_graph, parse_turtle, serialize_turtle};
use ssdont::vocab::{class, core};
use ssdont::{load_kb_file, validate_study, Taxonomy, Term};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reference_study() -> Outcome {
    let kb = load_kb_file(fixture("ssd01_abab.ttl")).map_err(|e| e.to_string())?;
    let study = kb.studies.first().ok_or("no study")?;
    let v = validate_study(study, &kb.taxonomy);
    ensure(v.is_empty(), || format!("violations: {v:?}"))?;
    let c = classify_design(study, &kb.taxonomy).map_err(|e| e.to_string())?;
    let want: BTreeSet<String> = [class::ABAB_DESIGN, class::WITHDRAWAL_DESIGN, class::SINGLE_SUBJECT_DESIGN]
        .map(String::from)
        .into();
    ensure(c.classes == want, || format!("classes {:?}", c.classes))?;
    let paul = study
        .participants
        .iter()
        .find(|p| p.id == Term::iri(core("paul")))
        .ok_or("no paul")?;
    let months = paul.age.as_ref().ok_or("paul has no age")?.age.in_months();
    ensure(months == 88, || format!("paul is {months} months"))?;
    Ok("0 violations, {ABAB_Design, WithdrawalDesign, SingleSubjectDesign}, paul 88 months".into())
}

fn dl_reproduction() -> Outcome {
    let run = |file: &str, q: &str| -> Result<BTreeSet<Term>, String> {
        let kb = materialize_types(&load_kb_file(fixture(file)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        QueryEngine::new(&kb)
            .dl(&parse_dl_query(q).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())
    };
    let names = |n: &[&str]| -> BTreeSet<Term> { n.iter().map(|n| Term::iri(core(n))).collect() };
    let a = run("ssd01_abab.ttl", "Result and isResultOfPhase some {ph01}")?;
    ensure(a == names(&["res01", "res02"]), || format!("first query: {a:?}"))?;
    let b = run("across_setting.ttl", YOUNG_AT_SCHOOL_QUERY)?;
    ensure(b == names(&["ssd02"]), || format!("across-setting query: {b:?}"))?;
    Ok("{res01, res02} and {ssd02}".into())
}

fn sparql_reproduction() -> Outcome {
    let kb = materialize_types(&load_kb_file(fixture("ab_study.ttl")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let table = QueryEngine::new(&kb).sparql(&parse_sparql(BEST_RESULT_QUERY).map_err(|e| e.to_string())?);
    let (study, it, best) = common::best_result_oracle(&kb).ok_or("oracle found no candidate")?;
    ensure(table.len() == 1, || format!("{} rows", table.len()))?;
    let row = &table.rows[0];
    ensure(row[0] == study && row[1] == it && row[2].as_number() == Some(best), || format!("row {row:?}, oracle {best}"))?;
    Ok(format!("one row, ?val = {best} = linear-scan maximum"))
}

fn classifier_oracle() -> Outcome {
    let taxonomy = Taxonomy::core();
    let sigs = all_signatures(6);
    let mut mismatches = Vec::new();
    for sig in &sigs {
        let got = classify_design(&study_from_signature("s", sig), &taxonomy).map_err(|e| format!("{sig}: {e}"))?;
        if got.classes != oracle_classes(sig) {
            mismatches.push(sig.clone());
        }
    }
    ensure(mismatches.is_empty(), || format!("{} mismatches: {mismatches:?}", mismatches.len()))?;
    Ok(format!("{} signatures, 0 mismatches", sigs.len()))
}

fn round_trip() -> Outcome {
    let mut failures = Vec::new();
    for seed in 1..=100 {
        let kb = generate_studies(10, &GenProfile::default().with_seed(seed)).map_err(|e| e.to_string())?;
        let graph = kb_to_graph(&kb);
        let back = parse_turtle(&serialize_turtle(&graph)).map_err(|e| format!("seed {seed}: {e}"))?;
        let kb2 = graph_to_kb(&back, &Taxonomy::core()).map_err(|e| format!("seed {seed}: {e}"))?;
        if !isomorphic(&graph.triples, &back.triples)
            || kb2.with_canonical_blank_labels() != kb.with_canonical_blank_labels()
        {
            failures.push(seed);
        }
    }
    ensure(failures.is_empty(), || format!("failing seeds {failures:?}"))?;
    Ok("100 kbs, 0 failures".into())
}

fn scale() -> Outcome {
    let stats = kb_stats(&generate_studies(1000, &GenProfile::default()).map_err(|e| e.to_string())?);
    let dev = |got: usize, want: f64| (got as f64 - want) / want * 100.0;
    let (dt, di) = (dev(stats.triple_count, 186_679.0), dev(stats.individual_count, 51_508.0));
    ensure(dt.abs() <= 20.0 && di.abs() <= 20.0, || {
        format!("triples {} ({dt:+.1}%), individuals {} ({di:+.1}%)", stats.triple_count, stats.individual_count)
    })?;
    let report = run_bench(1000, &GenProfile::default(), None, 5).map_err(|e| e.to_string())?;
    ensure(report.materialize <= Duration::from_secs(38), || format!("materialize took {:?}", report.materialize))?;
    let slow: Vec<String> = report
        .queries
        .iter()
        .filter(|q| q.warm_median > Duration::from_secs(1))
        .map(|q| format!("{} {:?}", q.name, q.warm_median))
        .collect();
    ensure(slow.is_empty(), || format!("slow queries: {slow:?}"))?;
    let worst = report.queries.iter().map(|q| q.warm_median).max().unwrap_or_default();
    Ok(format!(
        "{} triples ({dt:+.1}%), {} individuals ({di:+.1}%), materialize {:.0} ms, slowest query median {:.1} ms",
        stats.triple_count,
        stats.individual_count,
        report.materialize.as_secs_f64() * 1e3,
        worst.as_secs_f64() * 1e3
    ))
}

fn cookbook() -> Outcome {
    let kb = materialize_types(&load_kb_file(fixture("cookbook.ttl")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let engine = QueryEngine::new(&kb);
    for entry in COOKBOOK {
        let got = run_cookbook_entry(&engine, entry)?;
        let want: BTreeSet<String> = entry.expected.iter().map(|s| s.to_string()).collect();
        ensure(got == want, || format!("{}: got {got:?}", entry.question))?;
    }
    Ok(format!("{} questions answered exactly", COOKBOOK.len()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.ttl"));
        let status = Command::new(env!("CARGO_BIN_EXE_ssdont"))
            .args(["gen", "-n", "200", "--seed", "42", "-o"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.success(), || format!("gen exited with {status}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "outputs differ".into())?;
    Ok(format!("two runs, {} identical bytes", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("reference ABAB study", reference_study),
        ("DL query reproduction", dl_reproduction),
        ("SPARQL reproduction", sparql_reproduction),
        ("classifier oracle equivalence", classifier_oracle),
        ("round trip", round_trip),
        ("scale reproduction", scale),
        ("competency-question cookbook", cookbook),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
