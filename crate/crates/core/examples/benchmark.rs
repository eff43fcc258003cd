//! Time load, materialization and queries on a generated corpus.
//!
//!     cargo run --release --example benchmark -- [count]

use ssdont::bench::{reps_from_env, run_bench, BenchQuery};
use ssdont::synth::GenProfile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(1000);
    let report = run_bench(n, &GenProfile::default(), None, reps_from_env())?;
    print!("{report}");

    // A custom query set.
    let custom = [
        BenchQuery::dl("all_results", "Result"),
        BenchQuery::sparql("withdrawal", "SELECT ?s WHERE { ?s a ssd:WithdrawalDesign }"),
    ];
    let report = run_bench(n.min(100), &GenProfile::default().with_seed(1), Some(&custom), 5)?;
    println!();
    print!("{}", report.to_kv());
    Ok(())
}
