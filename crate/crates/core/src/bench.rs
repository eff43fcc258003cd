//! Timing harness: generate a corpus, load it from Turtle, materialize,
//! then time each query.
//!
//! The machine-readable report is one `key=value` pair per line, keys in a
//! fixed order. Only keys under `time.` and `query.*.cold_ms` /
//! `query.*.warm_median_ms` change between runs with the same inputs.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::classifier::{materialize_types, MaterializeError};
use crate::query::{parse_dl_query, parse_sparql, BindingTable, ClassExpr, QueryEngine, QueryError, SparqlQuery};
use crate::synth::{generate_studies, kb_stats, GenProfile, KbStats, ProfileError};
use crate::turtle::{kb_to_graph, serialize_turtle};
use crate::{vocab, KnowledgeBase, Term};

/// Environment variable overriding the repetition count (minimum 5).
pub const REPS_ENV: &str = "SSDONT_BENCH_REPS";
pub const DEFAULT_REPS: usize = 11;
pub const MIN_REPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Dl,
    Sparql,
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryKind::Dl => "dl",
            QueryKind::Sparql => "sparql",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchQuery {
    pub name: String,
    pub kind: QueryKind,
    pub text: String,
}

impl BenchQuery {
    pub fn dl(name: &str, text: &str) -> Self {
        BenchQuery {
            name: name.into(),
            kind: QueryKind::Dl,
            text: text.into(),
        }
    }

    pub fn sparql(name: &str, text: &str) -> Self {
        BenchQuery {
            name: name.into(),
            kind: QueryKind::Sparql,
            text: text.into(),
        }
    }
}

/// The SPARQL example from the original SSDOnt description.
pub const BEST_RESULT_QUERY: &str = "PREFIX ssid: <http://bdi.si.ehu.es/bdi/ontologies/SSDOnt/SSDOnt#>
PREFIX aut: <http://bdi.si.ehu.es/bdi/ontologies/SSDOnt/SSDOntAutism#>

SELECT ?study ?interType ?val
WHERE {
  ?study a ssid:AB_Design ; ssid:hasOutcome aut:correct_answers_wh ; ssid:hasPhase ?ph .
  ?ph a ssid:SimpleInterventionPhase ; ssid:hasInterventionType ?interType .
  ?interType a aut:Peer-mediatedIntervention .
  ?res ssid:isResultOfPhase ?ph ; ssid:hasValue ?val
} order by DESC(?val) LIMIT 1
";

pub const YOUNG_AT_SCHOOL_QUERY: &str = "AcrossSettingMBD and hasParticipant some (Participant and hasAge some (years some xsd:int[<10])) and hasMBDItem some (AcrossSettingMBDItem and hasSetting value school)";

/// The three published example queries plus one query per competency
/// question, with individual names taken from `kb`: the first phase of the
/// first study that has phases, and the first study.
pub fn default_queries(kb: &KnowledgeBase) -> Vec<BenchQuery> {
    let local = |t: &Term| vocab::local_name(t.as_iri().unwrap_or_default()).to_string();
    let first = kb.studies.first().map_or_else(|| "ssd0001".to_string(), |s| local(&s.id));
    let phase = kb
        .studies
        .iter()
        .find_map(|s| s.phases.first())
        .map_or_else(|| format!("{first}_ph01"), |p| local(&p.id));
    vec![
        BenchQuery::dl("results_of_phase", &format!("Result and isResultOfPhase some {{{phase}}}")),
        BenchQuery::dl("young_at_school", YOUNG_AT_SCHOOL_QUERY),
        BenchQuery::sparql("best_result", BEST_RESULT_QUERY),
        BenchQuery::sparql("study_type", &format!("SELECT ?type WHERE {{ ssd:{first} a ?type }}")),
        BenchQuery::dl("by_condition", "SingleSubjectDesign and hasParticipant some (hasCondition value autism)"),
        BenchQuery::dl(
            "by_age_range",
            "SingleSubjectDesign and hasParticipant some (hasAge some (years some xsd:int[>=2] and years some xsd:int[<=4]))",
        ),
        BenchQuery::sparql(
            "by_intervention",
            "SELECT ?study ?ph WHERE { ?study ssd:hasPhase ?ph . ?ph ssd:hasInterventionType aut:weekendInterview }",
        ),
        BenchQuery::sparql(
            "by_mbd_dimension",
            "SELECT ?study ?item ?setting WHERE { ?study a ssd:AcrossSettingMBD ; ssd:hasMBDItem ?item . ?item ssd:hasSetting ?setting }",
        ),
    ]
}

/// Reads `*.dl` and `*.rq` files from `dir`, named by file stem, in name
/// order.
pub fn load_queries(dir: impl AsRef<Path>) -> Result<Vec<BenchQuery>, BenchError> {
    let dir = dir.as_ref();
    let io = |e: std::io::Error| BenchError::Io(format!("{}: {e}", dir.display()));
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let kind = match path.extension().and_then(|e| e.to_str()) {
            Some("dl") => QueryKind::Dl,
            Some("rq") | Some("sparql") => QueryKind::Sparql,
            _ => continue,
        };
        let text = std::fs::read_to_string(&path).map_err(io)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("query").to_string();
        out.push(BenchQuery { name, kind, text });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    if out.is_empty() {
        return Err(BenchError::Io(format!("{}: no .dl or .rq files", dir.display())));
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("benchmark needs at least one study")]
    NoStudies,
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("generated corpus failed to reload: {0}")]
    Reload(String),
    #[error(transparent)]
    Materialize(#[from] MaterializeError),
    #[error("query {name}: {source}")]
    Query { name: String, source: QueryError },
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone)]
pub struct QueryTiming {
    pub name: String,
    pub kind: QueryKind,
    /// First evaluation on a freshly built index.
    pub cold: Duration,
    /// Median over the repetitions after the first.
    pub warm_median: Duration,
    pub answer: BindingTable,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub n: usize,
    pub seed: u64,
    pub reps: usize,
    pub stats: KbStats,
    pub load: Duration,
    pub materialize: Duration,
    pub index: Duration,
    pub queries: Vec<QueryTiming>,
    pub machine: String,
}

/// Repetition count from the environment, clamped to at least
/// [`MIN_REPS`].
pub fn reps_from_env() -> usize {
    std::env::var(REPS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_REPS)
        .max(MIN_REPS)
}

pub fn median(samples: &mut [Duration]) -> Duration {
    samples.sort_unstable();
    match samples.len() {
        0 => Duration::ZERO,
        n if n % 2 == 1 => samples[n / 2],
        n => (samples[n / 2 - 1] + samples[n / 2]) / 2,
    }
}

enum Parsed {
    Dl(ClassExpr),
    Sparql(SparqlQuery),
}

fn run_query(engine: &QueryEngine, q: &Parsed) -> Result<BindingTable, QueryError> {
    match q {
        Parsed::Dl(e) => Ok(BindingTable::column("x", &engine.dl(e)?)),
        Parsed::Sparql(s) => Ok(engine.sparql(s)),
    }
}

/// Generates `n` studies, reloads them from Turtle, materializes, and
/// times every query `reps` times (at least [`MIN_REPS`]). Without
/// `queries`, runs [`default_queries`] for the generated corpus.
pub fn run_bench(
    n: usize,
    profile: &GenProfile,
    queries: Option<&[BenchQuery]>,
    reps: usize,
) -> Result<BenchReport, BenchError> {
    if n == 0 {
        return Err(BenchError::NoStudies);
    }
    let reps = reps.max(MIN_REPS);
    let generated = generate_studies(n, profile)?;
    let defaults;
    let queries = match queries {
        Some(q) => q,
        None => {
            defaults = default_queries(&generated);
            &defaults[..]
        }
    };
    let parsed: Vec<Parsed> = queries
        .iter()
        .map(|q| {
            let r = match q.kind {
                QueryKind::Dl => parse_dl_query(&q.text).map(Parsed::Dl),
                QueryKind::Sparql => parse_sparql(&q.text).map(Parsed::Sparql),
            };
            r.map_err(|source| BenchError::Query {
                name: q.name.clone(),
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let text = serialize_turtle(&kb_to_graph(&generated));

    let t = Instant::now();
    let kb = crate::load_kb_str(&text).map_err(|e| BenchError::Reload(e.to_string()))?;
    let load = t.elapsed();
    let stats = kb_stats(&kb);

    let t = Instant::now();
    let kb = materialize_types(&kb)?;
    let materialize = t.elapsed();

    let t = Instant::now();
    let engine = QueryEngine::new(&kb);
    let index = t.elapsed();

    let mut timings = Vec::new();
    for (q, p) in queries.iter().zip(&parsed) {
        let err = |source| BenchError::Query {
            name: q.name.clone(),
            source,
        };
        let t = Instant::now();
        let answer = run_query(&engine, p).map_err(err)?;
        let cold = t.elapsed();
        let mut samples = Vec::with_capacity(reps);
        for _ in 0..reps {
            let t = Instant::now();
            let again = run_query(&engine, p).map_err(err)?;
            samples.push(t.elapsed());
            debug_assert_eq!(again, answer);
        }
        timings.push(QueryTiming {
            name: q.name.clone(),
            kind: q.kind,
            cold,
            warm_median: median(&mut samples),
            answer,
        });
    }

    Ok(BenchReport {
        n,
        seed: profile.seed,
        reps,
        stats,
        load,
        materialize,
        index,
        queries: timings,
        machine: machine_note(),
    })
}

fn machine_note() -> String {
    let cpu = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split_once(':'))
                .map(|(_, v)| v.trim().to_string())
        })
        .unwrap_or_else(|| "unknown cpu".into());
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let build = if cfg!(debug_assertions) { "debug" } else { "release" };
    format!(
        "{} {} {cpu}, {threads} threads, {build} build",
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}

fn ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1000.0)
}

impl BenchReport {
    pub fn query(&self, name: &str) -> Option<&QueryTiming> {
        self.queries.iter().find(|q| q.name == name)
    }

    /// `key=value` lines.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("n", &self.n);
        kv("seed", &self.seed);
        kv("reps", &self.reps);
        kv("machine", &self.machine);
        kv("stats.studies", &self.stats.study_count);
        kv("stats.triples", &self.stats.triple_count);
        kv("stats.individuals", &self.stats.individual_count);
        kv("time.load_ms", &ms(self.load));
        kv("time.materialize_ms", &ms(self.materialize));
        kv("time.index_ms", &ms(self.index));
        for q in &self.queries {
            let p = format!("query.{}", q.name);
            kv(&format!("{p}.kind"), &q.kind);
            kv(&format!("{p}.rows"), &q.answer.len());
            kv(&format!("{p}.cold_ms"), &ms(q.cold));
            kv(&format!("{p}.warm_median_ms"), &ms(q.warm_median));
        }
        out
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "corpus: {} studies (seed {})", self.n, self.seed)?;
        writeln!(
            f,
            "        {} triples, {} individuals",
            self.stats.triple_count, self.stats.individual_count
        )?;
        writeln!(f, "machine: {}", self.machine)?;
        writeln!(f, "load        {:>10} ms", ms(self.load))?;
        writeln!(f, "materialize {:>10} ms", ms(self.materialize))?;
        writeln!(f, "index       {:>10} ms", ms(self.index))?;
        writeln!(f)?;
        let width = self.queries.iter().map(|q| q.name.len()).max().unwrap_or(5).max(5);
        writeln!(
            f,
            "{:width$}  {:6}  {:>6}  {:>10}  {:>12}",
            "query", "kind", "rows", "cold ms", "median ms"
        )?;
        for q in &self.queries {
            writeln!(
                f,
                "{:width$}  {:6}  {:>6}  {:>10}  {:>12}",
                q.name,
                q.kind.to_string(),
                q.answer.len(),
                ms(q.cold),
                ms(q.warm_median)
            )?;
        }
        writeln!(f, "(median over {} runs)", self.reps)
    }
}
