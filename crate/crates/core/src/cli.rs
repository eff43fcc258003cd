//! The `ssdont` command line.
//!
//! Exit codes: 0 on success, 1 when a knowledge base has validation
//! violations, 2 on parse, I/O or usage errors. Results go to `out`,
//! diagnostics to `err`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{load_queries, reps_from_env, run_bench};
use crate::classifier::{classify_design, materialize_types, ClassifyError};
use crate::query::{parse_dl_query, parse_sparql, BindingTable, OutputFormat, QueryEngine};
use crate::synth::{generate_studies, kb_stats, GenProfile};
use crate::turtle::{kb_to_graph, serialize_turtle};
use crate::validate::{validate_study, Violation};
use crate::vocab::{local_name, PrefixTable};
use crate::{load_kb_file, KnowledgeBase};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ssdont", version, about = "Annotate, classify and query single-subject design studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every study against the structural rules.
    Validate { file: PathBuf },
    /// Print the design classes of each study, most specific first.
    Classify { file: PathBuf },
    /// Evaluate a DL class expression or a SPARQL query.
    Query(QueryArgs),
    /// Generate a synthetic knowledge base.
    Gen {
        #[arg(short = 'n', long = "count")]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// TOML generation profile.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Time loading, materialization and queries on a generated corpus.
    Bench {
        #[arg(short = 'n', long = "count", default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory of `.dl` and `.rq` query files.
        #[arg(long)]
        queries: Option<PathBuf>,
        /// Where to write the key=value report.
        #[arg(long, default_value = "bench_report.txt")]
        report: PathBuf,
    },
    /// Print triple, individual and per-class counts.
    Stats { file: PathBuf },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("lang").required(true).args(["dl", "sparql"])))]
#[command(group(clap::ArgGroup::new("source").required(true).args(["expr", "query_file"])))]
struct QueryArgs {
    #[arg(long)]
    dl: bool,
    #[arg(long)]
    sparql: bool,
    /// Query text.
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    /// File holding the query text.
    #[arg(short = 'f', long = "file")]
    query_file: Option<PathBuf>,
    kb: PathBuf,
    #[arg(long, default_value = "tsv")]
    format: OutputFormat,
}

/// Failure carrying its exit code; the message is already written.
struct Exit(i32);

type CmdResult = Result<(), Exit>;

fn fail(err: &mut dyn Write, code: i32, msg: impl std::fmt::Display) -> Exit {
    let _ = writeln!(err, "error: {msg}");
    Exit(code)
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Validate { file } => validate(&file, out, err),
        Command::Classify { file } => classify(&file, out, err),
        Command::Query(q) => query(&q, out, err),
        Command::Gen {
            count,
            seed,
            profile,
            output,
        } => gen(count, seed, profile.as_deref(), output.as_deref(), out, err),
        Command::Bench {
            count,
            seed,
            queries,
            report,
        } => bench(count, seed, queries.as_deref(), &report, out, err),
        Command::Stats { file } => stats(&file, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Exit(code)) => code,
    }
}

fn load(path: &Path, err: &mut dyn Write) -> Result<KnowledgeBase, Exit> {
    load_kb_file(path).map_err(|e| fail(err, EXIT_ERROR, e))
}

fn write_violation(w: &mut dyn Write, v: &Violation, prefixes: &PrefixTable) {
    let _ = writeln!(w, "{}\t{}\t{}", v.code, v.subject.display_with(prefixes), v.message);
}

fn validate(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let kb = load(file, err)?;
    let mut count = 0;
    for study in &kb.studies {
        for v in validate_study(study, &kb.taxonomy) {
            write_violation(out, &v, &kb.prefixes);
            count += 1;
        }
    }
    if count > 0 {
        return Err(Exit(EXIT_VIOLATIONS));
    }
    let _ = writeln!(out, "{} stud{} valid", kb.studies.len(), if kb.studies.len() == 1 { "y" } else { "ies" });
    Ok(())
}

fn classify(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let kb = load(file, err)?;
    let mut invalid = false;
    for study in &kb.studies {
        match classify_design(study, &kb.taxonomy) {
            Ok(c) => {
                let names: Vec<&str> = kb
                    .taxonomy
                    .sort_specific_first(&c.classes)
                    .into_iter()
                    .map(|c| local_name(c))
                    .collect();
                let _ = writeln!(out, "{}: {}", study.id.label(), names.join(", "));
                for w in &c.warnings {
                    write_violation(err, w, &kb.prefixes);
                }
            }
            Err(ClassifyError::Invalid { violations, .. }) => {
                invalid = true;
                for v in &violations {
                    write_violation(err, v, &kb.prefixes);
                }
            }
            Err(e) => return Err(fail(err, EXIT_ERROR, e)),
        }
    }
    if invalid {
        Err(Exit(EXIT_VIOLATIONS))
    } else {
        Ok(())
    }
}

/// Answers a query on an already materialized kb, returning the table the
/// `query` subcommand prints.
pub fn answer_query(kb: &KnowledgeBase, dl: bool, text: &str) -> Result<BindingTable, crate::query::QueryError> {
    let engine = QueryEngine::new(kb);
    if dl {
        Ok(BindingTable::column("x", &engine.dl(&parse_dl_query(text)?)?))
    } else {
        Ok(engine.sparql(&parse_sparql(text)?))
    }
}

fn query(args: &QueryArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let text = match (&args.expr, &args.query_file) {
        (Some(e), _) => e.clone(),
        (None, Some(f)) => {
            std::fs::read_to_string(f).map_err(|e| fail(err, EXIT_ERROR, format!("cannot read {}: {e}", f.display())))?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let kb = load(&args.kb, err)?;
    let kb = materialize(&kb, err)?;
    let table = answer_query(&kb, args.dl, &text).map_err(|e| fail(err, EXIT_ERROR, e))?;
    let _ = write!(out, "{}", table.render(args.format, &kb.prefixes));
    Ok(())
}

fn materialize(kb: &KnowledgeBase, err: &mut dyn Write) -> Result<KnowledgeBase, Exit> {
    materialize_types(kb).map_err(|e| {
        for (_, violations) in &e.failures {
            for v in violations {
                write_violation(err, v, &kb.prefixes);
            }
        }
        Exit(EXIT_VIOLATIONS)
    })
}

fn gen(
    count: usize,
    seed: Option<u64>,
    profile: Option<&Path>,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let mut p = match profile {
        Some(path) => GenProfile::from_file(path).map_err(|e| fail(err, EXIT_ERROR, e))?,
        None => GenProfile::default(),
    };
    if let Some(s) = seed {
        p.seed = s;
    }
    let kb = generate_studies(count, &p).map_err(|e| fail(err, EXIT_ERROR, e))?;
    let text = serialize_turtle(&kb_to_graph(&kb));
    match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| fail(err, EXIT_ERROR, format!("cannot write {}: {e}", path.display())))?;
            let _ = writeln!(err, "wrote {count} studies to {}", path.display());
        }
        None => {
            let _ = write!(out, "{text}");
        }
    }
    Ok(())
}

fn bench(
    count: usize,
    seed: Option<u64>,
    queries: Option<&Path>,
    report: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let queries = match queries {
        Some(dir) => Some(load_queries(dir).map_err(|e| fail(err, EXIT_ERROR, e))?),
        None => None,
    };
    let mut profile = GenProfile::default();
    if let Some(s) = seed {
        profile.seed = s;
    }
    let r = run_bench(count, &profile, queries.as_deref(), reps_from_env()).map_err(|e| fail(err, EXIT_ERROR, e))?;
    let _ = write!(out, "{r}");
    std::fs::write(report, r.to_kv())
        .map_err(|e| fail(err, EXIT_ERROR, format!("cannot write {}: {e}", report.display())))?;
    let _ = writeln!(err, "report written to {}", report.display());
    Ok(())
}

fn stats(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let kb = load(file, err)?;
    let _ = write!(out, "{}", kb_stats(&kb));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("ssdont").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&[]).0, EXIT_ERROR);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_ERROR);
        assert_eq!(run_args(&["query", "-e", "Result", "kb.ttl"]).0, EXIT_ERROR);
        assert_eq!(run_args(&["query", "--dl", "--sparql", "-e", "Result", "kb.ttl"]).0, EXIT_ERROR);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("classify"));
    }

    #[test]
    fn missing_file_exits_two() {
        let (code, _, err) = run_args(&["validate", "/nonexistent/kb.ttl"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("cannot read"));
    }
}
