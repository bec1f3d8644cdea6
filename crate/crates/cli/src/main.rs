use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use annmax_cli::bench::{self, BenchConfig};
use annmax_cli::io::{parse_queries, MetricName, PointFile};
use annmax_cli::verify::{self, Source};
use annmax_cli::{query, read_file, CliError};
use clap::{Args, Parser, Subcommand};

/// Exact aggregate-max nearest-neighbor queries (L1 and L2).
#[derive(Debug, Parser)]
#[command(name = "annmax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Answer each record of a query file; prints one JSON result per line.
    Query(QueryArgs),
    /// Compare the engines against brute force on files or seeded instances.
    Verify(VerifyArgs),
    /// Time index construction and queries on seeded uniform point sets.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// CSV point file, one "x,y" per line, optional "x,y" header.
    #[arg(long)]
    points: PathBuf,
    /// JSON-lines query file: {"q": [[x,y],...], "k": K, "metric": "l1"|"l2"}.
    #[arg(long)]
    queries: PathBuf,
    /// Default metric for records without their own.
    #[arg(long, value_enum, default_value = "l1")]
    metric: MetricName,
    /// Return the k best points per record (k from the record, default 1; l1 only).
    #[arg(long)]
    topk: bool,
    /// Worker threads; output order is always the input order.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, requires = "queries", conflicts_with = "random")]
    points: Option<PathBuf>,
    #[arg(long, requires = "points")]
    queries: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "l1")]
    metric: MetricName,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of seeded random instances to check.
    #[arg(long, required_unless_present = "points")]
    random: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Corrupt every engine answer, to check that mismatches are reported.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Point-set sizes; several comma-separated sizes give one row each.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Query-set size.
    #[arg(long, default_value_t = 100)]
    m: usize,
    #[arg(long, value_enum, default_value = "l1")]
    metric: MetricName,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of queries per size.
    #[arg(long, default_value_t = 200)]
    queries: usize,
    /// Print ndjson rows instead of the table.
    #[arg(long)]
    json: bool,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let mut stdout = std::io::stdout().lock();
    let mut emit = |text: &str| {
        // a closed pipe is not an error worth reporting
        let _ = stdout.write_all(text.as_bytes());
    };
    match cli.command {
        Command::Query(a) => {
            let points = PointFile::parse(&a.points.display().to_string(), &read_file(&a.points)?)?;
            let queries = parse_queries(&a.queries.display().to_string(), &read_file(&a.queries)?)?;
            let records = query::answer_all(&points.points, &queries, a.metric, a.topk, a.threads)?;
            let mut out = String::new();
            for r in &records {
                out.push_str(&serde_json::to_string(r).expect("plain data"));
                out.push('\n');
            }
            emit(&out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(a) => {
            let files = match (&a.points, &a.queries) {
                (Some(p), Some(q)) => Some((
                    PointFile::parse(&p.display().to_string(), &read_file(p)?)?,
                    parse_queries(&q.display().to_string(), &read_file(q)?)?,
                )),
                _ => None,
            };
            let source = match &files {
                Some((p, q)) => Source::Files { points: &p.points, queries: q },
                None => Source::Random { seed: a.seed, count: a.random.unwrap_or(0) },
            };
            let report = verify::verify(&source, a.metric, a.threads, a.inject_fault)?;
            emit(&report.text);
            Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Bench(a) => {
            let cfg = BenchConfig { ns: a.n, m: a.m, metric: a.metric, seed: a.seed, queries: a.queries };
            let rows = bench::run(&cfg)?;
            emit(&if a.json { bench::ndjson(&rows) } else { bench::table(&rows) });
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("annmax: {e}");
            ExitCode::from(2)
        }
    }
}
