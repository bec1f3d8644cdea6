//! `annmax bench`: build and query timings on seeded uniform instances.

use std::fmt::Write as _;
use std::time::Instant;

use annmax_core::instances::{instance_rng, random_points, GRID};
use annmax_core::{l2_query_with_stats, L1Index, PartitionTree, Point};
use serde::Serialize;

use crate::error::CliError;
use crate::io::MetricName;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub m: usize,
    pub metric: MetricName,
    pub seed: u64,
    pub queries: usize,
}

/// One benchmark row. `mean_ops` is the mean number of dragging queries
/// (L1) or visited partition-tree nodes (L2) per query; `ops_growth` is its
/// ratio to the previous row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub metric: MetricName,
    pub n: usize,
    pub m: usize,
    pub queries: usize,
    pub build_ms: f64,
    pub p50_us: f64,
    pub p95_us: f64,
    pub mean_ops: f64,
    pub ops_growth: Option<f64>,
}

pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>, CliError> {
    if cfg.ns.contains(&0) || cfg.m == 0 || cfg.queries == 0 {
        return Err(CliError::Usage("--n, --m and --queries must be at least 1".into()));
    }
    let mut rows: Vec<BenchRow> = Vec::new();
    for (row, &n) in cfg.ns.iter().enumerate() {
        let mut rng = instance_rng(cfg.seed, row as u64);
        let points = random_points(&mut rng, n, GRID);
        let query_sets: Vec<_> = (0..cfg.queries).map(|_| random_points(&mut rng, cfg.m, GRID)).collect();
        let (build, mut latencies, ops) = match cfg.metric {
            MetricName::L1 => measure(
                || L1Index::build(&points),
                |idx, q| Ok(idx.query_with_stats(q)?.1.drag_queries),
                &query_sets,
            )?,
            MetricName::L2 => measure(
                || PartitionTree::build(&points),
                |tree, q| Ok(l2_query_with_stats(tree, q)?.1.nodes_visited),
                &query_sets,
            )?,
        };
        let build_ms = build * 1e3;
        latencies.sort_by(f64::total_cmp);
        let mean_ops = ops as f64 / cfg.queries as f64;
        rows.push(BenchRow {
            metric: cfg.metric,
            n,
            m: cfg.m,
            queries: cfg.queries,
            build_ms,
            p50_us: percentile(&latencies, 0.50) * 1e6,
            p95_us: percentile(&latencies, 0.95) * 1e6,
            mean_ops,
            ops_growth: rows.last().map(|prev| mean_ops / prev.mean_ops),
        });
    }
    Ok(rows)
}

/// Build time, per-query latencies (seconds) and the summed operation
/// counts reported by `query`.
fn measure<I>(
    build: impl FnOnce() -> annmax_core::Result<I>,
    query: impl Fn(&I, &[Point]) -> annmax_core::Result<usize>,
    query_sets: &[Vec<Point>],
) -> Result<(f64, Vec<f64>, usize), CliError> {
    let start = Instant::now();
    let index = build()?;
    let build = start.elapsed().as_secs_f64();
    let mut latencies = Vec::with_capacity(query_sets.len());
    let mut ops = 0;
    for q in query_sets {
        let t = Instant::now();
        ops += query(&index, q)?;
        latencies.push(t.elapsed().as_secs_f64());
    }
    Ok((build, latencies, ops))
}

/// Nearest-rank percentile of sorted samples.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:>9} {:>6} {:>8} {:>12} {:>10} {:>10} {:>10} {:>7}",
        "metric", "n", "m", "queries", "build_ms", "p50_us", "p95_us", "mean_ops", "growth"
    );
    for r in rows {
        let metric = match r.metric {
            MetricName::L1 => "l1",
            MetricName::L2 => "l2",
        };
        let growth = r.ops_growth.map_or("-".to_string(), |g| format!("{g:.2}"));
        let _ = writeln!(
            out,
            "{:<6} {:>9} {:>6} {:>8} {:>12.3} {:>10.2} {:>10.2} {:>10.2} {:>7}",
            metric, r.n, r.m, r.queries, r.build_ms, r.p50_us, r.p95_us, r.mean_ops, growth
        );
    }
    let _ = writeln!(out, "mean_ops: dragging queries per query (l1), visited tree nodes per query (l2)");
    out
}

pub fn ndjson(rows: &[BenchRow]) -> String {
    rows.iter().map(|r| serde_json::to_string(r).expect("plain data") + "\n").collect()
}
