//! `annmax verify`: engine versus brute-force oracle.

use std::fmt::Write as _;

use annmax_core::instances::{instance_rng, random_instance, GRID};
use annmax_core::oracle::{brute_query, brute_top_k};
use annmax_core::{l2_query, AggregateResult, L1Index, Metric, PartitionTree, Point};

use crate::error::CliError;
use crate::io::{MetricName, NumberedQuery};
use crate::map_ordered;
use crate::query::resolve_metrics;

/// Where the checked instances come from.
#[derive(Debug, Clone)]
pub enum Source<'a> {
    /// `count` generated instances; instance `i` is reproducible from
    /// `(seed, i)` alone.
    Random { seed: u64, count: usize },
    /// Every record of a query file against one point set.
    Files { points: &'a [Point], queries: &'a [NumberedQuery] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub passed: usize,
    pub total: usize,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Runs every instance; the report text is identical across runs with the
/// same inputs, whatever the thread count.
pub fn verify(source: &Source, metric: MetricName, threads: usize, inject_fault: bool) -> Result<Report, CliError> {
    let mut text = String::new();
    let outcomes: Vec<Option<String>> = match *source {
        Source::Random { seed, count } => {
            let _ = writeln!(text, "verify {}: {count} random instances, seed {seed}", metric_label(metric.into()));
            let indices: Vec<u64> = (0..count as u64).collect();
            let max_m = if metric == MetricName::L1 { 50 } else { 40 };
            map_ordered(&indices, threads, |_, &i| {
                let inst = random_instance(&mut instance_rng(seed, i), 200, max_m, GRID);
                check(&inst.points, &inst.queries, metric.into(), Some(inst.k), inject_fault)
                    .map(|m| m.map(|m| format!("instance {i} (reproduce with --seed {seed}, instance index {i}): {m}")))
            })
            .into_iter()
            .collect::<Result<_, _>>()?
        }
        Source::Files { points, queries } => {
            let _ = writeln!(text, "verify {}: {} query records", metric_label(metric.into()), queries.len());
            let metrics = resolve_metrics(queries, metric, false)?;
            map_ordered(queries, threads, |i, nq| {
                check(points, &nq.record.points(), metrics[i], nq.record.k, inject_fault)
                    .map(|m| m.map(|m| format!("query record {i} (line {}): {m}", nq.line)))
            })
            .into_iter()
            .collect::<Result<_, _>>()?
        }
    };
    let total = outcomes.len();
    let failures: Vec<&String> = outcomes.iter().flatten().collect();
    if let Some(first) = failures.first() {
        let _ = writeln!(text, "first mismatch: {first}");
    }
    let passed = total - failures.len();
    let _ = writeln!(text, "{passed}/{total} ok");
    Ok(Report { text, passed, total })
}

fn metric_label(m: Metric) -> &'static str {
    match m {
        Metric::L1 => "l1",
        Metric::L2 => "l2",
    }
}

/// Describes the first disagreement with the oracle, if any. L1 answers
/// must match exactly (including top-k when `k` is given); L2 must match
/// the id and agree on `g` to 1e-9 relative.
fn check(
    points: &[Point],
    queries: &[Point],
    metric: Metric,
    k: Option<usize>,
    inject_fault: bool,
) -> Result<Option<String>, CliError> {
    let want = brute_query(points, queries, metric)?;
    let mut got = match metric {
        Metric::L1 => L1Index::build(points)?.query(queries)?,
        Metric::L2 => l2_query(&PartitionTree::build(points)?, queries)?,
    };
    if inject_fault {
        got.g += 1.0;
    }
    let same = match metric {
        Metric::L1 => got == want,
        Metric::L2 => got.point.id == want.point.id && (got.g - want.g).abs() <= 1e-9 * want.g.max(1.0),
    };
    if !same {
        return Ok(Some(format!("engine {}, oracle {}", describe(&got), describe(&want))));
    }
    if let (Metric::L1, Some(k)) = (metric, k) {
        let got = L1Index::build(points)?.top_k(queries, k)?;
        let want = brute_top_k(points, queries, metric, k)?;
        if let Some(pos) = (0..got.len().max(want.len())).find(|&i| got.get(i) != want.get(i)) {
            let show = |r: Option<&AggregateResult>| r.map_or("nothing".to_string(), describe);
            return Ok(Some(format!(
                "top-{k} rank {pos}: engine {}, oracle {}",
                show(got.get(pos)),
                show(want.get(pos))
            )));
        }
    }
    Ok(None)
}

fn describe(r: &AggregateResult) -> String {
    format!("id {} at ({}, {}) g {}", r.point.id, r.point.x, r.point.y, r.g)
}
