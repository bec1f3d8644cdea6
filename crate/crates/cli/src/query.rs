//! `annmax query`: answer every record of a query file.

use std::time::Instant;

use annmax_core::{l2_query_with_stats, L1Index, Metric, PartitionTree, Point};

use crate::error::CliError;
use crate::io::{Answer, MetricName, NumberedQuery, RecordStats, ResultRecord};
use crate::map_ordered;

/// Indexes over P, built only for the metrics some record asks for.
pub struct Engines {
    pub l1: Option<L1Index>,
    pub l2: Option<PartitionTree>,
}

impl Engines {
    pub fn build(points: &[Point], l1: bool, l2: bool) -> Result<Self, CliError> {
        Ok(Engines {
            l1: if l1 { Some(L1Index::build(points)?) } else { None },
            l2: if l2 { Some(PartitionTree::build(points)?) } else { None },
        })
    }
}

/// The metric of each record, after applying per-record overrides; rejects
/// top-k under L2.
pub fn resolve_metrics(queries: &[NumberedQuery], default: MetricName, topk: bool) -> Result<Vec<Metric>, CliError> {
    queries
        .iter()
        .map(|nq| {
            let metric = nq.record.metric.unwrap_or(default);
            if topk && metric == MetricName::L2 {
                return Err(CliError::Usage(format!("line {}: top-k queries are only supported for l1", nq.line)));
            }
            Ok(metric.into())
        })
        .collect()
}

/// One result record per query record, in input order.
pub fn answer_all(
    points: &[Point],
    queries: &[NumberedQuery],
    default: MetricName,
    topk: bool,
    threads: usize,
) -> Result<Vec<ResultRecord>, CliError> {
    let metrics = resolve_metrics(queries, default, topk)?;
    if queries.is_empty() {
        return Ok(Vec::new());
    }
    let engines = Engines::build(points, metrics.contains(&Metric::L1), metrics.contains(&Metric::L2))?;
    map_ordered(queries, threads, |i, nq| answer(&engines, i, nq, metrics[i], topk))
        .into_iter()
        .collect()
}

fn answer(engines: &Engines, index: usize, nq: &NumberedQuery, metric: Metric, topk: bool) -> Result<ResultRecord, CliError> {
    let q = nq.record.points();
    let mut stats = RecordStats::default();
    let start = Instant::now();
    let results = match metric {
        Metric::L1 => {
            let idx = engines.l1.as_ref().expect("built for every l1 record");
            if topk {
                let (r, s) = idx.top_k_with_stats(&q, nq.record.k.unwrap_or(1))?;
                stats.drag_queries = s.drag_queries;
                r
            } else {
                let (r, s) = idx.query_with_stats(&q)?;
                stats.drag_queries = s.drag_queries;
                vec![r]
            }
        }
        Metric::L2 => {
            let tree = engines.l2.as_ref().expect("built for every l2 record");
            let (r, s) = l2_query_with_stats(tree, &q)?;
            stats.nodes_visited = s.nodes_visited;
            vec![r]
        }
    };
    stats.time_ns = start.elapsed().as_nanos() as u64;
    Ok(ResultRecord { query_index: index, answers: results.iter().map(Answer::from).collect(), stats })
}
